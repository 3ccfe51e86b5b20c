#include "gptraj/so3.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "even_fn.hpp"

namespace gptraj::so3 {

namespace {

constexpr std::size_t kTerms = 18;

constexpr auto kG1 = detail::factorial_series<kTerms>(2, false);
constexpr auto kG2 = detail::factorial_series<kTerms>(3, false);

// (-1)^m B_{2m+2} / (2m+2)!
constexpr std::array<double, kTerms> kG3 = {
    0.083333333333333333333,  0.0013888888888888888889,  0.000033068783068783068783,
    8.2671957671957671958e-7, 2.0876756987868098979e-8,  5.2841901386874931849e-10,
    1.3382536530684678833e-11, 3.3896802963225828668e-13, 8.5860620562778445641e-15,
    2.1748686985580618730e-16, 5.5090028283602295152e-18, 1.3954464685812523341e-19,
    3.5347070396294674717e-21, 8.9535174270375468504e-23, 2.2679524523376830603e-24,
    5.7447906688722024453e-26, 1.4551724756148649019e-27, 3.6859949406653101782e-29,
};

void closed_g(int j, double u, double& g, double& d1, double& d2) {
    const double s = std::sin(u), c = std::cos(u);
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    switch (j) {
        case 1:
            g = 2.0 * std::sin(0.5 * u) * std::sin(0.5 * u) / u2;
            d1 = (u * s + 2.0 * c - 2.0) / u3;
            d2 = (u2 * c - 4.0 * u * s - 6.0 * c + 6.0) / u4;
            return;
        case 2:
            g = (u - s) / u3;
            d1 = (-u * c - 2.0 * u + 3.0 * s) / u4;
            d2 = (u2 * s + 6.0 * u * c + 6.0 * u - 12.0 * s) / u5;
            return;
        case 3: {
            // written with cot(u/2) so nothing cancels near u = pi
            const double ct = 1.0 / std::tan(0.5 * u);
            const double cs2 = 1.0 + ct * ct;
            g = 1.0 / u2 - ct / (2.0 * u);
            d1 = (0.25 * u2 * cs2 + 0.5 * u * ct - 2.0) / u3;
            d2 = (-0.25 * u3 * ct * cs2 - 0.5 * u2 * cs2 - u * ct + 6.0) / u4;
            return;
        }
        default:
            throw DomainError("g function index must be 1, 2 or 3");
    }
}

const std::array<double, kTerms>& table(int j) {
    switch (j) {
        case 1: return kG1;
        case 2: return kG2;
        case 3: return kG3;
        default: throw DomainError("g function index must be 1, 2 or 3");
    }
}

EvenFn eval_even(int j, double u) {
    if (u < 0) throw DomainError("g functions take u >= 0");
    if (j == 3 && u >= kJrInvMaxAngle) throw DomainError("g3 is singular at 2*pi, got u = " + std::to_string(u));
    if (u < kSeriesSwitch) return detail::even_series(table(j), u * u);
    double g, d1, d2;
    closed_g(j, u, g, d1, d2);
    return detail::even_from_derivatives(u, g, d1, d2);
}

}  // namespace

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
         -v.y(), v.x(), 0;
    return m;
}

Vec3 vee(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

Mat3 exp(const Vec3& theta) {
    const double u = theta.norm();
    const double a = u < kSmallAngle ? 1.0 - u * u / 6.0 : std::sin(u) / u;
    const double b = g1(u).g;
    const Mat3 K = hat(theta);
    return Mat3::Identity() + a * K + b * K * K;
}

Vec3 log(const Mat3& R) {
    const Vec3 axial = 0.5 * vee(R - R.transpose());
    const double s = axial.norm();
    const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
    const double phi = std::atan2(s, c);
    if (c > -0.9) {
        const double scale = phi < kSmallAngle ? 1.0 + phi * phi / 6.0 : phi / std::sin(phi);
        return scale * axial;
    }
    // Near pi: the symmetric part carries the axis.
    const Mat3 B = (0.5 * (R + R.transpose()) - c * Mat3::Identity()) / (1.0 - c);
    int i;
    B.diagonal().maxCoeff(&i);
    Vec3 axis = B.col(i) / std::sqrt(B(i, i));
    axis.normalize();
    const double d = axis.dot(axial);
    if (std::abs(d) > 1e-14) {
        if (d < 0) axis = -axis;
    } else {
        int m;
        axis.cwiseAbs().maxCoeff(&m);
        if (axis(m) < 0) axis = -axis;
    }
    return phi * axis;
}

EvenFn g1(double u) { return eval_even(1, u); }
EvenFn g2(double u) { return eval_even(2, u); }
EvenFn g3(double u) { return eval_even(3, u); }

double g_eval(int j, int n, double u) {
    const EvenFn e = eval_even(j, u);
    switch (n) {
        case 0: return e.g;
        case 1: return e.h * u;
        case 2: return e.h + e.k * u * u;
        default: throw DomainError("g_eval supports derivative orders 0..2");
    }
}

double g_eval_closed(int j, int n, double u) {
    if (u <= 0) throw DomainError("closed-form g functions need u > 0");
    double g, d1, d2;
    closed_g(j, u, g, d1, d2);
    switch (n) {
        case 0: return g;
        case 1: return d1;
        case 2: return d2;
        default: throw DomainError("g_eval supports derivative orders 0..2");
    }
}

Mat3 right_jacobian(const Vec3& theta) {
    const double u = theta.norm();
    return Mat3::Identity() - g1(u).g * hat(theta) + g2(u).g * f(theta);
}

Mat3 right_jacobian_inv(const Vec3& theta) {
    const double u = theta.norm();
    return Mat3::Identity() + 0.5 * hat(theta) + g3(u).g * f(theta);
}

Mat3 f(const Vec3& u) {
    const Mat3 K = hat(u);
    return K * K;
}

Mat3 f_u(const Vec3& u, const Vec3& v) { return -hat(u) * hat(v) - hat(u.cross(v)); }

Mat3 f_uu(const Vec3& /*u*/, const Vec3& v, const Vec3& w) { return hat(v.cross(w)) - hat(w) * hat(v); }

Mat3 f_uv(const Vec3& u, const Vec3& /*v*/, const Vec3& w) {
    const Mat3 U = hat(u), W = hat(w);
    return U * W + W * U;
}

Mat3 djr(const Vec3& u, const Vec3& v) {
    const double n = u.norm();
    const EvenFn a = g1(n), b = g2(n);
    return a.g * hat(v) + v.cross(u) * (a.h * u.transpose()) + b.g * f_u(u, v) + (f(u) * v) * (b.h * u.transpose());
}

Mat3 ddjr_du(const Vec3& u, const Vec3& v, const Vec3& w) {
    const double n = u.norm();
    const EvenFn a = g1(n), b = g2(n);
    const double uw = u.dot(w);
    const Vec3 vu = v.cross(u);
    const Mat3 Fu = f_u(u, v);
    const Vec3 fv = f(u) * v;
    return v.cross(w) * (a.h * u.transpose()) + (a.h * uw) * hat(v) +
           vu * (uw * a.k * u.transpose() + a.h * w.transpose()) + b.g * f_uu(u, v, w) +
           (Fu * w) * (b.h * u.transpose()) + (b.h * uw) * Fu + fv * (uw * b.k * u.transpose() + b.h * w.transpose());
}

Mat3 ddjr_dv(const Vec3& u, const Vec3& v, const Vec3& w) {
    const double n = u.norm();
    const EvenFn a = g1(n), b = g2(n);
    const double uw = u.dot(w);
    return -a.g * hat(w) - (a.h * uw) * hat(u) + b.g * f_uv(u, v, w) + (b.h * uw) * f(u);
}

Mat3 djrinv(const Vec3& u, const Vec3& v) {
    const EvenFn c = g3(u.norm());
    return -0.5 * hat(v) + c.g * f_u(u, v) + (f(u) * v) * (c.h * u.transpose());
}

Mat3 ddjrinv_du(const Vec3& u, const Vec3& v, const Vec3& w) {
    const EvenFn c = g3(u.norm());
    const double uw = u.dot(w);
    const Mat3 Fu = f_u(u, v);
    const Vec3 fv = f(u) * v;
    return c.g * f_uu(u, v, w) + (Fu * w) * (c.h * u.transpose()) + (c.h * uw) * Fu +
           fv * (uw * c.k * u.transpose() + c.h * w.transpose());
}

Mat3 ddjrinv_dv(const Vec3& u, const Vec3& v, const Vec3& w) {
    const EvenFn c = g3(u.norm());
    return 0.5 * hat(w) + c.g * f_uv(u, v, w) + (c.h * u.dot(w)) * f(u);
}

}  // namespace gptraj::so3
