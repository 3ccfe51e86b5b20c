#include "gptraj/se3.hpp"

#include <array>
#include <cmath>

#include "even_fn.hpp"

namespace gptraj::se3 {

namespace {

using so3::EvenFn;
using so3::hat;

constexpr std::size_t kTerms = 18;

// (u^2 + 2 cos u - 2) / (2 u^4)
constexpr auto kC2 = detail::factorial_series<kTerms>(4, false);
// (2u - 3 sin u + u cos u) / (2 u^5)
constexpr auto kC3 = detail::factorial_series<kTerms>(5, true);

EvenFn c2(double u) {
    if (u < so3::kSeriesSwitch) return detail::even_series(kC2, u * u);
    const double s = std::sin(u), c = std::cos(u);
    const double u2 = u * u, u4 = u2 * u2;
    return detail::even_from_derivatives(u, (u2 + 2.0 * c - 2.0) / (2.0 * u4),
                                         (-u2 - u * s - 4.0 * c + 4.0) / (u4 * u),
                                         (-u2 * c + 3.0 * u2 + 8.0 * u * s + 20.0 * c - 20.0) / (u4 * u2));
}

EvenFn c3(double u) {
    if (u < so3::kSeriesSwitch) return detail::even_series(kC3, u * u);
    const double s = std::sin(u), c = std::cos(u);
    const double u2 = u * u, u3 = u2 * u, u5 = u3 * u2;
    return detail::even_from_derivatives(u, (2.0 * u - 3.0 * s + u * c) / (2.0 * u5),
                                         (-u2 * s - 7.0 * u * c - 8.0 * u + 15.0 * s) / (2.0 * u5 * u),
                                         (-u3 * c + 11.0 * u2 * s + 50.0 * u * c + 40.0 * u - 90.0 * s) / (2.0 * u5 * u2));
}

// Q(theta, rho) is a sum of scalar functions of |theta| times products of theta^ and rho^.
// A word is such a product; letters index the vector table passed alongside.
enum Letter { kTheta = 0, kRho = 1, kSub = 2 };

struct Word {
    int n = 0;
    std::array<int, 4> l{};
};

struct Term {
    int coef;  // 0: constant 1, 1: g2, 2: c2, 3: c3
    double scale;
    Word word;
};

constexpr Word W(std::initializer_list<int> letters) {
    Word w;
    for (int x : letters) w.l[w.n++] = x;
    return w;
}

const std::array<Term, 9> kQTerms = {{
    {0, -0.5, W({kRho})},
    {1, 1.0, W({kTheta, kRho})},
    {1, 1.0, W({kRho, kTheta})},
    {1, -1.0, W({kTheta, kRho, kTheta})},
    {2, -1.0, W({kTheta, kTheta, kRho})},
    {2, -1.0, W({kRho, kTheta, kTheta})},
    {2, 3.0, W({kTheta, kRho, kTheta})},
    {3, 1.0, W({kTheta, kRho, kTheta, kTheta})},
    {3, 1.0, W({kTheta, kTheta, kRho, kTheta})},
}};

using Letters = std::array<Vec3, 3>;

Vec3 apply(const Word& w, const Letters& L, const Vec3& x) {
    Vec3 y = x;
    for (int i = w.n - 1; i >= 0; --i) y = L[w.l[i]].cross(y);
    return y;
}

Mat3 product(const Word& w, const Letters& L) {
    Mat3 M = Mat3::Identity();
    for (int i = 0; i < w.n; ++i) M = M * hat(L[w.l[i]]);
    return M;
}

// d[word x]/d(letter var): one term per occurrence, -prefix * (suffix x)^.
Mat3 jac(const Word& w, const Letters& L, const Vec3& x, int var) {
    std::array<Vec3, 5> suffix;
    suffix[w.n] = x;
    for (int i = w.n - 1; i >= 0; --i) suffix[i] = L[w.l[i]].cross(suffix[i + 1]);
    Mat3 J = Mat3::Zero();
    Mat3 prefix = Mat3::Identity();
    for (int i = 0; i < w.n; ++i) {
        if (w.l[i] == var) J -= prefix * hat(suffix[i + 1]);
        prefix = prefix * hat(L[w.l[i]]);
    }
    return J;
}

Word substitute(const Word& w, int pos) {
    Word r = w;
    r.l[pos] = kSub;
    return r;
}

struct Coefs {
    std::array<EvenFn, 4> c;
};

Coefs coefficients(double u) {
    Coefs r;
    r.c[0] = EvenFn{1.0, 0.0, 0.0};
    r.c[1] = so3::g2(u);
    r.c[2] = c2(u);
    r.c[3] = c3(u);
    return r;
}

}  // namespace

Pose3 exp(const Vec6& xi) {
    const Vec3 th = xi.head<3>();
    return {so3::exp(th), so3::right_jacobian(-th) * xi.tail<3>()};
}

Vec6 log(const Pose3& T) {
    Vec6 xi;
    const Vec3 th = so3::log(T.R);
    xi << th, so3::right_jacobian_inv(-th) * T.p;
    return xi;
}

Pose3 plus(const Pose3& T, const Vec6& delta) { return T * exp(delta); }

Mat6 adjoint(const Pose3& T) {
    Mat6 A = Mat6::Zero();
    A.topLeftCorner<3, 3>() = T.R;
    A.bottomLeftCorner<3, 3>() = hat(T.p) * T.R;
    A.bottomRightCorner<3, 3>() = T.R;
    return A;
}

Mat6 hat6(const Vec6& xi) {
    Mat6 M = Mat6::Zero();
    const Mat3 K = hat(xi.head<3>());
    M.topLeftCorner<3, 3>() = K;
    M.bottomRightCorner<3, 3>() = K;
    M.bottomLeftCorner<3, 3>() = hat(xi.tail<3>());
    return M;
}

Mat3 q_block(const Vec6& xi) {
    const Letters L{xi.head<3>(), xi.tail<3>(), Vec3::Zero()};
    const Coefs C = coefficients(L[kTheta].norm());
    Mat3 Q = Mat3::Zero();
    for (const Term& t : kQTerms) Q += t.scale * C.c[t.coef].g * product(t.word, L);
    return Q;
}

Mat3 q_block_inv(const Vec6& xi) {
    const Mat3 A = so3::right_jacobian_inv(xi.head<3>());
    return -A * q_block(xi) * A;
}

Mat6 right_jacobian(const Vec6& xi) {
    Mat6 J = Mat6::Zero();
    const Mat3 Jr = so3::right_jacobian(xi.head<3>());
    J.topLeftCorner<3, 3>() = Jr;
    J.bottomRightCorner<3, 3>() = Jr;
    J.bottomLeftCorner<3, 3>() = q_block(xi);
    return J;
}

Mat6 right_jacobian_inv(const Vec6& xi) {
    Mat6 J = Mat6::Zero();
    const Mat3 A = so3::right_jacobian_inv(xi.head<3>());
    J.topLeftCorner<3, 3>() = A;
    J.bottomRightCorner<3, 3>() = A;
    J.bottomLeftCorner<3, 3>() = -A * q_block(xi) * A;
    return J;
}

QGrad dq(const Vec6& xi, const Vec3& w) {
    const Letters L{xi.head<3>(), xi.tail<3>(), Vec3::Zero()};
    const Coefs C = coefficients(L[kTheta].norm());
    const Eigen::RowVector3d thT = L[kTheta].transpose();
    QGrad r{Mat3::Zero(), Mat3::Zero()};
    for (const Term& t : kQTerms) {
        const EvenFn& c = C.c[t.coef];
        r.d_theta += t.scale * (c.g * jac(t.word, L, w, kTheta) + apply(t.word, L, w) * (c.h * thT));
        r.d_rho += t.scale * c.g * jac(t.word, L, w, kRho);
    }
    return r;
}

QHess ddq(const Vec6& xi, const Vec3& w, const Vec3& v) {
    const Letters L{xi.head<3>(), xi.tail<3>(), v};
    const Coefs C = coefficients(L[kTheta].norm());
    const Eigen::RowVector3d thT = L[kTheta].transpose();
    const double thv = L[kTheta].dot(v);
    QHess r{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    for (const Term& t : kQTerms) {
        const EvenFn& c = C.c[t.coef];
        const Vec3 Ww = apply(t.word, L, w);
        const Mat3 Jth = jac(t.word, L, w, kTheta);
        const Mat3 Jrho = jac(t.word, L, w, kRho);
        // d_theta(xi,w) v = sum over theta slots of the word with that slot replaced by v, plus the h term
        Vec3 A = Vec3::Zero(), B = Vec3::Zero();
        Mat3 a_th = Mat3::Zero(), a_rho = Mat3::Zero(), a_w = Mat3::Zero();
        Mat3 b_th = Mat3::Zero(), b_rho = Mat3::Zero(), b_w = Mat3::Zero();
        for (int k = 0; k < t.word.n; ++k) {
            const Word s = substitute(t.word, k);
            if (t.word.l[k] == kTheta) {
                A += apply(s, L, w);
                a_th += jac(s, L, w, kTheta);
                a_rho += jac(s, L, w, kRho);
                a_w += product(s, L);
            } else {
                B += apply(s, L, w);
                b_th += jac(s, L, w, kTheta);
                b_rho += jac(s, L, w, kRho);
                b_w += product(s, L);
            }
        }
        const double sc = t.scale;
        r.c11 += sc * (c.g * a_th + A * (c.h * thT) + Jth * (c.h * thv) + Ww * (thv * c.k * thT) + Ww * (c.h * v.transpose()));
        r.c12 += sc * (c.g * a_rho + Jrho * (c.h * thv));
        r.c13 += sc * (c.g * a_w + product(t.word, L) * (c.h * thv));
        r.c21 += sc * (c.g * b_th + B * (c.h * thT));
        r.c22 += sc * c.g * b_rho;
        r.c23 += sc * c.g * b_w;
    }
    return r;
}

// Q'(xi) w = -A Q A w with A = Jr^-1(theta); differentiated by the product rule.
QGrad dqinv(const Vec6& xi, const Vec3& w) {
    const Vec3 th = xi.head<3>();
    const Mat3 A = so3::right_jacobian_inv(th);
    const Mat3 Q = q_block(xi);
    const Vec3 a = A * w;
    const Vec3 b = Q * a;
    const QGrad g = dq(xi, a);
    QGrad r;
    r.d_theta = -(so3::djrinv(th, b) + A * (g.d_theta + Q * so3::djrinv(th, w)));
    r.d_rho = -A * g.d_rho;
    return r;
}

QHess ddqinv(const Vec6& xi, const Vec3& w, const Vec3& v) {
    const Vec3 th = xi.head<3>();
    const Mat3 A = so3::right_jacobian_inv(th);
    const Mat3 Q = q_block(xi);
    const Vec3 a = A * w;
    const Vec3 b = Q * a;
    const Mat3 Hw = so3::djrinv(th, w);
    const Vec3 d = Hw * v;
    const QGrad ga = dq(xi, a);
    const QGrad gd = dq(xi, d);
    const QHess ca = ddq(xi, a, v);
    const Vec3 e = ga.d_theta * v + Q * d;
    const Mat3 Lb = so3::ddjrinv_dv(th, b, v);
    const Mat3 db_dth = ga.d_theta + Q * Hw;

    QHess r;
    const Mat3 de_dth = ca.c11 + ca.c13 * Hw + gd.d_theta + Q * so3::ddjrinv_du(th, w, v);
    r.c11 = -(so3::ddjrinv_du(th, b, v) + Lb * db_dth + so3::djrinv(th, e) + A * de_dth);
    r.c12 = -(Lb * ga.d_rho + A * (ca.c12 + gd.d_rho));
    r.c13 = -(Lb * Q * A + A * (ca.c13 * A + Q * so3::ddjrinv_dv(th, w, v)));
    r.c21 = -(so3::djrinv(th, ga.d_rho * v) + A * (ca.c21 + ca.c23 * Hw));
    r.c22 = -A * ca.c22;
    r.c23 = -A * ca.c23 * A;
    return r;
}

namespace {

Mat6 assemble_d(const Mat3& top, const Mat3& bl, const Mat3& br) {
    Mat6 M = Mat6::Zero();
    M.topLeftCorner<3, 3>() = top;
    M.bottomLeftCorner<3, 3>() = bl;
    M.bottomRightCorner<3, 3>() = br;
    return M;
}

}  // namespace

Mat6 djr(const Vec6& xi, const Vec6& x) {
    const Vec3 th = xi.head<3>();
    const QGrad g = dq(xi, x.head<3>());
    return assemble_d(so3::djr(th, x.head<3>()), g.d_theta + so3::djr(th, x.tail<3>()), g.d_rho);
}

Mat6 ddjr_dxi(const Vec6& xi, const Vec6& x, const Vec6& w) {
    const Vec3 th = xi.head<3>();
    const QHess c1 = ddq(xi, x.head<3>(), w.head<3>());
    const QHess c2 = ddq(xi, x.head<3>(), w.tail<3>());
    return assemble_d(so3::ddjr_du(th, x.head<3>(), w.head<3>()),
                      c1.c11 + so3::ddjr_du(th, x.tail<3>(), w.head<3>()) + c2.c21, c1.c12 + c2.c22);
}

Mat6 ddjr_dx(const Vec6& xi, const Vec6& x, const Vec6& w) {
    const Vec3 th = xi.head<3>();
    const QHess c1 = ddq(xi, x.head<3>(), w.head<3>());
    const QHess c2 = ddq(xi, x.head<3>(), w.tail<3>());
    return assemble_d(so3::ddjr_dv(th, x.head<3>(), w.head<3>()), c1.c13 + c2.c23,
                      so3::ddjr_dv(th, x.tail<3>(), w.head<3>()));
}

Mat6 djrinv(const Vec6& xi, const Vec6& x) {
    const Vec3 th = xi.head<3>();
    const QGrad g = dqinv(xi, x.head<3>());
    return assemble_d(so3::djrinv(th, x.head<3>()), g.d_theta + so3::djrinv(th, x.tail<3>()), g.d_rho);
}

Mat6 ddjrinv_dxi(const Vec6& xi, const Vec6& x, const Vec6& w) {
    const Vec3 th = xi.head<3>();
    const QHess c1 = ddqinv(xi, x.head<3>(), w.head<3>());
    const QHess c2 = ddqinv(xi, x.head<3>(), w.tail<3>());
    return assemble_d(so3::ddjrinv_du(th, x.head<3>(), w.head<3>()),
                      c1.c11 + so3::ddjrinv_du(th, x.tail<3>(), w.head<3>()) + c2.c21, c1.c12 + c2.c22);
}

Mat6 ddjrinv_dx(const Vec6& xi, const Vec6& x, const Vec6& w) {
    const Vec3 th = xi.head<3>();
    const QHess c1 = ddqinv(xi, x.head<3>(), w.head<3>());
    const QHess c2 = ddqinv(xi, x.head<3>(), w.tail<3>());
    return assemble_d(so3::ddjrinv_dv(th, x.head<3>(), w.head<3>()), c1.c13 + c2.c23,
                      so3::ddjrinv_dv(th, x.tail<3>(), w.head<3>()));
}

}  // namespace gptraj::se3
