#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace gptraj {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Below this rotation angle the local-state kinematics use the first-order forms.
constexpr double kSmallAngle = 1e-4;

// Largest angle accepted by the inverse right Jacobian.
constexpr double kJrInvMaxAngle = 2.0 * 3.14159265358979323846 - 1e-6;

namespace so3 {

Mat3 hat(const Vec3& v);
Vec3 vee(const Mat3& m);

Mat3 exp(const Vec3& theta);
// Principal branch, |result| <= pi.
Vec3 log(const Mat3& R);

// An even scalar function of u = |theta| together with the two quantities
// needed to differentiate it through theta without dividing by u:
//   d g(|x|)/dx = h * x^T,   d h(|x|)/dx = k * x^T.
struct EvenFn {
    double g = 0, h = 0, k = 0;
};

// Coefficients of the right Jacobian and its inverse:
//   g1 = (1 - cos u)/u^2,  g2 = (u - sin u)/u^3,  g3 = 1/u^2 - (1 + cos u)/(2 u sin u)
EvenFn g1(double u);
EvenFn g2(double u);
EvenFn g3(double u);

// Ordinary derivative of order n (0..2) of g_j (j = 1..3) at u >= 0.
double g_eval(int j, int n, double u);

// Closed-form evaluation, no series branch. Exposed for continuity checks.
double g_eval_closed(int j, int n, double u);

// Below this |theta| the coefficient functions are evaluated by power series.
constexpr double kSeriesSwitch = 1.0;

Mat3 right_jacobian(const Vec3& theta);
Mat3 right_jacobian_inv(const Vec3& theta);

// f(u) = (u^)^2 and its partials applied to v and w.
Mat3 f(const Vec3& u);
Mat3 f_u(const Vec3& u, const Vec3& v);                  // d[f(u) v]/du
Mat3 f_uu(const Vec3& u, const Vec3& v, const Vec3& w);  // d[f_u(u,v) w]/du
Mat3 f_uv(const Vec3& u, const Vec3& v, const Vec3& w);  // d[f_u(u,v) w]/dv

// d[Jr(u) v]/du
Mat3 djr(const Vec3& u, const Vec3& v);
// d[djr(u,v) w]/du and d[djr(u,v) w]/dv
Mat3 ddjr_du(const Vec3& u, const Vec3& v, const Vec3& w);
Mat3 ddjr_dv(const Vec3& u, const Vec3& v, const Vec3& w);

// Same family for Jr^-1.
Mat3 djrinv(const Vec3& u, const Vec3& v);
Mat3 ddjrinv_du(const Vec3& u, const Vec3& v, const Vec3& w);
Mat3 ddjrinv_dv(const Vec3& u, const Vec3& v, const Vec3& w);

}  // namespace so3
}  // namespace gptraj
