#pragma once

#include "gptraj/so3.hpp"

namespace gptraj {

struct Pose3 {
    Mat3 R = Mat3::Identity();
    Vec3 p = Vec3::Zero();

    Pose3() = default;
    Pose3(const Mat3& R_, const Vec3& p_) : R(R_), p(p_) {}

    Pose3 operator*(const Pose3& o) const { return {R * o.R, R * o.p + p}; }
    Vec3 operator*(const Vec3& x) const { return R * x + p; }
    Pose3 inverse() const {
        const Mat3 Rt = R.transpose();
        return {Rt, -Rt * p};
    }
};

namespace se3 {

// Tangent vectors are ordered (theta, rho).
Pose3 exp(const Vec6& xi);
Vec6 log(const Pose3& T);

// Right-plus: T * exp(delta).
Pose3 plus(const Pose3& T, const Vec6& delta);

// Ad such that T exp(x) = exp(Ad x) T.
Mat6 adjoint(const Pose3& T);

// [[theta^, 0], [rho^, theta^]]; hat6(x) y == -hat6(y) x.
Mat6 hat6(const Vec6& xi);

// Lower-left blocks of the right Jacobian and of its inverse.
Mat3 q_block(const Vec6& xi);
Mat3 q_block_inv(const Vec6& xi);

Mat6 right_jacobian(const Vec6& xi);
Mat6 right_jacobian_inv(const Vec6& xi);

// First partials of Q(xi) w.
struct QGrad {
    Mat3 d_theta;  // d[Q w]/d theta
    Mat3 d_rho;    // d[Q w]/d rho
};

// Second partials: the *1 group differentiates d_theta(xi, w) v, the *2 group d_rho(xi, w) v,
// each with respect to (theta, rho, w).
struct QHess {
    Mat3 c11, c12, c13;
    Mat3 c21, c22, c23;
};

QGrad dq(const Vec6& xi, const Vec3& w);
QHess ddq(const Vec6& xi, const Vec3& w, const Vec3& v);
QGrad dqinv(const Vec6& xi, const Vec3& w);
QHess ddqinv(const Vec6& xi, const Vec3& w, const Vec3& v);

// d[J(xi) x]/dxi, then d[djr(xi,x) w]/dxi and d[djr(xi,x) w]/dx; same for J^-1.
Mat6 djr(const Vec6& xi, const Vec6& x);
Mat6 ddjr_dxi(const Vec6& xi, const Vec6& x, const Vec6& w);
Mat6 ddjr_dx(const Vec6& xi, const Vec6& x, const Vec6& w);
Mat6 djrinv(const Vec6& xi, const Vec6& x);
Mat6 ddjrinv_dxi(const Vec6& xi, const Vec6& x, const Vec6& w);
Mat6 ddjrinv_dx(const Vec6& xi, const Vec6& x, const Vec6& w);

}  // namespace se3
}  // namespace gptraj
