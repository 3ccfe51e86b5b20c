#include "gptraj/kinematics.hpp"

namespace gptraj {

using so3::hat;

SupportState knot_plus(const SupportState& x, const Vec18& d) {
    SupportState y = x;
    y.R = x.R * so3::exp(d.segment<3>(0));
    y.w += d.segment<3>(3);
    y.alpha += d.segment<3>(6);
    y.p += d.segment<3>(9);
    y.v += d.segment<3>(12);
    y.a += d.segment<3>(15);
    return y;
}

Vec9 So3Local::stacked() const {
    Vec9 x;
    x << th, thd, thdd;
    return x;
}

So3Local So3Local::from_stacked(const Vec9& x) { return {x.segment<3>(0), x.segment<3>(3), x.segment<3>(6)}; }

Vec18 Se3Local::stacked() const {
    Vec18 x;
    x << xi, xid, xidd;
    return x;
}

Se3Local Se3Local::from_stacked(const Vec18& x) { return {x.segment<6>(0), x.segment<6>(6), x.segment<6>(12)}; }

namespace {

void check_relative_angle(const Vec3& th) {
    if (th.norm() >= kMaxRelativeAngle)
        throw DomainError("relative rotation between consecutive knots reaches pi; reduce the knot spacing");
}

bool use_closed_form(Kinematics mode, const Vec3& th) {
    return mode == Kinematics::ClosedForm && th.norm() >= kSmallAngle;
}

}  // namespace

// ---------------------------------------------------------------- SO(3)

So3LocalFromGlobal so3_local_from_global(const Mat3& Ra, const Mat3& Rb, const Vec3& wb, const Vec3& alphab,
                                         Kinematics mode, bool jacobians) {
    const Mat3 Rab = Ra.transpose() * Rb;
    So3LocalFromGlobal out;
    const Vec3 th = so3::log(Rab);
    check_relative_angle(th);
    const Mat3 A = so3::right_jacobian_inv(th);
    const Vec3 thd = A * wb;
    const Mat3 Hw = so3::djrinv(th, wb);
    const bool cf = use_closed_form(mode, th);
    Vec3 thdd;
    if (cf)
        thdd = A * alphab + Hw * thd;
    else
        thdd = A * alphab - 0.5 * wb.cross(thd);
    out.x = {th, thd, thdd};
    if (!jacobians) return out;

    Mat3 dthdd_dth, dthdd_dw;
    if (cf) {
        dthdd_dth = so3::djrinv(th, alphab) + so3::ddjrinv_du(th, wb, thd) + Hw * Hw;
        dthdd_dw = so3::ddjrinv_dv(th, wb, thd) + Hw * A;
    } else {
        dthdd_dth = so3::djrinv(th, alphab) - 0.5 * hat(wb) * Hw;
        dthdd_dw = 0.5 * hat(thd) - 0.5 * hat(wb) * A;
    }
    Eigen::Matrix<double, 9, 3> d_th;
    d_th << Mat3::Identity(), Hw, dthdd_dth;
    out.d_Rb = d_th * A;
    out.d_Ra = d_th * (-A * Rab.transpose());
    out.d_wb << Mat3::Zero(), A, dthdd_dw;
    out.d_alphab << Mat3::Zero(), Mat3::Zero(), A;
    return out;
}

So3GlobalFromLocal so3_global_from_local(const Mat3& Ra, const So3Local& x, Kinematics mode, bool jacobians) {
    So3GlobalFromLocal out;
    const Vec3& th = x.th;
    const Mat3 E = so3::exp(th);
    const Mat3 J = so3::right_jacobian(th);
    const Mat3 H = so3::djr(th, x.thd);
    const bool cf = use_closed_form(mode, th);
    out.R = Ra * E;
    out.w = J * x.thd;
    Vec3 m;
    if (cf) {
        out.alpha = J * x.thdd + H * x.thd;
    } else {
        m = x.thdd + 0.5 * out.w.cross(x.thd);
        out.alpha = J * m;
    }
    if (!jacobians) return out;

    Mat3 da_dth, da_dthd;
    if (cf) {
        da_dth = so3::djr(th, x.thdd) + so3::ddjr_du(th, x.thd, x.thd);
        da_dthd = H + so3::ddjr_dv(th, x.thd, x.thd);
    } else {
        da_dth = so3::djr(th, m) - 0.5 * J * hat(x.thd) * H;
        da_dthd = 0.5 * J * (hat(out.w) - hat(x.thd) * J);
    }
    out.d_local.setZero();
    out.d_local.block<3, 3>(0, 0) = J;
    out.d_local.block<3, 3>(3, 0) = H;
    out.d_local.block<3, 3>(3, 3) = J;
    out.d_local.block<3, 3>(6, 0) = da_dth;
    out.d_local.block<3, 3>(6, 3) = da_dthd;
    out.d_local.block<3, 3>(6, 6) = J;
    out.dR_dRa = E.transpose();
    return out;
}

// ---------------------------------------------------------------- SE(3)

TwistState to_twist(const SupportState& x, Mat18* jac) {
    TwistState t;
    t.T = Pose3(x.R, x.p);
    const Mat3 Rt = x.R.transpose();
    const Vec3 nu = Rt * x.v;
    const Vec3 ab = Rt * x.a;
    t.tau << x.w, nu;
    t.taud << x.alpha, ab - x.w.cross(nu);
    if (jac) {
        Mat18& J = *jac;
        J.setZero();
        const Mat3 I = Mat3::Identity();
        J.block<3, 3>(0, 0) = I;
        J.block<3, 3>(3, 9) = Rt;
        J.block<3, 3>(6, 3) = I;
        J.block<3, 3>(9, 0) = hat(nu);
        J.block<3, 3>(9, 12) = Rt;
        J.block<3, 3>(12, 6) = I;
        J.block<3, 3>(15, 0) = hat(ab) - hat(x.w) * hat(nu);
        J.block<3, 3>(15, 3) = hat(nu);
        J.block<3, 3>(15, 12) = -hat(x.w) * Rt;
        J.block<3, 3>(15, 15) = Rt;
    }
    return t;
}

SupportState from_twist(const TwistState& t, Mat18* jac) {
    SupportState x;
    x.R = t.T.R;
    x.p = t.T.p;
    x.w = t.tau.head<3>();
    x.alpha = t.taud.head<3>();
    const Vec3 nu = t.tau.tail<3>();
    const Vec3 beta = t.taud.tail<3>();
    x.v = x.R * nu;
    x.a = x.R * (beta + x.w.cross(nu));
    if (jac) {
        Mat18& J = *jac;
        J.setZero();
        const Mat3 I = Mat3::Identity();
        J.block<3, 3>(0, 0) = I;
        J.block<3, 3>(3, 6) = I;
        J.block<3, 3>(6, 12) = I;
        J.block<3, 3>(9, 3) = x.R;
        J.block<3, 3>(12, 0) = -x.R * hat(nu);
        J.block<3, 3>(12, 9) = x.R;
        J.block<3, 3>(15, 0) = -x.R * hat(beta + x.w.cross(nu));
        J.block<3, 3>(15, 6) = -x.R * hat(nu);
        J.block<3, 3>(15, 9) = x.R * hat(x.w);
        J.block<3, 3>(15, 15) = x.R;
    }
    return x;
}

Se3LocalFromGlobal se3_local_from_global(const Pose3& Ta, const TwistState& b, Kinematics mode, bool jacobians) {
    const Pose3 Tab = Ta.inverse() * b.T;
    Se3LocalFromGlobal out;
    const Vec6 xi = se3::log(Tab);
    const Vec3 th = xi.head<3>();
    check_relative_angle(th);
    const Mat6 A = se3::right_jacobian_inv(xi);
    const Vec6 xid = A * b.tau;
    const Mat6 Hw = se3::djrinv(xi, b.tau);
    const bool cf = use_closed_form(mode, th);
    Vec6 xidd;
    if (cf)
        xidd = A * b.taud + Hw * xid;
    else
        xidd = A * b.taud + 0.5 * se3::hat6(xid) * b.tau;
    out.x = {xi, xid, xidd};
    if (!jacobians) return out;

    Mat6 dxidd_dxi, dxidd_dtau;
    if (cf) {
        dxidd_dxi = se3::djrinv(xi, b.taud) + se3::ddjrinv_dxi(xi, b.tau, xid) + Hw * Hw;
        dxidd_dtau = se3::ddjrinv_dx(xi, b.tau, xid) + Hw * A;
    } else {
        const Mat6 ad_tau = se3::hat6(b.tau);
        dxidd_dxi = se3::djrinv(xi, b.taud) - 0.5 * ad_tau * Hw;
        dxidd_dtau = 0.5 * se3::hat6(xid) - 0.5 * ad_tau * A;
    }
    Eigen::Matrix<double, 18, 6> d_xi;
    d_xi << Mat6::Identity(), Hw, dxidd_dxi;
    out.d_Ta = d_xi * (-A * se3::adjoint(Tab.inverse()));
    out.d_b.setZero();
    out.d_b.block<18, 6>(0, 0) = d_xi * A;
    out.d_b.block<6, 6>(6, 6) = A;
    out.d_b.block<6, 6>(12, 6) = dxidd_dtau;
    out.d_b.block<6, 6>(12, 12) = A;
    return out;
}

Se3GlobalFromLocal se3_global_from_local(const Pose3& Ta, const Se3Local& x, Kinematics mode, bool jacobians) {
    Se3GlobalFromLocal out;
    const Vec6& xi = x.xi;
    const Pose3 E = se3::exp(xi);
    const Mat6 J = se3::right_jacobian(xi);
    const Mat6 H = se3::djr(xi, x.xid);
    const bool cf = use_closed_form(mode, xi.head<3>());
    out.x.T = Ta * E;
    out.x.tau = J * x.xid;
    Vec6 m;
    if (cf) {
        out.x.taud = J * x.xidd + H * x.xid;
    } else {
        m = x.xidd - 0.5 * se3::hat6(x.xid) * out.x.tau;
        out.x.taud = J * m;
    }
    if (!jacobians) return out;

    Mat6 dt_dxi, dt_dxid;
    if (cf) {
        dt_dxi = se3::djr(xi, x.xidd) + se3::ddjr_dxi(xi, x.xid, x.xid);
        dt_dxid = H + se3::ddjr_dx(xi, x.xid, x.xid);
    } else {
        dt_dxi = se3::djr(xi, m) - 0.5 * J * se3::hat6(x.xid) * H;
        dt_dxid = -0.5 * J * (se3::hat6(x.xid) * J - se3::hat6(out.x.tau));
    }
    out.d_local.setZero();
    out.d_local.block<6, 6>(0, 0) = J;
    out.d_local.block<6, 6>(6, 0) = H;
    out.d_local.block<6, 6>(6, 6) = J;
    out.d_local.block<6, 6>(12, 0) = dt_dxi;
    out.d_local.block<6, 6>(12, 6) = dt_dxid;
    out.d_local.block<6, 6>(12, 12) = J;
    out.dT_dTa = se3::adjoint(E.inverse());
    return out;
}

}  // namespace gptraj
