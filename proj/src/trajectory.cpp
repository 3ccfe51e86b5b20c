#include "gptraj/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gptraj/gp_kernel.hpp"
#include "kron.hpp"

namespace gptraj {


GpTrajectory::GpTrajectory(double t0, double dt, Representation repr, Kinematics mode, const Mat3& sigma_rot,
                           const Mat3& sigma_pos)
    : t0_(t0), dt_(dt), repr_(repr), mode_(mode), sigma_rot_(sigma_rot), sigma_pos_(sigma_pos) {
    if (!(dt > 0)) throw DomainError("knot spacing must be positive");
}

std::pair<int, double> GpTrajectory::locate(double t) const {
    const int K = num_knots();
    if (K < 2) throw DomainError("interpolation needs at least two knots");
    const double tol = 1e-9 * dt_;
    if (t < t0_ - tol || t > end_time() + tol) throw DomainError("query time outside the trajectory");
    // Queries within rounding of a knot time snap to that knot exactly.
    const double u = (t - t0_) / dt_;
    const double nearest = std::round(u);
    int k;
    double s;
    if (std::abs(u - nearest) < 1e-9) {
        k = static_cast<int>(nearest);
        s = 0.0;
    } else {
        k = static_cast<int>(std::floor(u));
        s = t - knot_time(k);
    }
    if (k > K - 2) {
        k = K - 2;
        s = dt_;
    }
    return {std::max(k, 0), std::clamp(s, 0.0, dt_)};
}

InterpolatedState GpTrajectory::interpolate(double t, bool jacobians) const {
    const auto [k, s] = locate(t);
    InterpolatedState out;
    out.knot = k;
    out.s = s;
    const SupportState& xa = knots_[k];
    const SupportState& xb = knots_[k + 1];
    const kernel::InterpMatrices g = kernel::interp_matrices(3, dt_, s);

    if (repr_ == Representation::SO3xR3) {
        const So3LocalFromGlobal lb = so3_local_from_global(xa.R, xb.R, xb.w, xb.alpha, mode_, jacobians);
        So3Local la;
        la.thd = xa.w;
        la.thdd = xa.alpha;
        const Eigen::Matrix<double, 9, 9> KL = kron3<3>(g.lambda), KP = kron3<3>(g.psi);
        const Vec9 gt = KL * la.stacked() + KP * lb.x.stacked();
        const So3GlobalFromLocal rt = so3_global_from_local(xa.R, So3Local::from_stacked(gt), mode_, jacobians);

        Vec9 za, zb;
        za << xa.p, xa.v, xa.a;
        zb << xb.p, xb.v, xb.a;
        const Vec9 zt = KL * za + KP * zb;

        SupportState& x = out.state;
        x.R = rt.R;
        x.w = rt.w;
        x.alpha = rt.alpha;
        x.p = zt.segment<3>(0);
        x.v = zt.segment<3>(3);
        x.a = zt.segment<3>(6);
        if (!jacobians) return out;

        // Local state at t with respect to each knot's rotational variables.
        Eigen::Matrix<double, 9, 9> dg_a, dg_b;
        dg_a << KP * lb.d_Ra, KL.block<9, 6>(0, 3);
        dg_b << KP * lb.d_Rb, KP * lb.d_wb, KP * lb.d_alphab;
        Eigen::Matrix<double, 9, 9> ja = rt.d_local * dg_a;
        ja.block<3, 3>(0, 0) += rt.dR_dRa;
        const Eigen::Matrix<double, 9, 9> jb = rt.d_local * dg_b;

        out.jac.block<9, 9>(0, 0) = ja;
        out.jac.block<9, 9>(0, 18) = jb;
        out.jac.block<9, 9>(9, 9) = KL;
        out.jac.block<9, 9>(9, 27) = KP;
        return out;
    }

    Mat18 j0a, j0b;
    const TwistState ta = to_twist(xa, jacobians ? &j0a : nullptr);
    const TwistState tb = to_twist(xb, jacobians ? &j0b : nullptr);
    const Se3LocalFromGlobal lb = se3_local_from_global(ta.T, tb, mode_, jacobians);
    Se3Local la;
    la.xid = ta.tau;
    la.xidd = ta.taud;
    const Mat18 KL = kron3<6>(g.lambda), KP = kron3<6>(g.psi);
    const Vec18 gt = KL * la.stacked() + KP * lb.x.stacked();
    const Se3GlobalFromLocal rt = se3_global_from_local(ta.T, Se3Local::from_stacked(gt), mode_, jacobians);
    Mat18 j5;
    out.state = from_twist(rt.x, jacobians ? &j5 : nullptr);
    if (!jacobians) return out;

    Mat18 dg_a;
    dg_a << KP * lb.d_Ta, KL.block<18, 12>(0, 6);
    Mat18 ja = rt.d_local * dg_a;
    ja.block<6, 6>(0, 0) += rt.dT_dTa;
    const Mat18 jb = rt.d_local * (KP * lb.d_b);
    out.jac.block<18, 18>(0, 0) = j5 * ja * j0a;
    out.jac.block<18, 18>(0, 18) = j5 * jb * j0b;
    return out;
}

SupportState GpTrajectory::propagate(const SupportState& x, double dt) const {
    const Eigen::MatrixXd F = kernel::transition(3, dt);
    SupportState y;
    if (repr_ == Representation::SO3xR3) {
        So3Local l;
        l.thd = x.w;
        l.thdd = x.alpha;
        const So3GlobalFromLocal r =
            so3_global_from_local(x.R, So3Local::from_stacked(kron3<3>(F) * l.stacked()), mode_, false);
        Vec9 z;
        z << x.p, x.v, x.a;
        z = kron3<3>(F) * z;
        y.R = r.R;
        y.w = r.w;
        y.alpha = r.alpha;
        y.p = z.segment<3>(0);
        y.v = z.segment<3>(3);
        y.a = z.segment<3>(6);
        return y;
    }
    const TwistState tx = to_twist(x);
    Se3Local l;
    l.xid = tx.tau;
    l.xidd = tx.taud;
    const Se3GlobalFromLocal r =
        se3_global_from_local(tx.T, Se3Local::from_stacked(kron3<6>(F) * l.stacked()), mode_, false);
    return from_twist(r.x);
}

void GpTrajectory::extend_to(double t) {
    if (knots_.empty()) throw DomainError("cannot extend an empty trajectory");
    while (end_time() < t - 1e-9 * dt_) knots_.push_back(propagate(knots_.back(), dt_));
}

void GpTrajectory::save(std::ostream& os) const {
    os << "# t,qw,qx,qy,qz,wx,wy,wz,ax,ay,az,px,py,pz,vx,vy,vz,aax,aay,aaz\n";
    os << std::setprecision(17);
    for (int k = 0; k < num_knots(); ++k) {
        const SupportState& x = knots_[k];
        const Eigen::Quaterniond q(x.R);
        os << knot_time(k) << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z();
        for (const Vec3* v : {&x.w, &x.alpha, &x.p, &x.v, &x.a})
            for (int i = 0; i < 3; ++i) os << ',' << (*v)(i);
        os << '\n';
    }
}

GpTrajectory GpTrajectory::load(std::istream& is, Representation repr, Kinematics mode, const Mat3& sigma_rot,
                                const Mat3& sigma_pos) {
    std::vector<double> times;
    std::vector<SupportState> knots;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != 20) throw std::runtime_error("trajectory line needs 20 fields: " + line);
        SupportState x;
        x.R = Eigen::Quaterniond(v[1], v[2], v[3], v[4]).normalized().toRotationMatrix();
        x.w = Vec3(v[5], v[6], v[7]);
        x.alpha = Vec3(v[8], v[9], v[10]);
        x.p = Vec3(v[11], v[12], v[13]);
        x.v = Vec3(v[14], v[15], v[16]);
        x.a = Vec3(v[17], v[18], v[19]);
        times.push_back(v[0]);
        knots.push_back(x);
    }
    if (knots.empty()) throw std::runtime_error("trajectory file has no knots");
    const double dt = knots.size() > 1 ? (times.back() - times.front()) / (knots.size() - 1) : 1.0;
    GpTrajectory traj(times.front(), dt, repr, mode, sigma_rot, sigma_pos);
    traj.knots_ = std::move(knots);
    return traj;
}

double state_distance(const SupportState& x, const SupportState& y) {
    return so3::log(x.R.transpose() * y.R).norm() + (x.w - y.w).norm() + (x.alpha - y.alpha).norm() +
           (x.p - y.p).norm() + (x.v - y.v).norm() + (x.a - y.a).norm();
}

}  // namespace gptraj
