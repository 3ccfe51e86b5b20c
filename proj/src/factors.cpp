#include "gptraj/factors.hpp"

#include <spdlog/spdlog.h>

#include "gptraj/gp_kernel.hpp"
#include "kron.hpp"

namespace gptraj {

const InterpolatedState& EvalContext::interp(int traj, double t, bool jacobians) const {
    const auto key = std::make_pair(traj, t);
    auto& cache = jacobians ? cache_ : cache_nojac_;
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, trajs_.at(traj)->interpolate(t, jacobians)).first;
    return it->second;
}

Eigen::MatrixXd sqrt_information(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw DomainError("covariance is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    return L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
}

Mat6 pose_from_knot_jacobian(const Mat3& R) {
    Mat6 P = Mat6::Zero();
    P.topLeftCorner<3, 3>().setIdentity();
    P.bottomRightCorner<3, 3>() = R.transpose();
    return P;
}

namespace {

using Mat1x18 = Eigen::Matrix<double, 1, 18>;
using Mat6x18 = Eigen::Matrix<double, 6, 18>;

std::vector<ParamRef> bracket(const EvalContext& ctx, int traj, double t) {
    const int k = ctx.traj(traj).locate(t).first;
    return {ParamRef::knot(traj, k), ParamRef::knot(traj, k + 1)};
}

// Rows of the interpolation Jacobian that drive the pose (R then p).
Eigen::Matrix<double, 6, 36> pose_rows(const InterpolatedState& st) {
    Eigen::Matrix<double, 6, 36> P;
    P << st.jac.middleRows<3>(3 * kVarR), st.jac.middleRows<3>(3 * kVarP);
    return P;
}

class MotionPrior final : public Factor {
public:
    MotionPrior(int traj_id, const GpTrajectory& tr, int k) : id_(traj_id), k_(k) {
        const Eigen::MatrixXd Q = kernel::process_cov(3, tr.dt());
        F_ = kernel::transition(3, tr.dt());
        if (tr.repr() == Representation::SO3xR3) {
            Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(18, 18);
            cov.topLeftCorner(9, 9) = kron(Q, tr.sigma_rot());
            cov.bottomRightCorner(9, 9) = kron(Q, tr.sigma_pos());
            S_ = sqrt_information(cov);
        } else {
            Mat6 sig = Mat6::Zero();
            sig.topLeftCorner<3, 3>() = tr.sigma_rot();
            sig.bottomRightCorner<3, 3>() = tr.sigma_pos();
            S_ = sqrt_information(kron(Q, sig));
        }
    }

    int dim() const override { return 18; }
    std::string kind() const override { return "motion_prior"; }
    std::vector<ParamRef> params(const EvalContext&) const override {
        return {ParamRef::knot(id_, k_), ParamRef::knot(id_, k_ + 1)};
    }

    void evaluate(const EvalContext& ctx, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) const override {
        const GpTrajectory& tr = ctx.traj(id_);
        const SupportState& xa = tr.knot(k_);
        const SupportState& xb = tr.knot(k_ + 1);
        const bool want = jac != nullptr;
        Vec18 res;
        Mat18 Ja = Mat18::Zero(), Jb = Mat18::Zero();
        if (tr.repr() == Representation::SO3xR3) {
            const auto lb = so3_local_from_global(xa.R, xb.R, xb.w, xb.alpha, tr.mode(), want);
            const Eigen::Matrix<double, 9, 9> KF = kron3<3>(F_);
            Vec9 ga, za, zb;
            ga << Vec3::Zero(), xa.w, xa.alpha;
            za << xa.p, xa.v, xa.a;
            zb << xb.p, xb.v, xb.a;
            res << lb.x.stacked() - KF * ga, zb - KF * za;
            if (want) {
                Ja.block<9, 3>(0, 0) = lb.d_Ra;
                Ja.block<9, 6>(0, 3) = -KF.block<9, 6>(0, 3);
                Ja.block<9, 9>(9, 9) = -KF;
                Jb.block<9, 3>(0, 0) = lb.d_Rb;
                Jb.block<9, 3>(0, 3) = lb.d_wb;
                Jb.block<9, 3>(0, 6) = lb.d_alphab;
                Jb.block<9, 9>(9, 9).setIdentity();
            }
        } else {
            Mat18 J0a, J0b;
            const TwistState ta = to_twist(xa, want ? &J0a : nullptr);
            const TwistState tb = to_twist(xb, want ? &J0b : nullptr);
            const auto lb = se3_local_from_global(ta.T, tb, tr.mode(), want);
            const Mat18 KF = kron3<6>(F_);
            Vec18 ga;
            ga << Vec6::Zero(), ta.tau, ta.taud;
            res = lb.x.stacked() - KF * ga;
            if (want) {
                Mat18 da = Mat18::Zero();
                da.leftCols<6>() = lb.d_Ta;
                da.rightCols<12>() = -KF.rightCols<12>();
                Ja = da * J0a;
                Jb = lb.d_b * J0b;
            }
        }
        r = S_ * res;
        if (want) *jac = {S_ * Ja, S_ * Jb};
    }

private:
    int id_, k_;
    Eigen::MatrixXd F_, S_;
};

class Uwb final : public Factor {
public:
    Uwb(int id, double t, const Vec3& tag, const Vec3& anchor, double d, double sigma)
        : id_(id), t_(t), tag_(tag), anchor_(anchor), d_(d), sigma_(sigma) {}

    int dim() const override { return 1; }
    std::string kind() const override { return "uwb"; }
    std::vector<ParamRef> params(const EvalContext& ctx) const override { return bracket(ctx, id_, t_); }

    void evaluate(const EvalContext& ctx, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) const override {
        const InterpolatedState& st = ctx.interp(id_, t_, jac != nullptr);
        const Vec3 q = st.state.R * tag_ + st.state.p - anchor_;
        const double rho = q.norm();
        r.resize(1);
        if (rho < 1e-9) {
            // Bearing undefined: the factor contributes nothing.
            spdlog::warn("range factor at t={} skipped: predicted range below 1e-9", t_);
            r(0) = 0.0;
            if (jac) *jac = {Eigen::MatrixXd::Zero(1, 18), Eigen::MatrixXd::Zero(1, 18)};
            return;
        }
        r(0) = (rho - d_) / sigma_;
        if (!jac) return;
        const Eigen::RowVector3d u = q.transpose() / rho / sigma_;
        Eigen::Matrix<double, 1, 6> dpose;
        dpose << -u * st.state.R * so3::hat(tag_), u;
        const Eigen::Matrix<double, 1, 36> J = dpose * pose_rows(st);
        *jac = {J.leftCols<18>(), J.rightCols<18>()};
    }

private:
    int id_;
    double t_;
    Vec3 tag_, anchor_;
    double d_, sigma_;
};

class PointToPlane final : public Factor {
public:
    PointToPlane(int id, double t, const Pose3& mount, int ext, const Vec3& pb, const Vec3& n, double c, double sigma)
        : id_(id), ext_(ext), t_(t), mount_(mount), pb_(pb), n_(n), c_(c), sigma_(sigma) {}

    int dim() const override { return 1; }
    std::string kind() const override { return "point2plane"; }
    std::vector<ParamRef> params(const EvalContext& ctx) const override {
        auto p = bracket(ctx, id_, t_);
        if (ext_ >= 0) p.push_back(ParamRef::pose(ext_));
        return p;
    }

    void evaluate(const EvalContext& ctx, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) const override {
        const InterpolatedState& st = ctx.interp(id_, t_, jac != nullptr);
        const Pose3& Te = ext_ >= 0 ? ctx.pose(ext_) : mount_;
        const Vec3 q = Te * pb_;
        r.resize(1);
        r(0) = (n_.dot(st.state.R * q + st.state.p) + c_) / sigma_;
        if (!jac) return;
        const Eigen::RowVector3d nt = n_.transpose() / sigma_;
        const Eigen::RowVector3d nR = nt * st.state.R;
        Eigen::Matrix<double, 1, 6> dpose;
        dpose << -nR * so3::hat(q), nt;
        const Eigen::Matrix<double, 1, 36> J = dpose * pose_rows(st);
        *jac = {J.leftCols<18>(), J.rightCols<18>()};
        if (ext_ >= 0) {
            Eigen::Matrix<double, 1, 6> de;
            de << -nR * Te.R * so3::hat(pb_), nR * Te.R;
            jac->push_back(de);
        }
    }

private:
    int id_, ext_;
    double t_;
    Pose3 mount_;
    Vec3 pb_, n_;
    double c_, sigma_;
};

class ExtrinsicPrior final : public Factor {
public:
    ExtrinsicPrior(int id, const Pose3& prior, const Mat6& S) : id_(id), prior_inv_(prior.inverse()), S_(S) {}

    int dim() const override { return 6; }
    std::string kind() const override { return "extrinsic_prior"; }
    std::vector<ParamRef> params(const EvalContext&) const override { return {ParamRef::pose(id_)}; }

    void evaluate(const EvalContext& ctx, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) const override {
        const Vec6 e = se3::log(prior_inv_ * ctx.pose(id_));
        r = S_ * e;
        if (jac) *jac = {S_ * se3::right_jacobian_inv(e)};
    }

private:
    int id_;
    Pose3 prior_inv_;
    Mat6 S_;
};

class Coupling final : public Factor {
public:
    Coupling(int t0, int t1, int ext, double t, const Mat6& S) : a_(t0), b_(t1), ext_(ext), t_(t), S_(S) {}

    int dim() const override { return 6; }
    std::string kind() const override { return "coupling"; }
    std::vector<ParamRef> params(const EvalContext& ctx) const override {
        auto p = bracket(ctx, a_, t_);
        const auto q = bracket(ctx, b_, t_);
        p.insert(p.end(), q.begin(), q.end());
        p.push_back(ParamRef::pose(ext_));
        return p;
    }

    void evaluate(const EvalContext& ctx, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) const override {
        const InterpolatedState& s0 = ctx.interp(a_, t_, jac != nullptr);
        const InterpolatedState& s1 = ctx.interp(b_, t_, jac != nullptr);
        const Pose3& Te = ctx.pose(ext_);
        const Pose3 T0(s0.state.R, s0.state.p), T1(s1.state.R, s1.state.p);
        const Pose3 E = Te.inverse() * T0.inverse() * T1;
        const Vec6 e = se3::log(E);
        r = S_ * e;
        if (!jac) return;
        const Mat6 A = S_ * se3::right_jacobian_inv(e);
        const Mat6 AdEinv = se3::adjoint(E.inverse());
        const Mat6 dTe = -A * AdEinv;
        const Mat6 dT0 = dTe * se3::adjoint(Te.inverse());
        const Eigen::Matrix<double, 6, 36> J0 = dT0 * pose_from_knot_jacobian(T0.R) * pose_rows(s0);
        const Eigen::Matrix<double, 6, 36> J1 = A * pose_from_knot_jacobian(T1.R) * pose_rows(s1);
        *jac = {J0.leftCols<18>(), J0.rightCols<18>(), J1.leftCols<18>(), J1.rightCols<18>(), dTe};
    }

private:
    int a_, b_, ext_;
    double t_;
    Mat6 S_;
};

}  // namespace

FactorPtr motion_prior_factor(int traj_id, const GpTrajectory& traj, int k) {
    if (k < 0 || k + 1 >= traj.num_knots()) throw DomainError("motion prior needs knots k and k+1");
    return std::make_unique<MotionPrior>(traj_id, traj, k);
}

FactorPtr uwb_factor(int traj_id, double t, const Vec3& tag_offset, const Vec3& anchor, double range, double sigma) {
    return std::make_unique<Uwb>(traj_id, t, tag_offset, anchor, range, sigma);
}

FactorPtr point2plane_factor(int traj_id, double t, const Pose3& fixed_mount, int extrinsic_id, const Vec3& p_body,
                             const Vec3& n, double c, double sigma) {
    return std::make_unique<PointToPlane>(traj_id, t, fixed_mount, extrinsic_id, p_body, n, c, sigma);
}

FactorPtr extrinsic_prior_factor(int pose_id, const Pose3& prior, const Mat6& sqrt_info) {
    return std::make_unique<ExtrinsicPrior>(pose_id, prior, sqrt_info);
}

FactorPtr coupling_factor(int traj0, int traj1, int extrinsic_id, double t, const Mat6& sqrt_info) {
    return std::make_unique<Coupling>(traj0, traj1, extrinsic_id, t, sqrt_info);
}

}  // namespace gptraj
