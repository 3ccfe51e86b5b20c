#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gptraj/trajectory.hpp"

namespace gptraj {

// A parameter block: knot `index` of trajectory `owner`, or pose block `index`.
struct ParamRef {
    enum Kind { Knot, Pose } kind = Knot;
    int owner = 0;
    int index = 0;

    static ParamRef knot(int traj, int k) { return {Knot, traj, k}; }
    static ParamRef pose(int id) { return {Pose, 0, id}; }
    int dim() const { return kind == Knot ? kKnotDim : 6; }
    bool operator<(const ParamRef& o) const {
        return std::tie(kind, owner, index) < std::tie(o.kind, o.owner, o.index);
    }
    bool operator==(const ParamRef& o) const { return kind == o.kind && owner == o.owner && index == o.index; }
};

// Read-only view of the estimation state handed to factors. Interpolations are memoized per
// (trajectory, time) so factors sharing a timestamp share one evaluation.
class EvalContext {
public:
    EvalContext(const std::vector<GpTrajectory*>& trajs, const std::vector<Pose3*>& poses)
        : trajs_(trajs), poses_(poses) {}

    const GpTrajectory& traj(int id) const { return *trajs_.at(id); }
    const Pose3& pose(int id) const { return *poses_.at(id); }
    const InterpolatedState& interp(int traj, double t, bool jacobians) const;
    void clear_cache() const {
        cache_.clear();
        cache_nojac_.clear();
    }

private:
    const std::vector<GpTrajectory*>& trajs_;
    const std::vector<Pose3*>& poses_;
    mutable std::map<std::pair<int, double>, InterpolatedState> cache_, cache_nojac_;
};

// Residuals and Jacobians are returned already whitened by the square-root information.
class Factor {
public:
    virtual ~Factor() = default;
    virtual int dim() const = 0;
    virtual std::string kind() const = 0;
    virtual std::vector<ParamRef> params(const EvalContext& ctx) const = 0;
    // jac, when given, receives one dim() x param.dim() block per entry of params().
    virtual void evaluate(const EvalContext& ctx, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) const = 0;

    // Huber threshold on the whitened residual norm; 0 disables.
    double huber = 0.0;
};

using FactorPtr = std::unique_ptr<Factor>;

// Residual between knot k+1 and the deterministic propagation of knot k, in the local
// coordinates of the trajectory's representation.
FactorPtr motion_prior_factor(int traj_id, const GpTrajectory& traj, int k);

// Range from the tag (body offset) to an anchor.
FactorPtr uwb_factor(int traj_id, double t, const Vec3& tag_offset, const Vec3& anchor, double range, double sigma);

// n^T (R_t (R_e p + p_e) + p_t) + c. With extrinsic_id < 0 the fixed mount is used.
FactorPtr point2plane_factor(int traj_id, double t, const Pose3& fixed_mount, int extrinsic_id, const Vec3& p_body,
                             const Vec3& n, double c, double sigma);

// Log(T_prior^-1 T_est) weighted by sqrt_info (S with S^T S = W).
FactorPtr extrinsic_prior_factor(int pose_id, const Pose3& prior, const Mat6& sqrt_info);

// Relative pose between two trajectories at time t through a shared extrinsic:
// Log((T_0(t) T_e)^-1 T_1(t)).
FactorPtr coupling_factor(int traj0, int traj1, int extrinsic_id, double t, const Mat6& sqrt_info);

// S with S^T S = cov^-1 (inverse Cholesky factor).
Eigen::MatrixXd sqrt_information(const Eigen::MatrixXd& cov);

// Pose tangent (right-plus on SE(3)) with respect to the knot's (R, p) perturbations.
Mat6 pose_from_knot_jacobian(const Mat3& R);

}  // namespace gptraj
