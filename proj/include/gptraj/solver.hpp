#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "gptraj/factors.hpp"

namespace gptraj {

class Problem {
public:
    int add_trajectory(GpTrajectory* traj);
    int add_pose(Pose3* pose);
    void add_factor(FactorPtr f) { factors_.push_back(std::move(f)); }

    void freeze(const ParamRef& p) { frozen_.insert(p); }
    void unfreeze_all() { frozen_.clear(); }
    bool is_frozen(const ParamRef& p) const { return frozen_.count(p) > 0; }

    const std::vector<GpTrajectory*>& trajectories() const { return trajs_; }
    const std::vector<Pose3*>& poses() const { return poses_; }
    const std::vector<FactorPtr>& factors() const { return factors_; }
    std::vector<FactorPtr>& factors() { return factors_; }
    EvalContext context() const { return EvalContext(trajs_, poses_); }

    // Total cost 0.5 * sum of (robustified) squared whitened residuals.
    double cost() const;

private:
    std::vector<GpTrajectory*> trajs_;
    std::vector<Pose3*> poses_;
    std::vector<FactorPtr> factors_;
    std::set<ParamRef> frozen_;
};

struct SolverOptions {
    int max_iters = 50;
    double lambda0 = 1e-4;
    double lambda_up = 10.0;
    double lambda_down = 0.5;
    double tol = 1e-6;            // relative cost decrease that counts as converged
    double cost_floor = 1e-20;    // costs below this are treated as exactly solved
};

struct IterationRecord {
    int iter = 0;
    double cost = 0;      // cost after the iteration (unchanged when rejected)
    double lambda = 0;    // damping used for the step
    double step_norm = 0;
    bool accepted = false;
};

struct SolveReport {
    int iterations = 0;
    double initial_cost = 0, final_cost = 0;
    std::vector<IterationRecord> history;
    bool converged = false;
    std::string message;
    double wall_time_s = 0;

    // One line per iteration: "iter=<i> cost=<c> lambda=<l> step=<s> accepted=<0|1>", then a summary line.
    void write(std::ostream& os) const;
};

SolveReport solve(Problem& problem, const SolverOptions& opts = {});

}  // namespace gptraj
