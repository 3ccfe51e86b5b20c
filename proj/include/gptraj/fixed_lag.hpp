#pragma once

#include <functional>
#include <vector>

#include "gptraj/solver.hpp"

namespace gptraj {

// Sliding-window estimation: each window extends the trajectories to its end, adds motion priors and
// the measurements in [start - dt, end], freezes knots older than the window start, and solves.
// Pose blocks persist across windows, anchored by a prior at the previous window's estimate.
struct FixedLagSetup {
    std::vector<GpTrajectory*> trajs;   // all share t0 and dt
    std::vector<Pose3*> poses;
    std::vector<Mat6> pose_prior_sqrt_info;  // one per pose; S with S^T S = W
    // Adds factors for measurements with timestamps in [t_from, t_to].
    std::function<void(Problem&, double t_from, double t_to)> add_measurements;
    double t_end = 0;
};

struct FixedLagOptions {
    double window = 1.0;
    double slide = 0.5;
    SolverOptions solver;
};

struct WindowResult {
    double t_start = 0, t_end = 0;
    SolveReport report;
    std::vector<Pose3> poses;  // estimates after the window's solve
};

// Throws std::invalid_argument when window < 2 dt or slide <= 0.
std::vector<WindowResult> fixed_lag_run(const FixedLagSetup& setup, const FixedLagOptions& opts);

}  // namespace gptraj
