#include "gptraj/fixed_lag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gptraj {

std::vector<WindowResult> fixed_lag_run(const FixedLagSetup& setup, const FixedLagOptions& opts) {
    if (setup.trajs.empty()) throw std::invalid_argument("fixed-lag run needs a trajectory");
    if (setup.pose_prior_sqrt_info.size() != setup.poses.size())
        throw std::invalid_argument("one prior weight per pose block required");
    const double t0 = setup.trajs.front()->t0();
    const double dt = setup.trajs.front()->dt();
    for (const GpTrajectory* tr : setup.trajs)
        if (tr->t0() != t0 || tr->dt() != dt || tr->num_knots() == 0)
            throw std::invalid_argument("fixed-lag trajectories must share t0, dt and have an initial knot");
    if (opts.window < 2 * dt) throw std::invalid_argument("window must span at least two knot intervals");
    if (opts.slide <= 0) throw std::invalid_argument("slide must be positive");

    const double eps = 1e-9 * dt;
    std::vector<WindowResult> out;
    double te = std::min(t0 + opts.window, setup.t_end);
    while (true) {
        const double ts = std::max(t0, te - opts.window);
        const double t_from = std::max(t0, ts - dt);
        for (GpTrajectory* tr : setup.trajs) tr->extend_to(te);

        Problem pb;
        for (GpTrajectory* tr : setup.trajs) pb.add_trajectory(tr);
        for (Pose3* T : setup.poses) pb.add_pose(T);
        for (size_t i = 0; i < setup.trajs.size(); ++i) {
            const GpTrajectory& tr = *setup.trajs[i];
            const int k0 = std::max(0, static_cast<int>(std::floor((t_from - t0) / dt + 1e-9)));
            for (int k = k0; k + 1 < tr.num_knots(); ++k)
                pb.add_factor(motion_prior_factor(static_cast<int>(i), tr, k));
            for (int k = 0; k < tr.num_knots() && tr.knot_time(k) < ts - eps; ++k)
                pb.freeze(ParamRef::knot(static_cast<int>(i), k));
        }
        if (setup.add_measurements) setup.add_measurements(pb, t_from, te);
        for (size_t j = 0; j < setup.poses.size(); ++j)
            pb.add_factor(extrinsic_prior_factor(static_cast<int>(j), *setup.poses[j], setup.pose_prior_sqrt_info[j]));

        WindowResult w;
        w.t_start = ts;
        w.t_end = te;
        w.report = solve(pb, opts.solver);
        for (const Pose3* T : setup.poses) w.poses.push_back(*T);
        out.push_back(std::move(w));

        if (te >= setup.t_end - eps) break;
        te = std::min(te + opts.slide, setup.t_end);
    }
    return out;
}

}  // namespace gptraj
