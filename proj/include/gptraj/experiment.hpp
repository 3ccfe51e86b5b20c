#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gptraj/simulation.hpp"
#include "gptraj/solver.hpp"

namespace gptraj {

enum class Scenario { UwbBatch, LidarBatch, Mlcme };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::UwbBatch;
    GtKind gt = GtKind::Split;
    std::vector<double> omegas{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<double> dts{0.1};
    std::vector<Representation> reprs{Representation::SO3xR3, Representation::SE3};
    std::vector<Kinematics> modes{Kinematics::ClosedForm, Kinematics::Approximated};
    std::uint64_t seed = 1;
    double duration = 20.0;

    // Motion prior power spectral densities (isotropic).
    double qc_rot = 1.0, qc_pos = 1.0;

    // Batch initialization: GT knots with R * Exp(n_R), p + n_p and zeroed derivatives.
    double perturb_rot_var = 0.2;  // rad^2
    double perturb_pos_var = 0.5;  // m^2
    bool zero_derivatives = true;

    double uwb_period = 0.05;
    double uwb_sigma = 0.22360679774997896;  // sqrt(0.05)
    std::vector<Vec3> anchors{{10, 10, 0.5}, {-10, 10, 2.5}, {-10, -10, 0.5}, {10, -10, 2.5}};
    std::vector<Vec3> tags{{0.2, 0, 0}, {-0.2, 0, 0}};

    // Multiplies the simulated measurement noise; factor weights keep the nominal sigmas.
    double noise_scale = 1.0;

    double lidar_rate = 300.0;  // Hz
    int rays_per_step = 16;
    double lidar_sigma = 0.05;
    Vec3 room_lo{-3, -3, 0}, room_hi{3, 3, 3};

    // Fixed-lag two-lidar run.
    double window = 1.0, slide = 0.5;
    double init_rot_err_deg = 5.0, init_pos_err = 0.1;
    double ext_prior_rot_sigma = 0.05, ext_prior_pos_sigma = 0.05;
    double coupling_rot_sigma = 0.01, coupling_pos_sigma = 0.01, coupling_period = 0.05;
    double change_start = 10.0, change_end = 20.0;

    SolverOptions solver;
    double huber = 0.0;  // in units of the measurement sigma; 0 disables

    // Wall-clock solve timing (median of timing_repeats); off keeps CSV output byte-reproducible.
    bool timing = false;
    int timing_repeats = 3;
};

// Flat "key = value" text; '#' starts a comment. Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::istream& is);

struct RunResult {
    std::string scenario;
    Representation repr = Representation::SO3xR3;
    Kinematics mode = Kinematics::ClosedForm;
    double dt = 0, omega = 0;
    std::uint64_t seed = 0;
    double pos_rmse = 0, rot_rmse = 0;
    int iters = 0;
    bool converged = false;
    double solve_time_s = -1;  // negative when not timed
    bool monotone = true;      // every accepted LM step decreased the cost
};

// Extrinsic estimate after one fixed-lag window.
struct ExtrinsicSample {
    Representation repr = Representation::SO3xR3;
    Kinematics mode = Kinematics::ClosedForm;
    double omega = 0;
    double t_start = 0, t_end = 0;
    Pose3 estimate, truth;
    double rot_err_deg = 0, pos_err = 0;
};

struct ExperimentOutput {
    std::vector<RunResult> results;
    std::vector<ExtrinsicSample> trace;
};

// Runs the whole grid; rows are in (omega, dt, repr, mode) order regardless of thread count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, int threads = 1);

// Position and rotation RMSE over t0 + k * period within [t0, t1]; no alignment.
std::pair<double, double> evaluate_rmse(const GpTrajectory& est, const PoseFn& gt, double t0, double t1,
                                        double period = 0.01);

// Body-to-lidar mounts of the two-lidar rig; lidar 1 slips down in (change_start, change_end).
Pose3 lidar_mount(int lidar, double t, const ExperimentConfig& cfg);

void write_results_csv(std::ostream& os, const std::vector<RunResult>& results);
void write_trace_csv(std::ostream& os, const std::vector<ExtrinsicSample>& trace);

const char* to_string(Representation r);
const char* to_string(Kinematics m);
const char* to_string(Scenario s);

}  // namespace gptraj
