#include "gptraj/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "gptraj/fixed_lag.hpp"

namespace gptraj {

const char* to_string(Representation r) { return r == Representation::SO3xR3 ? "so3xr3" : "se3"; }
const char* to_string(Kinematics m) { return m == Kinematics::ClosedForm ? "cf" : "ap"; }
const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::UwbBatch: return "uwb_batch";
        case Scenario::LidarBatch: return "lidar_batch";
        case Scenario::Mlcme: return "mlcme";
    }
    return "?";
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a number: '" + s + "'");
    return v;
}

std::vector<double> to_doubles(const std::string& s) {
    std::vector<double> out;
    for (const std::string& x : split(s, ',')) out.push_back(to_double(x));
    return out;
}

Vec3 to_vec3(const std::string& s) {
    const std::vector<double> v = to_doubles(s);
    if (v.size() != 3) throw ConfigError("expected three components: '" + s + "'");
    return {v[0], v[1], v[2]};
}

std::vector<Vec3> to_vec3s(const std::string& s) {
    std::vector<Vec3> out;
    for (const std::string& x : split(s, ';')) out.push_back(to_vec3(x));
    return out;
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("not a boolean: '" + s + "'");
}

int to_int(const std::string& s) {
    const double v = to_double(s);
    if (v != std::floor(v)) throw ConfigError("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig c;
    using Setter = std::function<void(const std::string&)>;
    auto num = [](double& dst) -> Setter { return [&dst](const std::string& v) { dst = to_double(v); }; };
    const std::map<std::string, Setter> keys = {
        {"scenario",
         [&](const std::string& v) {
             if (v == "uwb_batch") c.scenario = Scenario::UwbBatch;
             else if (v == "lidar_batch") c.scenario = Scenario::LidarBatch;
             else if (v == "mlcme") c.scenario = Scenario::Mlcme;
             else throw ConfigError("unknown scenario '" + v + "'");
         }},
        {"gt",
         [&](const std::string& v) {
             if (v == "split") c.gt = GtKind::Split;
             else if (v == "nonsplit") c.gt = GtKind::NonSplit;
             else if (v == "lissajous") c.gt = GtKind::Lissajous;
             else throw ConfigError("unknown ground truth '" + v + "'");
         }},
        {"omega", [&](const std::string& v) { c.omegas = to_doubles(v); }},
        {"dt", [&](const std::string& v) { c.dts = to_doubles(v); }},
        {"repr",
         [&](const std::string& v) {
             c.reprs.clear();
             for (const std::string& x : split(v, ',')) {
                 if (x == "so3xr3") c.reprs.push_back(Representation::SO3xR3);
                 else if (x == "se3") c.reprs.push_back(Representation::SE3);
                 else throw ConfigError("unknown representation '" + x + "'");
             }
         }},
        {"mode",
         [&](const std::string& v) {
             c.modes.clear();
             for (const std::string& x : split(v, ',')) {
                 if (x == "cf") c.modes.push_back(Kinematics::ClosedForm);
                 else if (x == "ap") c.modes.push_back(Kinematics::Approximated);
                 else throw ConfigError("unknown kinematics mode '" + x + "'");
             }
         }},
        {"seed",
         [&](const std::string& v) {
             try {
                 size_t used = 0;
                 c.seed = std::stoull(v, &used);
                 if (used != v.size()) throw ConfigError("");
             } catch (const std::exception&) {
                 throw ConfigError("not a seed: '" + v + "'");
             }
         }},
        {"duration", num(c.duration)},
        {"qc_rot", num(c.qc_rot)},
        {"qc_pos", num(c.qc_pos)},
        {"perturb_rot_var", num(c.perturb_rot_var)},
        {"perturb_pos_var", num(c.perturb_pos_var)},
        {"zero_derivatives", [&](const std::string& v) { c.zero_derivatives = to_bool(v); }},
        {"uwb_period", num(c.uwb_period)},
        {"uwb_sigma", num(c.uwb_sigma)},
        {"anchors", [&](const std::string& v) { c.anchors = to_vec3s(v); }},
        {"tags", [&](const std::string& v) { c.tags = to_vec3s(v); }},
        {"noise_scale", num(c.noise_scale)},
        {"lidar_rate", num(c.lidar_rate)},
        {"rays_per_step", [&](const std::string& v) { c.rays_per_step = to_int(v); }},
        {"lidar_sigma", num(c.lidar_sigma)},
        {"room_lo", [&](const std::string& v) { c.room_lo = to_vec3(v); }},
        {"room_hi", [&](const std::string& v) { c.room_hi = to_vec3(v); }},
        {"window", num(c.window)},
        {"slide", num(c.slide)},
        {"init_rot_err_deg", num(c.init_rot_err_deg)},
        {"init_pos_err", num(c.init_pos_err)},
        {"ext_prior_rot_sigma", num(c.ext_prior_rot_sigma)},
        {"ext_prior_pos_sigma", num(c.ext_prior_pos_sigma)},
        {"coupling_rot_sigma", num(c.coupling_rot_sigma)},
        {"coupling_pos_sigma", num(c.coupling_pos_sigma)},
        {"coupling_period", num(c.coupling_period)},
        {"change_start", num(c.change_start)},
        {"change_end", num(c.change_end)},
        {"max_iters", [&](const std::string& v) { c.solver.max_iters = to_int(v); }},
        {"lambda0", num(c.solver.lambda0)},
        {"tol", num(c.solver.tol)},
        {"huber", num(c.huber)},
        {"timing", [&](const std::string& v) { c.timing = to_bool(v); }},
        {"timing_repeats", [&](const std::string& v) { c.timing_repeats = to_int(v); }},
    };

    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (seen.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        seen[key] = lineno;
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
    }

    require(!c.omegas.empty() && !c.dts.empty() && !c.reprs.empty() && !c.modes.empty(), "grids must be non-empty");
    for (double w : c.omegas) require(w > 0, "omega must be positive");
    for (double d : c.dts) require(d > 0, "dt must be positive");
    require(c.duration > 0, "duration must be positive");
    require(c.qc_rot > 0 && c.qc_pos > 0, "qc must be positive");
    require(c.perturb_rot_var >= 0 && c.perturb_pos_var >= 0, "perturbation variances must be non-negative");
    require(c.uwb_period > 0 && c.uwb_sigma > 0, "uwb period and sigma must be positive");
    require(c.lidar_rate > 0 && c.rays_per_step > 0 && c.lidar_sigma > 0, "lidar settings must be positive");
    require((c.room_lo.array() < c.room_hi.array()).all(), "room_lo must be below room_hi");
    require(c.window > 0 && c.slide > 0 && c.coupling_period > 0, "window, slide and coupling period must be positive");
    require(c.ext_prior_rot_sigma > 0 && c.ext_prior_pos_sigma > 0 && c.coupling_rot_sigma > 0 &&
                c.coupling_pos_sigma > 0,
            "prior sigmas must be positive");
    require(c.solver.max_iters > 0 && c.solver.tol > 0 && c.solver.lambda0 >= 0, "invalid solver options");
    require(c.noise_scale >= 0, "noise_scale must be non-negative");
    require(c.huber >= 0 && c.timing_repeats > 0, "invalid huber or timing settings");
    return c;
}

// ---------------------------------------------------------------- evaluation

std::pair<double, double> evaluate_rmse(const GpTrajectory& est, const PoseFn& gt, double t0, double t1,
                                        double period) {
    const double a = std::max(t0, est.t0()), b = std::min(t1, est.end_time());
    if (!(b >= a) || period <= 0) throw DomainError("no overlap between estimate and evaluation interval");
    const int n = static_cast<int>(std::floor((b - a) / period + 1e-9)) + 1;
    double sp = 0, sr = 0;
    for (int k = 0; k < n; ++k) {
        const double t = a + k * period;
        const SupportState x = est.interpolate(t, false).state;
        const Pose3 T = gt(t);
        sp += (x.p - T.p).squaredNorm();
        sr += so3::log(T.R.transpose() * x.R).squaredNorm();
    }
    return {std::sqrt(sp / n), std::sqrt(sr / n)};
}

Pose3 lidar_mount(int lidar, double t, const ExperimentConfig& cfg) {
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    if (lidar == 0) return {so3::exp(Vec3(0, 45 * kDeg, 0)), Vec3::Zero()};
    const bool slipped = t > cfg.change_start && t < cfg.change_end;
    return {so3::exp(Vec3(0, 0, 180 * kDeg)), Vec3(-0.5, 0, slipped ? -0.35 : -0.25)};
}

// ---------------------------------------------------------------- runs

namespace {

struct GridPoint {
    size_t oi, di, ri, mi;
};

bool monotone(const SolveReport& rep) {
    double prev = rep.initial_cost;
    for (const IterationRecord& it : rep.history) {
        if (it.accepted && !(it.cost < prev)) return false;
        prev = it.cost;
    }
    return true;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

int knots_for(double duration, double dt) { return static_cast<int>(std::ceil(duration / dt - 1e-9)) + 1; }

RunResult run_batch(const ExperimentConfig& cfg, const GridPoint& g) {
    const double omega = cfg.omegas[g.oi], dt = cfg.dts[g.di];
    const Representation repr = cfg.reprs[g.ri];
    const Kinematics mode = cfg.modes[g.mi];
    const GtTrajectory gt{cfg.gt, omega};
    const PoseFn body = [gt](double t) { return gt.pose(t); };

    // Measurements depend on omega only, initial perturbations on (omega, dt): every (repr, mode) sees the same data.
    const std::uint64_t sim_seed = substream_seed(cfg.seed, 1, g.oi);
    GpTrajectory init(0.0, dt, repr, mode, cfg.qc_rot * Mat3::Identity(), cfg.qc_pos * Mat3::Identity());
    {
        std::mt19937_64 rng(substream_seed(cfg.seed, 2, g.oi * 1000 + g.di));
        std::normal_distribution<double> n(0.0, 1.0);
        const double sr = std::sqrt(cfg.perturb_rot_var), sp = std::sqrt(cfg.perturb_pos_var);
        const int nk = knots_for(cfg.duration, dt);
        for (int k = 0; k < nk; ++k) {
            SupportState x = state_from_pose(body, k * dt);
            const Vec3 dr(n(rng), n(rng), n(rng)), dp(n(rng), n(rng), n(rng));
            x.R = x.R * so3::exp(sr * dr);
            x.p += sp * dp;
            if (cfg.zero_derivatives) {
                x.w.setZero();
                x.alpha.setZero();
                x.v.setZero();
                x.a.setZero();
            }
            init.add_knot(x);
        }
    }

    GpTrajectory est = init;
    Problem pb;
    pb.add_trajectory(&est);
    for (int k = 0; k + 1 < est.num_knots(); ++k) pb.add_factor(motion_prior_factor(0, est, k));
    std::string name;
    if (cfg.scenario == Scenario::UwbBatch) {
        name = std::string("uwb_") + (cfg.gt == GtKind::Split ? "split" : cfg.gt == GtKind::NonSplit ? "nonsplit" : "lissajous");
        for (const RangeMeas& m : simulate_uwb(body, cfg.anchors, cfg.tags, 0.0, cfg.duration, cfg.uwb_period,
                                               cfg.noise_scale * cfg.uwb_sigma, sim_seed)) {
            FactorPtr f = uwb_factor(0, m.t, cfg.tags[m.tag], cfg.anchors[m.anchor], m.d, cfg.uwb_sigma);
            f->huber = cfg.huber;
            pb.add_factor(std::move(f));
        }
    } else {
        name = "lidar_batch";
        const BoxRoom room(cfg.room_lo, cfg.room_hi);
        const PoseFn ident = [](double) { return Pose3(); };
        for (const LidarPoint& m : simulate_lidar(body, ident, room, 0, 0.0, cfg.duration, cfg.rays_per_step,
                                                  cfg.lidar_rate, cfg.noise_scale * cfg.lidar_sigma, sim_seed)) {
            FactorPtr f = point2plane_factor(0, m.t, Pose3(), -1, m.p, room.normal(m.wall), room.offset(m.wall),
                                             cfg.lidar_sigma);
            f->huber = cfg.huber;
            pb.add_factor(std::move(f));
        }
    }

    RunResult r;
    r.scenario = name;
    r.repr = repr;
    r.mode = mode;
    r.dt = dt;
    r.omega = omega;
    r.seed = cfg.seed;
    const int repeats = cfg.timing ? cfg.timing_repeats : 1;
    std::vector<double> times;
    SolveReport rep;
    std::vector<SupportState> solved;
    for (int i = 0; i < repeats; ++i) {
        est.knots() = init.knots();
        const SolveReport ri = solve(pb, cfg.solver);
        times.push_back(ri.wall_time_s);
        if (i == 0) {
            rep = ri;
            solved = est.knots();
        }
    }
    est.knots() = solved;
    const auto [pos, rot] = evaluate_rmse(est, body, 0.0, cfg.duration);
    r.pos_rmse = pos;
    r.rot_rmse = rot;
    r.iters = rep.iterations;
    r.converged = rep.converged;
    r.monotone = monotone(rep);
    if (cfg.timing) r.solve_time_s = median(times);
    return r;
}

Mat6 diag_sqrt_info(double rot_sigma, double pos_sigma) {
    Vec6 d;
    d << Vec3::Constant(1.0 / rot_sigma), Vec3::Constant(1.0 / pos_sigma);
    return d.asDiagonal();
}

// Two lidar trajectories tied by a shared, slowly varying extrinsic, estimated with a fixed-lag window.
void run_mlcme(const ExperimentConfig& cfg, const GridPoint& g, std::vector<RunResult>& results,
               std::vector<ExtrinsicSample>& trace) {
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    const double omega = cfg.omegas[g.oi], dt = cfg.dts[g.di];
    const Representation repr = cfg.reprs[g.ri];
    const Kinematics mode = cfg.modes[g.mi];
    const GtTrajectory gt{GtKind::Lissajous, omega};
    const BoxRoom room(cfg.room_lo, cfg.room_hi);
    auto mount = [&cfg](int i) -> PoseFn { return [&cfg, i](double t) { return lidar_mount(i, t, cfg); }; };
    auto lidar_gt = [&](int i) -> PoseFn {
        return [gt, &cfg, i](double t) { return gt.pose(t) * lidar_mount(i, t, cfg); };
    };
    auto ext_gt = [&cfg](double t) { return lidar_mount(0, t, cfg).inverse() * lidar_mount(1, t, cfg); };

    const std::uint64_t sim_seed = substream_seed(cfg.seed, 3, g.oi);
    const PoseFn body = [gt](double t) { return gt.pose(t); };
    std::vector<LidarPoint> pts[2];
    for (int i = 0; i < 2; ++i)
        pts[i] = simulate_lidar(body, mount(i), room, i, 0.0, cfg.duration, cfg.rays_per_step, cfg.lidar_rate,
                                cfg.noise_scale * cfg.lidar_sigma, sim_seed);

    // Initial pose errors of fixed size along seeded random directions.
    std::mt19937_64 rng(substream_seed(cfg.seed, 4, g.oi * 1000 + g.di));
    std::normal_distribution<double> n(0.0, 1.0);
    auto unit = [&]() {
        const Vec3 u(n(rng), n(rng), n(rng));
        return Vec3(u.normalized());
    };
    auto disturb = [&](const Pose3& T) {
        const Vec3 axis = unit(), dir = unit();
        return Pose3(T.R * so3::exp(cfg.init_rot_err_deg * kDeg * axis), T.p + cfg.init_pos_err * dir);
    };

    GpTrajectory tr[2] = {
        GpTrajectory(0.0, dt, repr, mode, cfg.qc_rot * Mat3::Identity(), cfg.qc_pos * Mat3::Identity()),
        GpTrajectory(0.0, dt, repr, mode, cfg.qc_rot * Mat3::Identity(), cfg.qc_pos * Mat3::Identity())};
    for (int i = 0; i < 2; ++i) {
        SupportState x = state_from_pose(lidar_gt(i), 0.0);
        const Pose3 T = disturb(Pose3(x.R, x.p));
        x.R = T.R;
        x.p = T.p;
        tr[i].add_knot(x);
    }
    Pose3 ext = disturb(ext_gt(0.0));

    const Mat6 coupling_info = diag_sqrt_info(cfg.coupling_rot_sigma, cfg.coupling_pos_sigma);
    FixedLagSetup setup;
    setup.trajs = {&tr[0], &tr[1]};
    setup.poses = {&ext};
    setup.pose_prior_sqrt_info = {diag_sqrt_info(cfg.ext_prior_rot_sigma, cfg.ext_prior_pos_sigma)};
    setup.t_end = cfg.duration;
    setup.add_measurements = [&](Problem& pb, double from, double to) {
        for (int i = 0; i < 2; ++i) {
            auto lo = std::lower_bound(pts[i].begin(), pts[i].end(), from,
                                       [](const LidarPoint& m, double t) { return m.t < t; });
            for (auto it = lo; it != pts[i].end() && it->t <= to; ++it) {
                FactorPtr f = point2plane_factor(i, it->t, Pose3(), -1, it->p, room.normal(it->wall),
                                                 room.offset(it->wall), cfg.lidar_sigma);
                f->huber = cfg.huber;
                pb.add_factor(std::move(f));
            }
        }
        const long k0 = static_cast<long>(std::ceil(from / cfg.coupling_period - 1e-9));
        for (long k = k0; k * cfg.coupling_period <= to + 1e-12; ++k)
            pb.add_factor(coupling_factor(0, 1, 0, std::min(k * cfg.coupling_period, to), coupling_info));
    };
    FixedLagOptions opts;
    opts.window = cfg.window;
    opts.slide = cfg.slide;
    opts.solver = cfg.solver;

    const auto start = std::chrono::steady_clock::now();
    const std::vector<WindowResult> windows = fixed_lag_run(setup, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    int iters = 0;
    bool converged = true, mono = true;
    for (const WindowResult& w : windows) {
        iters += w.report.iterations;
        converged = converged && w.report.converged;
        mono = mono && monotone(w.report);
        ExtrinsicSample s;
        s.repr = repr;
        s.mode = mode;
        s.omega = omega;
        s.t_start = w.t_start;
        s.t_end = w.t_end;
        s.estimate = w.poses[0];
        s.truth = ext_gt(w.t_end);
        s.rot_err_deg = so3::log(s.truth.R.transpose() * s.estimate.R).norm() / kDeg;
        s.pos_err = (s.estimate.p - s.truth.p).norm();
        trace.push_back(s);
    }
    for (int i = 0; i < 2; ++i) {
        RunResult r;
        r.scenario = "mlcme_l" + std::to_string(i);
        r.repr = repr;
        r.mode = mode;
        r.dt = dt;
        r.omega = omega;
        r.seed = cfg.seed;
        const auto [pos, rot] = evaluate_rmse(tr[i], lidar_gt(i), 0.0, cfg.duration);
        r.pos_rmse = pos;
        r.rot_rmse = rot;
        r.iters = iters;
        r.converged = converged;
        r.monotone = mono;
        if (cfg.timing) r.solve_time_s = wall;
        results.push_back(r);
    }
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int threads) {
    std::vector<GridPoint> grid;
    for (size_t oi = 0; oi < cfg.omegas.size(); ++oi)
        for (size_t di = 0; di < cfg.dts.size(); ++di)
            for (size_t ri = 0; ri < cfg.reprs.size(); ++ri)
                for (size_t mi = 0; mi < cfg.modes.size(); ++mi) grid.push_back({oi, di, ri, mi});

    std::vector<std::vector<RunResult>> results(grid.size());
    std::vector<std::vector<ExtrinsicSample>> traces(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next++; i < grid.size(); i = next++) {
            try {
                if (cfg.scenario == Scenario::Mlcme)
                    run_mlcme(cfg, grid[i], results[i], traces[i]);
                else
                    results[i].push_back(run_batch(cfg, grid[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    ExperimentOutput out;
    for (size_t i = 0; i < grid.size(); ++i) {
        out.results.insert(out.results.end(), results[i].begin(), results[i].end());
        out.trace.insert(out.trace.end(), traces[i].begin(), traces[i].end());
    }
    return out;
}

void write_results_csv(std::ostream& os, const std::vector<RunResult>& results) {
    const auto prec = os.precision(10);
    os << "scenario,repr,mode,dt,omega,seed,pos_rmse,rot_rmse,iters,converged,solve_time_s\n";
    for (const RunResult& r : results) {
        os << r.scenario << ',' << to_string(r.repr) << ',' << to_string(r.mode) << ',' << r.dt << ',' << r.omega
           << ',' << r.seed << ',' << r.pos_rmse << ',' << r.rot_rmse << ',' << r.iters << ','
           << (r.converged ? 1 : 0) << ',';
        if (r.solve_time_s < 0)
            os << "NA";
        else
            os << r.solve_time_s;
        os << '\n';
    }
    os.precision(prec);
}

void write_trace_csv(std::ostream& os, const std::vector<ExtrinsicSample>& trace) {
    const auto prec = os.precision(10);
    os << "repr,mode,omega,t_start,t_end,rot_err_deg,pos_err,px,py,pz,qw,qx,qy,qz\n";
    for (const ExtrinsicSample& s : trace) {
        const Eigen::Quaterniond q(s.estimate.R);
        os << to_string(s.repr) << ',' << to_string(s.mode) << ',' << s.omega << ',' << s.t_start << ',' << s.t_end
           << ',' << s.rot_err_deg << ',' << s.pos_err << ',' << s.estimate.p.x() << ',' << s.estimate.p.y() << ','
           << s.estimate.p.z() << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z() << '\n';
    }
    os.precision(prec);
}

}  // namespace gptraj
