#include "gptraj/simulation.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace gptraj {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPhaseA = 57.0;  // radians
constexpr double kPhaseB = 43.0;  // radians

// Orientation whose x axis is the velocity direction and z axis is (p/|p|) x e_x, normalized.
Mat3 heading_frame(const Vec3& p, const Vec3& v, double t) {
    const double speed = v.norm();
    if (speed < 1e-9) throw DomainError("heading frame undefined at t=" + std::to_string(t) + ": zero velocity");
    const Vec3 ex = v / speed;
    Vec3 ez = p.normalized().cross(ex);
    if (ez.norm() < 1e-9) throw DomainError("heading frame undefined at t=" + std::to_string(t));
    ez.normalize();
    Mat3 R;
    R << ex, ez.cross(ex), ez;
    return R;
}

// Evaluated result type: returning the Eigen expression itself would dangle.
template <class F>
auto central5(const F& f, double t, double h) -> decltype(f(t)) {
    return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h);
}

}  // namespace

Vec3 GtTrajectory::position(double t) const {
    const double w = omega;
    switch (kind) {
        case GtKind::Split:
            return {5 * std::sin(0.45 * t + kPhaseB), 5 * std::cos(0.45 * t + kPhaseB), 5 * std::cos(0.15 * t + kPhaseA)};
        case GtKind::NonSplit:
            return {5 * std::sin(w * t + kPhaseB), 5 * std::cos(w * t + kPhaseB), 5 * std::cos(w * t / 3 + kPhaseA)};
        case GtKind::Lissajous:
            return {2 * std::sin(w * t), 2 * std::sin(w * t) * std::cos(w * t), 0.75};
    }
    return Vec3::Zero();
}

Vec3 GtTrajectory::velocity(double t) const {
    const double w = omega;
    switch (kind) {
        case GtKind::Split:
            return {5 * 0.45 * std::cos(0.45 * t + kPhaseB), -5 * 0.45 * std::sin(0.45 * t + kPhaseB),
                    -5 * 0.15 * std::sin(0.15 * t + kPhaseA)};
        case GtKind::NonSplit:
            return {5 * w * std::cos(w * t + kPhaseB), -5 * w * std::sin(w * t + kPhaseB),
                    -5 * w / 3 * std::sin(w * t / 3 + kPhaseA)};
        case GtKind::Lissajous:
            return {2 * w * std::cos(w * t), 2 * w * std::cos(2 * w * t), 0.0};
    }
    return Vec3::Zero();
}

Pose3 GtTrajectory::pose(double t) const {
    const Vec3 p = position(t);
    if (kind == GtKind::Split) {
        const double w = omega;
        const Vec3 th(kPi / 2 * std::cos(w * t + kPhaseA), kPi / 2 * std::sin(w * t + kPhaseA),
                      kPi * std::sqrt(3.0) / 2 * std::sin(w * t / 3 + kPhaseB));
        return {so3::exp(th), p};
    }
    return {heading_frame(p, velocity(t), t), p};
}

SupportState state_from_pose(const PoseFn& f, double t) {
    const double h = 1e-3;
    auto rot = [&](double s) -> Mat3 { return f(s).R; };
    auto pos = [&](double s) -> Vec3 { return f(s).p; };
    auto omega = [&](double s) -> Vec3 {
        const Mat3 Rd = central5(rot, s, h);
        const Mat3 W = f(s).R.transpose() * Rd;
        return so3::vee(0.5 * (W - W.transpose()));
    };
    auto vel = [&](double s) -> Vec3 { return central5(pos, s, h); };
    SupportState x;
    const Pose3 T = f(t);
    x.R = T.R;
    x.p = T.p;
    x.w = omega(t);
    x.alpha = central5(omega, t, h);
    x.v = vel(t);
    x.a = central5(vel, t, h);
    return x;
}

BoxRoom::BoxRoom(const Vec3& lo_, const Vec3& hi_) : lo(lo_), hi(hi_) {
    if (!(lo.array() < hi.array()).all()) throw std::invalid_argument("box room needs lo < hi on every axis");
}

Vec3 BoxRoom::normal(int wall) const {
    Vec3 n = Vec3::Zero();
    n(wall / 2) = (wall % 2 == 0) ? -1.0 : 1.0;
    return n;
}

double BoxRoom::offset(int wall) const {
    const int ax = wall / 2;
    return (wall % 2 == 0) ? hi(ax) : -lo(ax);
}

bool BoxRoom::contains(const Vec3& x) const { return (x.array() > lo.array()).all() && (x.array() < hi.array()).all(); }

RayHit ray_box(const Vec3& origin, const Vec3& dir, const BoxRoom& room) {
    if (!room.contains(origin)) throw DomainError("ray origin outside the room");
    RayHit best;
    best.range = std::numeric_limits<double>::infinity();
    for (int w = 0; w < 6; ++w) {
        const Vec3 n = room.normal(w);
        const double den = n.dot(dir);
        if (den >= 0) continue;  // parallel or moving away from this wall
        const double s = -(n.dot(origin) + room.offset(w)) / den;
        if (s > 0 && s < best.range) {
            best.range = s;
            best.wall = w;
        }
    }
    return best;
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(master) ^ a) ^ b);
}

std::vector<RangeMeas> simulate_uwb(const PoseFn& body, const std::vector<Vec3>& anchors,
                                    const std::vector<Vec3>& tag_offsets, double t0, double duration,
                                    double period, double sigma, std::uint64_t seed) {
    if (sigma < 0) throw std::invalid_argument("negative range noise");
    const int ticks = static_cast<int>(std::ceil(duration / period - 1e-9));
    const int na = static_cast<int>(anchors.size());
    std::vector<RangeMeas> out;
    out.reserve(static_cast<size_t>(ticks) * tag_offsets.size() * anchors.size());
    for (int k = 0; k < ticks; ++k) {
        const double t = t0 + k * period;
        const Pose3 T = body(t);
        for (int i = 0; i < static_cast<int>(tag_offsets.size()); ++i)
            for (int j = 0; j < na; ++j) {
                // Fresh distribution per substream: normal_distribution caches a second variate.
                std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(i * na + j), k));
                std::normal_distribution<double> noise(0.0, 1.0);
                const double d = (T * tag_offsets[i] - anchors[j]).norm();
                out.push_back({t, i, j, d + sigma * noise(rng)});
            }
    }
    return out;
}

std::vector<Vec3> fibonacci_directions(int n) {
    std::vector<Vec3> dirs;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden * i;
        dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return dirs;
}

std::vector<LidarPoint> simulate_lidar(const PoseFn& body, const PoseFn& mount, const BoxRoom& room, int lidar_id,
                                       double t0, double duration, int rays_per_step, double rate, double sigma,
                                       std::uint64_t seed) {
    const std::vector<Vec3> dirs = fibonacci_directions(rays_per_step);
    const int ticks = static_cast<int>(std::ceil(duration * rate - 1e-9));
    std::vector<LidarPoint> out;
    out.reserve(static_cast<size_t>(ticks) * dirs.size());
    for (int k = 0; k < ticks; ++k) {
        const double t = t0 + k / rate;
        const Pose3 T = body(t) * mount(t);
        if (!room.contains(T.p)) {
            std::ostringstream msg;
            msg << "lidar " << lidar_id << " outside the room at t=" << t;
            throw DomainError(msg.str());
        }
        std::mt19937_64 rng(substream_seed(seed, 1000 + static_cast<std::uint64_t>(lidar_id), k));
        std::normal_distribution<double> noise(0.0, 1.0);
        for (const Vec3& d : dirs) {
            const RayHit hit = ray_box(T.p, T.R * d, room);
            out.push_back({t, lidar_id, (hit.range + sigma * noise(rng)) * d, hit.wall});
        }
    }
    return out;
}

void write_measurements(std::ostream& os, const std::vector<RangeMeas>& ranges,
                        const std::vector<LidarPoint>& points) {
    const auto prec = os.precision(17);
    for (const RangeMeas& m : ranges) os << "RANGE " << m.t << ' ' << m.tag << ' ' << m.anchor << ' ' << m.d << '\n';
    for (const LidarPoint& m : points)
        os << "LIDAR " << m.t << ' ' << m.lidar << ' ' << m.p.x() << ' ' << m.p.y() << ' ' << m.p.z() << ' ' << m.wall
           << '\n';
    os.precision(prec);
}

void read_measurements(std::istream& is, std::vector<RangeMeas>& ranges, std::vector<LidarPoint>& points) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "RANGE") {
            RangeMeas m;
            ls >> m.t >> m.tag >> m.anchor >> m.d;
            if (!ls) throw std::runtime_error("malformed RANGE record on line " + std::to_string(lineno));
            ranges.push_back(m);
        } else if (tag == "LIDAR") {
            LidarPoint m;
            ls >> m.t >> m.lidar >> m.p.x() >> m.p.y() >> m.p.z() >> m.wall;
            if (!ls) throw std::runtime_error("malformed LIDAR record on line " + std::to_string(lineno));
            points.push_back(m);
        } else {
            throw std::runtime_error("unknown record '" + tag + "' on line " + std::to_string(lineno));
        }
    }
}

}  // namespace gptraj
