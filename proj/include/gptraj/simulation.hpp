#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "gptraj/kinematics.hpp"
#include "gptraj/se3.hpp"

namespace gptraj {

enum class GtKind { Split, NonSplit, Lissajous };

// Analytic ground-truth motion. Split: rotation and translation are independent sinusoids.
// NonSplit and Lissajous: the body x axis follows the velocity direction.
struct GtTrajectory {
    GtKind kind = GtKind::Split;
    double omega = 1.0;

    Vec3 position(double t) const;
    Vec3 velocity(double t) const;
    Pose3 pose(double t) const;
};

using PoseFn = std::function<Pose3(double)>;

// Full kinematic state of a smooth pose function (body-frame w, alpha; world-frame v, a) by finite differences.
SupportState state_from_pose(const PoseFn& f, double t);

// Axis-aligned box with six inward-facing planes n.x + c = 0.
// Wall ids: 0 (+x), 1 (-x), 2 (+y), 3 (-y), 4 (+z), 5 (-z).
struct BoxRoom {
    Vec3 lo, hi;

    BoxRoom(const Vec3& lo_, const Vec3& hi_);
    Vec3 normal(int wall) const;
    double offset(int wall) const;
    bool contains(const Vec3& x) const;
};

struct RayHit {
    double range = 0;
    int wall = -1;
};

// Nearest wall hit by the ray; throws DomainError if the origin is not strictly inside.
RayHit ray_box(const Vec3& origin, const Vec3& dir, const BoxRoom& room);

struct RangeMeas {
    double t = 0;
    int tag = 0;
    int anchor = 0;
    double d = 0;
};

struct LidarPoint {
    double t = 0;
    int lidar = 0;
    Vec3 p = Vec3::Zero();  // in the lidar frame
    int wall = -1;
};

// Deterministic 64-bit seed for substream (a, b) of a master seed (splitmix64 chaining).
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

// One range per (tag, anchor) at ticks t0 + k * period, k * period < duration.
// Noise for tick k comes from substream (tag * anchors + anchor, k).
std::vector<RangeMeas> simulate_uwb(const PoseFn& body, const std::vector<Vec3>& anchors,
                                    const std::vector<Vec3>& tag_offsets, double t0, double duration,
                                    double period, double sigma, std::uint64_t seed);

// n directions on a Fibonacci sphere lattice.
std::vector<Vec3> fibonacci_directions(int n);

// Ray-traces rays_per_step lattice directions from the lidar pose body(t) * mount(t) at each tick.
// Noise for tick k comes from substream (1000 + lidar_id, k). Throws DomainError with the timestamp
// if the sensor leaves the room.
std::vector<LidarPoint> simulate_lidar(const PoseFn& body, const PoseFn& mount, const BoxRoom& room, int lidar_id,
                                       double t0, double duration, int rays_per_step, double rate, double sigma,
                                       std::uint64_t seed);

// Line-oriented dump: "RANGE t tag anchor d" and "LIDAR t lidar x y z wall".
void write_measurements(std::ostream& os, const std::vector<RangeMeas>& ranges,
                        const std::vector<LidarPoint>& points);
void read_measurements(std::istream& is, std::vector<RangeMeas>& ranges, std::vector<LidarPoint>& points);

}  // namespace gptraj
