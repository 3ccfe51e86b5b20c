#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "gptraj/kinematics.hpp"

namespace gptraj {

using Jac18x36 = Eigen::Matrix<double, 18, 36>;

struct InterpolatedState {
    SupportState state;
    int knot = 0;   // index of the left bracketing knot
    double s = 0;   // time since that knot
    // Rows follow KnotVar at the query time; columns are the 18 variables of the left knot then the right knot.
    Jac18x36 jac = Jac18x36::Zero();

    Mat3 block(KnotVar out, int side, KnotVar in) const { return jac.block<3, 3>(3 * out, 18 * side + 3 * in); }
};

// Third-order (white-noise-on-jerk) trajectory on uniformly spaced knots.
class GpTrajectory {
public:
    GpTrajectory(double t0, double dt, Representation repr, Kinematics mode,
                 const Mat3& sigma_rot = Mat3::Identity(), const Mat3& sigma_pos = Mat3::Identity());

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    double end_time() const { return t0_ + dt_ * (num_knots() - 1); }
    double knot_time(int k) const { return t0_ + dt_ * k; }
    int num_knots() const { return static_cast<int>(knots_.size()); }

    Representation repr() const { return repr_; }
    Kinematics mode() const { return mode_; }
    void set_mode(Kinematics m) { mode_ = m; }
    const Mat3& sigma_rot() const { return sigma_rot_; }
    const Mat3& sigma_pos() const { return sigma_pos_; }

    const SupportState& knot(int k) const { return knots_.at(k); }
    SupportState& knot(int k) { return knots_.at(k); }
    std::vector<SupportState>& knots() { return knots_; }
    const std::vector<SupportState>& knots() const { return knots_; }
    void add_knot(const SupportState& x) { knots_.push_back(x); }

    // Left knot index and offset for time t (validated against the domain).
    std::pair<int, double> locate(double t) const;

    // State at time t in [t0, end_time]; t == end_time falls in the last interval.
    InterpolatedState interpolate(double t, bool jacobians = true) const;

    // Deterministic GP mean propagation of a knot over dt.
    SupportState propagate(const SupportState& x, double dt) const;

    // Appends propagated knots until the last knot time is >= t. No-op if already covered.
    void extend_to(double t);

    // One line per knot: t, qw, qx, qy, qz, wx, wy, wz, ax, ay, az, px, py, pz, vx, vy, vz, aax, aay, aaz
    void save(std::ostream& os) const;
    // Reads knots written by save(); knot times must be uniformly spaced.
    static GpTrajectory load(std::istream& is, Representation repr, Kinematics mode,
                             const Mat3& sigma_rot = Mat3::Identity(), const Mat3& sigma_pos = Mat3::Identity());

private:
    double t0_, dt_;
    Representation repr_;
    Kinematics mode_;
    Mat3 sigma_rot_, sigma_pos_;
    std::vector<SupportState> knots_;
};

// Distance between two states: rotation angle plus Euclidean norms of the other five variables.
double state_distance(const SupportState& x, const SupportState& y);

}  // namespace gptraj
