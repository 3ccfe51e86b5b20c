#pragma once

#include "gptraj/se3.hpp"

namespace gptraj {

enum class Representation { SO3xR3, SE3 };
enum class Kinematics { ClosedForm, Approximated };

// Knot state in the unified layout: body-frame omega and alpha, world-frame p, v, a.
struct SupportState {
    Mat3 R = Mat3::Identity();
    Vec3 w = Vec3::Zero();
    Vec3 alpha = Vec3::Zero();
    Vec3 p = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 a = Vec3::Zero();
};

// Variable order inside a knot and inside every 18-row/column Jacobian block.
enum KnotVar { kVarR = 0, kVarW = 1, kVarAlpha = 2, kVarP = 3, kVarV = 4, kVarA = 5 };
constexpr int kKnotDim = 18;

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Vec18 = Eigen::Matrix<double, 18, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat18 = Eigen::Matrix<double, 18, 18>;

// R <- R Exp(d_R), everything else additive.
SupportState knot_plus(const SupportState& x, const Vec18& d);

// Relative rotation angles at or above this are rejected by the local maps.
constexpr double kMaxRelativeAngle = 3.14159265358979323846 - 1e-6;

// ---- SO(3): local state (theta, theta', theta'') relative to a left rotation Ra.

struct So3Local {
    Vec3 th = Vec3::Zero(), thd = Vec3::Zero(), thdd = Vec3::Zero();
    Vec9 stacked() const;
    static So3Local from_stacked(const Vec9& x);
};

struct So3LocalFromGlobal {
    So3Local x;
    // rows (theta, theta', theta''); columns are the right-plus / additive perturbations of the inputs
    Eigen::Matrix<double, 9, 3> d_Ra, d_Rb, d_wb, d_alphab;
};

So3LocalFromGlobal so3_local_from_global(const Mat3& Ra, const Mat3& Rb, const Vec3& wb, const Vec3& alphab,
                                         Kinematics mode, bool jacobians = true);

struct So3GlobalFromLocal {
    Mat3 R;
    Vec3 w, alpha;
    Mat9 d_local;  // rows (R, w, alpha), cols (theta, theta', theta'')
    Mat3 dR_dRa;   // direct dependence of R on Ra
};

So3GlobalFromLocal so3_global_from_local(const Mat3& Ra, const So3Local& x, Kinematics mode, bool jacobians = true);

// ---- SE(3): knots reshuffled to (T, tau, tau') with tau = (w, R^T v) and tau' = (alpha, R^T a - w x R^T v).

struct TwistState {
    Pose3 T;
    Vec6 tau = Vec6::Zero(), taud = Vec6::Zero();
};

// Jacobian rows/cols follow (T, tau, tau') with T perturbed as T Exp(d).
TwistState to_twist(const SupportState& x, Mat18* jac = nullptr);
SupportState from_twist(const TwistState& x, Mat18* jac = nullptr);

struct Se3Local {
    Vec6 xi = Vec6::Zero(), xid = Vec6::Zero(), xidd = Vec6::Zero();
    Vec18 stacked() const;
    static Se3Local from_stacked(const Vec18& x);
};

struct Se3LocalFromGlobal {
    Se3Local x;
    Eigen::Matrix<double, 18, 6> d_Ta;
    Mat18 d_b;  // with respect to (Tb, tau_b, tau'_b)
};

Se3LocalFromGlobal se3_local_from_global(const Pose3& Ta, const TwistState& b, Kinematics mode, bool jacobians = true);

struct Se3GlobalFromLocal {
    TwistState x;
    Mat18 d_local;
    Mat6 dT_dTa;
};

Se3GlobalFromLocal se3_global_from_local(const Pose3& Ta, const Se3Local& x, Kinematics mode, bool jacobians = true);

}  // namespace gptraj
