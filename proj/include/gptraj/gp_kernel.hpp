#pragma once

#include <Eigen/Dense>

namespace gptraj::kernel {

// Base matrices of an N-level integrator chain driven by white noise on the
// highest level. Full matrices are the Kronecker product with the 3x3 (or 6x6)
// noise density, so everything here is density-independent.

// exp(A dt) for the canonical chain: entry (n, m) = dt^(m-n) / (m-n)!.
Eigen::MatrixXd transition(int N, double dt);

// Integral over [0, dt] of F(s) B B^T F(s)^T.
Eigen::MatrixXd process_cov(int N, double dt);

struct InterpMatrices {
    Eigen::MatrixXd lambda;  // weight on the left knot's local state
    Eigen::MatrixXd psi;     // weight on the right knot's local state
};

// Gains for the state at s in [0, dt] after the left knot.
InterpMatrices interp_matrices(int N, double dt, double s);

}  // namespace gptraj::kernel
