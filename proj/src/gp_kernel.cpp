#include "gptraj/gp_kernel.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "gptraj/so3.hpp"

namespace gptraj::kernel {

namespace {

void check_order(int N) {
    if (N < 2 || N > 6) throw DomainError("GP order must be in [2, 6], got " + std::to_string(N));
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Eigen::MatrixXd transition_unchecked(int N, double dt) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = n; m < N; ++m) F(n, m) = std::pow(dt, m - n) / factorial(m - n);
    return F;
}

Eigen::MatrixXd process_cov_unchecked(int N, double dt) {
    const int D = N - 1;
    Eigen::MatrixXd Q(N, N);
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            const int e = 2 * D + 1 - n - m;
            Q(n, m) = std::pow(dt, e) / (e * factorial(D - n) * factorial(D - m));
        }
    }
    return Q;
}

}  // namespace

Eigen::MatrixXd transition(int N, double dt) {
    check_order(N);
    if (dt < 0) throw DomainError("transition needs dt >= 0");
    return transition_unchecked(N, dt);
}

Eigen::MatrixXd process_cov(int N, double dt) {
    check_order(N);
    if (dt <= 0) throw DomainError("process covariance needs dt > 0");
    return process_cov_unchecked(N, dt);
}

InterpMatrices interp_matrices(int N, double dt, double s) {
    check_order(N);
    if (dt <= 0) throw DomainError("interpolation needs dt > 0");
    if (s < 0 || s > dt) throw DomainError("interpolation offset " + std::to_string(s) + " outside [0, dt]");
    if (dt < 1e-3) spdlog::warn("knot spacing {} s makes the process covariance badly conditioned", dt);

    // Work in unit time: with T = diag(dt^n), F(sigma dt) = T^-1 F1(sigma) T and
    // Q(sigma dt) = dt^(2N-1) T^-1 Q1(sigma) T^-1, so psi = T^-1 psi1 T and the same for lambda.
    const double sigma = s / dt;
    const Eigen::LLT<Eigen::MatrixXd> llt(process_cov_unchecked(N, 1.0));
    const Eigen::MatrixXd left = process_cov_unchecked(N, sigma) * transition_unchecked(N, 1.0 - sigma).transpose();
    const Eigen::MatrixXd psi1 = llt.solve(left.transpose()).transpose();
    const Eigen::MatrixXd lambda1 = transition_unchecked(N, sigma) - psi1 * transition_unchecked(N, 1.0);

    InterpMatrices r{Eigen::MatrixXd(N, N), Eigen::MatrixXd(N, N)};
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            const double scale = std::pow(dt, m - n);
            r.psi(n, m) = psi1(n, m) * scale;
            r.lambda(n, m) = lambda1(n, m) * scale;
        }
    }
    return r;
}

}  // namespace gptraj::kernel
