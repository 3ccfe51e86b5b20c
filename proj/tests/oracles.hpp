#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "gptraj/se3.hpp"

namespace oracle {

using gptraj::Mat3;
using gptraj::Vec3;
using gptraj::Vec6;

// Central differences of a vector function with step h.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn,
                                   const Eigen::VectorXd& x0, double h = 1e-6) {
    const Eigen::VectorXd f0 = fn(x0);
    Eigen::MatrixXd J(f0.size(), x0.size());
    for (int i = 0; i < x0.size(); ++i) {
        Eigen::VectorXd xp = x0, xm = x0;
        xp(i) += h;
        xm(i) -= h;
        J.col(i) = (fn(xp) - fn(xm)) / (2.0 * h);
    }
    return J;
}

// Relative Frobenius error against a reference; the floor keeps structurally zero blocks meaningful.
inline double rel_err(const Eigen::MatrixXd& value, const Eigen::MatrixXd& reference, double floor = 1e-3) {
    return (value - reference).norm() / std::max(reference.norm(), floor);
}

inline Vec3 random_vec(std::mt19937_64& rng, double max_norm) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec3 d(n(rng), n(rng), n(rng));
    d.normalize();
    return d * max_norm * std::cbrt(u(rng));
}

inline Vec3 gaussian_vec(std::mt19937_64& rng, double sigma = 1.0) {
    std::normal_distribution<double> n(0.0, sigma);
    return Vec3(n(rng), n(rng), n(rng));
}

inline Vec6 random_twist(std::mt19937_64& rng, double max_angle, double rho_sigma = 1.0) {
    Vec6 x;
    x << random_vec(rng, max_angle), gaussian_vec(rng, rho_sigma);
    return x;
}

// Matrix exponential of the hat matrix by a long Taylor series with scaling and squaring.
inline Mat3 exp_series(const Vec3& th) {
    int sq = 0;
    double n = th.norm();
    while (n > 0.5) {
        n *= 0.5;
        ++sq;
    }
    const Mat3 K = gptraj::so3::hat(th / std::pow(2.0, sq));
    Mat3 R = Mat3::Identity(), term = Mat3::Identity();
    for (int k = 1; k < 30; ++k) {
        term = term * K / k;
        R += term;
    }
    for (int i = 0; i < sq; ++i) R = R * R;
    return R;
}

// Right Jacobian by its defining series sum (-1)^k/(k+1)! K^k.
inline Mat3 jr_series(const Vec3& th) {
    const Mat3 K = gptraj::so3::hat(th);
    Mat3 J = Mat3::Zero(), term = Mat3::Identity();
    double fact = 1.0;
    for (int k = 0; k < 60; ++k) {
        fact *= (k + 1);
        J += term / fact * ((k % 2 == 0) ? 1.0 : -1.0);
        term = term * K;
    }
    return J;
}

// Rotation of Exp(x) composed with a perturbation, flattened for FD of rotation-valued maps.
inline Vec3 rot_diff(const Mat3& R0, const Mat3& R1) { return gptraj::so3::log(R0.transpose() * R1); }

}  // namespace oracle
