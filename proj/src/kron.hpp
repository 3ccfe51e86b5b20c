#pragma once

#include <Eigen/Dense>

namespace gptraj {

// M (3x3 level gains) expanded over a D-dimensional variable: kron(M, I_D).
template <int D>
Eigen::Matrix<double, 3 * D, 3 * D> kron3(const Eigen::MatrixXd& M) {
    Eigen::Matrix<double, 3 * D, 3 * D> K = Eigen::Matrix<double, 3 * D, 3 * D>::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            K.template block<D, D>(D * i, D * j).diagonal().setConstant(M(i, j));
    return K;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

}  // namespace gptraj
