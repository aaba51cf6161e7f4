#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "tanim/tensor3.hpp"

namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline tanim::Tensor3d random_tensor(Eigen::Index i1, Eigen::Index i2, Eigen::Index i3,
                                     std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    tanim::Tensor3d t(i1, i2, i3);
    for (Eigen::Index i = 0; i < t.vec().size(); ++i) t.vec()[i] = gauss(rng);
    return t;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gauss(rng);
    return m;
}

// First `cols` columns of the Q factor of a Gaussian matrix.
inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols,
                                          std::mt19937_64& rng) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rows, cols, rng));
    Eigen::MatrixXd q = qr.householderQ();
    return q.leftCols(cols);
}

inline double rel_err(const tanim::Tensor3d& value, const tanim::Tensor3d& reference) {
    return tanim::frobenius_norm(value - reference) / tanim::frobenius_norm(reference);
}

}  // namespace testutil
