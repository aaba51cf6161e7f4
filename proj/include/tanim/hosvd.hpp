#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tanim/errors.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

// Full orthogonal Tucker decomposition of a rank-3 tensor: square orthogonal
// factors (one per mode) and a core of the input's shape. The core's mode-l
// slice norms reproduce the singular values of the mode-l unfolding in
// non-increasing order, and distinct slices of the core are mutually orthogonal.
template <typename Scalar = double>
struct TuckerOperator {
    using MatrixType = typename Tensor3<Scalar>::MatrixType;

    Tensor3<Scalar> core;
    std::array<MatrixType, 3> factors;  // factors[l-1] is I_l x I_l, orthogonal
};

// Leading-rank restriction of a TuckerOperator: factors keep their first R_l
// columns, the core keeps its leading R1 x R2 x R3 block.
template <typename Scalar = double>
struct TruncatedTucker {
    using MatrixType = typename Tensor3<Scalar>::MatrixType;

    Tensor3<Scalar> core;               // R1 x R2 x R3
    std::array<MatrixType, 3> factors;  // factors[l-1] is I_l x R_l
    std::array<Eigen::Index, 3> ranks;
    std::array<Eigen::Index, 3> original_dims;
};

using TuckerOperatord = TuckerOperator<double>;
using TruncatedTuckerd = TruncatedTucker<double>;

namespace detail {

// Square orthogonal basis whose leading min(rows, cols) columns are the left
// singular vectors of m, singular values non-increasing. With more rows than
// columns the thin factor is completed deterministically by a Householder QR
// (trailing Q columns span the orthogonal complement). An all-zero m has no
// distinguished directions and yields the identity.
template <typename Scalar>
typename Tensor3<Scalar>::MatrixType left_singular_basis(
    const typename Tensor3<Scalar>::MatrixType& m) {
    using MatrixType = typename Tensor3<Scalar>::MatrixType;
    const Eigen::Index rows = m.rows(), cols = m.cols();
    if (m.norm() == Scalar(0)) return MatrixType::Identity(rows, rows);
    if (rows <= cols) {
        Eigen::BDCSVD<MatrixType> svd(m, Eigen::ComputeFullU);
        if (svd.info() != Eigen::Success)
            throw DecompositionError("singular value decomposition did not converge on a " +
                                     std::to_string(rows) + "x" + std::to_string(cols) +
                                     " unfolding");
        return svd.matrixU();
    }
    Eigen::BDCSVD<MatrixType> svd(m, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
        throw DecompositionError("singular value decomposition did not converge on a " +
                                 std::to_string(rows) + "x" + std::to_string(cols) +
                                 " unfolding");
    MatrixType basis(rows, rows);
    basis.leftCols(cols) = svd.matrixU();
    Eigen::HouseholderQR<MatrixType> qr(svd.matrixU());
    MatrixType q = qr.householderQ();
    basis.rightCols(rows - cols) = q.rightCols(rows - cols);
    return basis;
}

}  // namespace detail

template <typename Scalar>
TuckerOperator<Scalar> hosvd(const Tensor3<Scalar>& t) {
    const auto [i1, i2, i3] = t.dims();
    if (i1 < 1 || i2 < 1 || i3 < 1)
        throw DimensionError("hosvd: all dimensions must be >= 1, got (" + std::to_string(i1) +
                             "," + std::to_string(i2) + "," + std::to_string(i3) + ")");
    if (!t.all_finite()) throw ArgumentError("hosvd: tensor contains non-finite values");
    TuckerOperator<Scalar> op;
    for (int mode = 1; mode <= 3; ++mode)
        op.factors[mode - 1] = detail::left_singular_basis<Scalar>(unfold(t, mode).data);
    op.core = mode_multiply(
        mode_multiply(mode_multiply(t, op.factors[0].transpose(), 1),
                      op.factors[1].transpose(), 2),
        op.factors[2].transpose(), 3);
    return op;
}

template <typename Scalar>
TruncatedTucker<Scalar> truncate(const TuckerOperator<Scalar>& op,
                                 const std::array<Eigen::Index, 3>& ranks) {
    for (int l = 0; l < 3; ++l) {
        const Eigen::Index dim = op.core.dims()[l];
        if (ranks[l] < 1 || ranks[l] > dim)
            throw RankError("truncate: mode-" + std::to_string(l + 1) + " rank " +
                            std::to_string(ranks[l]) + " outside [1, " + std::to_string(dim) +
                            "]");
    }
    TruncatedTucker<Scalar> tt;
    tt.ranks = ranks;
    tt.original_dims = op.core.dims();
    for (int l = 0; l < 3; ++l) tt.factors[l] = op.factors[l].leftCols(ranks[l]);
    Tensor3<Scalar> core(ranks[0], ranks[1], ranks[2]);
    for (Eigen::Index c = 0; c < ranks[2]; ++c)
        core.slice(c) = op.core.slice(c).topLeftCorner(ranks[0], ranks[1]);
    tt.core = std::move(core);
    return tt;
}

template <typename Scalar>
Tensor3<Scalar> reconstruct(const TruncatedTucker<Scalar>& tt) {
    if (tt.core.dims() != tt.ranks)
        throw DimensionError("reconstruct: core shape disagrees with stored ranks");
    for (int l = 0; l < 3; ++l) {
        if (tt.factors[l].rows() != tt.original_dims[l] || tt.factors[l].cols() != tt.ranks[l])
            throw DimensionError(
                "reconstruct: mode-" + std::to_string(l + 1) + " factor is " +
                std::to_string(tt.factors[l].rows()) + "x" + std::to_string(tt.factors[l].cols()) +
                ", expected " + std::to_string(tt.original_dims[l]) + "x" +
                std::to_string(tt.ranks[l]));
    }
    return mode_multiply(mode_multiply(mode_multiply(tt.core, tt.factors[0], 1), tt.factors[1], 2),
                         tt.factors[2], 3);
}

// Worst inner product between distinct mode-l slices of the core, measured
// against the dominant slice energy. Normalizing per pair would divide by the
// norms of numerically-zero slices (rank-deficient modes leave trailing slices
// of pure rounding residue) and report spurious O(1) defects; against the
// dominant energy the defect of an exact decomposition stays at rounding level
// for any conditioning. A zero core has defect zero.
template <typename Scalar>
Scalar core_orthogonality_defect(const TuckerOperator<Scalar>& op, int mode) {
    Tensor3<Scalar>::check_mode(mode);
    const auto m = unfold(op.core, mode).data;  // slices along mode -> rows
    const auto gram = (m * m.transpose()).eval();
    const Scalar dominant = gram.diagonal().maxCoeff();
    if (dominant <= Scalar(0)) return Scalar(0);
    Scalar defect = 0;
    for (Eigen::Index a = 0; a < gram.rows(); ++a)
        for (Eigen::Index b = a + 1; b < gram.cols(); ++b) {
            using std::abs;
            defect = std::max(defect, abs(gram(a, b)) / dominant);
        }
    return defect;
}

// Frobenius norms of the mode-l core slices; for a hosvd output these equal the
// singular values of the mode-l unfolding of the input, non-increasing.
template <typename Scalar>
typename Tensor3<Scalar>::VectorType core_slice_norms(const TuckerOperator<Scalar>& op,
                                                      int mode) {
    Tensor3<Scalar>::check_mode(mode);
    return unfold(op.core, mode).data.rowwise().norm();
}

}  // namespace tanim
