#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "tanim/errors.hpp"

namespace tanim {

// Dense rank-3 tensor over a real scalar, mode-1-fastest linear layout:
// element (i1,i2,i3) lives at flat offset i1 + I1*(i2 + I2*i3), indices 0-based.
// Frontal slices (fixed i3) are therefore contiguous I1xI2 column-major blocks,
// which is what makes per-frame mesh access and the mode-1 unfolding free.
// Mode arguments follow the 1-based labels {1,2,3} used throughout the library.
template <typename Scalar = double>
class Tensor3 {
public:
    using Index = Eigen::Index;
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using ConstSliceMap = Eigen::Map<const MatrixType>;
    using SliceMap = Eigen::Map<MatrixType>;

    Tensor3() : dims_{0, 0, 0} {}

    Tensor3(Index i1, Index i2, Index i3) : dims_{i1, i2, i3} {
        if (i1 < 0 || i2 < 0 || i3 < 0)
            throw DimensionError("Tensor3: dimensions must be non-negative, got (" +
                                 std::to_string(i1) + "," + std::to_string(i2) + "," +
                                 std::to_string(i3) + ")");
        data_.setZero(i1 * i2 * i3);
    }

    Index dim(int mode) const {
        check_mode(mode);
        return dims_[mode - 1];
    }

    const std::array<Index, 3>& dims() const { return dims_; }

    Index size() const { return data_.size(); }

    Scalar operator()(Index a, Index b, Index c) const { return data_[offset(a, b, c)]; }
    Scalar& operator()(Index a, Index b, Index c) { return data_[offset(a, b, c)]; }

    // Flat view in the linear layout described above.
    const VectorType& vec() const { return data_; }
    VectorType& vec() { return data_; }

    // Frontal slice i3 as an I1xI2 matrix view (no copy).
    ConstSliceMap slice(Index i3) const {
        check_slice(i3);
        return ConstSliceMap(data_.data() + i3 * dims_[0] * dims_[1], dims_[0], dims_[1]);
    }
    SliceMap slice(Index i3) {
        check_slice(i3);
        return SliceMap(data_.data() + i3 * dims_[0] * dims_[1], dims_[0], dims_[1]);
    }

    bool all_finite() const { return data_.allFinite(); }

    static void check_mode(int mode) {
        if (mode < 1 || mode > 3)
            throw ArgumentError("mode must be 1, 2 or 3, got " + std::to_string(mode));
    }

private:
    Index offset(Index a, Index b, Index c) const {
        if (a < 0 || a >= dims_[0] || b < 0 || b >= dims_[1] || c < 0 || c >= dims_[2])
            throw DimensionError("Tensor3 index (" + std::to_string(a) + "," +
                                 std::to_string(b) + "," + std::to_string(c) +
                                 ") out of range for dims (" + std::to_string(dims_[0]) + "," +
                                 std::to_string(dims_[1]) + "," + std::to_string(dims_[2]) + ")");
        return a + dims_[0] * (b + dims_[1] * c);
    }

    void check_slice(Index i3) const {
        if (i3 < 0 || i3 >= dims_[2])
            throw DimensionError("slice index " + std::to_string(i3) +
                                 " out of range for dim " + std::to_string(dims_[2]));
    }

    std::array<Index, 3> dims_;
    VectorType data_;
};

using Tensor3d = Tensor3<double>;

// Mode-l unfolding of a tensor with the originating mode label kept alongside,
// so the matrix can be folded back without re-stating where it came from.
template <typename Scalar = double>
struct UnfoldedMatrix {
    int mode = 1;
    std::array<Eigen::Index, 3> source_dims{0, 0, 0};
    typename Tensor3<Scalar>::MatrixType data;

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index cols() const { return data.cols(); }
};

using UnfoldedMatrixd = UnfoldedMatrix<double>;

// Column ordering of the unfoldings (lower-numbered remaining mode fastest):
//   mode 1: entry (i1, i2 + I2*i3)
//   mode 2: entry (i2, i1 + I1*i3)
//   mode 3: entry (i3, i1 + I1*i2)
template <typename Scalar>
UnfoldedMatrix<Scalar> unfold(const Tensor3<Scalar>& t, int mode) {
    Tensor3<Scalar>::check_mode(mode);
    const auto [i1, i2, i3] = t.dims();
    UnfoldedMatrix<Scalar> u;
    u.mode = mode;
    u.source_dims = t.dims();
    using MapType = Eigen::Map<const typename Tensor3<Scalar>::MatrixType>;
    switch (mode) {
        case 1:
            u.data = MapType(t.vec().data(), i1, i2 * i3);
            break;
        case 2:
            u.data.resize(i2, i1 * i3);
            for (Eigen::Index k = 0; k < i3; ++k)
                u.data.middleCols(k * i1, i1) = t.slice(k).transpose();
            break;
        case 3:
            u.data = MapType(t.vec().data(), i1 * i2, i3).transpose();
            break;
    }
    return u;
}

template <typename Scalar>
Tensor3<Scalar> fold(const UnfoldedMatrix<Scalar>& u, const std::array<Eigen::Index, 3>& dims) {
    Tensor3<Scalar>::check_mode(u.mode);
    const auto [i1, i2, i3] = dims;
    const Eigen::Index other =
        u.mode == 1 ? i2 * i3 : (u.mode == 2 ? i1 * i3 : i1 * i2);
    if (u.rows() != dims[u.mode - 1] || u.cols() != other)
        throw DimensionError("fold: matrix is " + std::to_string(u.rows()) + "x" +
                             std::to_string(u.cols()) + ", but mode-" + std::to_string(u.mode) +
                             " folding into (" + std::to_string(i1) + "," + std::to_string(i2) +
                             "," + std::to_string(i3) + ") needs " +
                             std::to_string(dims[u.mode - 1]) + "x" + std::to_string(other));
    Tensor3<Scalar> t(i1, i2, i3);
    using MapType = Eigen::Map<typename Tensor3<Scalar>::MatrixType>;
    switch (u.mode) {
        case 1:
            MapType(t.vec().data(), i1, i2 * i3) = u.data;
            break;
        case 2:
            for (Eigen::Index k = 0; k < i3; ++k)
                t.slice(k) = u.data.middleCols(k * i1, i1).transpose();
            break;
        case 3:
            MapType(t.vec().data(), i1 * i2, i3) = u.data.transpose();
            break;
    }
    return t;
}

// t x_l m with m of shape D x I_l: contraction runs along m's columns,
//   result_(l) = m * unfold(t, l),
// so the result replaces dimension I_l by D. Multiplying by a factor matrix
// U (I_l x R, orthonormal columns) therefore uses U.transpose() to project
// and U itself to expand back.
template <typename Scalar, typename Derived>
Tensor3<Scalar> mode_multiply(const Tensor3<Scalar>& t, const Eigen::MatrixBase<Derived>& m,
                              int mode) {
    Tensor3<Scalar>::check_mode(mode);
    const auto [i1, i2, i3] = t.dims();
    const Eigen::Index contracted = t.dims()[mode - 1];
    if (m.cols() != contracted)
        throw DimensionError("mode_multiply: matrix has " + std::to_string(m.cols()) +
                             " columns, mode-" + std::to_string(mode) + " dimension is " +
                             std::to_string(contracted));
    const Eigen::Index d = m.rows();
    using MapType = Eigen::Map<typename Tensor3<Scalar>::MatrixType>;
    using ConstMapType = Eigen::Map<const typename Tensor3<Scalar>::MatrixType>;
    switch (mode) {
        case 1: {
            Tensor3<Scalar> r(d, i2, i3);
            MapType(r.vec().data(), d, i2 * i3) =
                m * ConstMapType(t.vec().data(), i1, i2 * i3);
            return r;
        }
        case 2: {
            Tensor3<Scalar> r(i1, d, i3);
            for (Eigen::Index k = 0; k < i3; ++k)
                r.slice(k) = t.slice(k) * m.transpose();
            return r;
        }
        default: {
            Tensor3<Scalar> r(i1, i2, d);
            MapType(r.vec().data(), i1 * i2, d) =
                ConstMapType(t.vec().data(), i1 * i2, i3) * m.transpose();
            return r;
        }
    }
}

// Slice of thickness one along mode l at position alpha (dimension kept, set to 1).
template <typename Scalar>
Tensor3<Scalar> sub_tensor(const Tensor3<Scalar>& t, int mode, Eigen::Index alpha) {
    Tensor3<Scalar>::check_mode(mode);
    if (alpha < 0 || alpha >= t.dims()[mode - 1])
        throw DimensionError("sub_tensor: position " + std::to_string(alpha) +
                             " out of range for mode-" + std::to_string(mode) + " dimension " +
                             std::to_string(t.dims()[mode - 1]));
    auto dims = t.dims();
    dims[mode - 1] = 1;
    Tensor3<Scalar> r(dims[0], dims[1], dims[2]);
    for (Eigen::Index c = 0; c < dims[2]; ++c)
        for (Eigen::Index b = 0; b < dims[1]; ++b)
            for (Eigen::Index a = 0; a < dims[0]; ++a) {
                const Eigen::Index sa = mode == 1 ? alpha : a;
                const Eigen::Index sb = mode == 2 ? alpha : b;
                const Eigen::Index sc = mode == 3 ? alpha : c;
                r(a, b, c) = t(sa, sb, sc);
            }
    return r;
}

template <typename Scalar>
Scalar inner_product(const Tensor3<Scalar>& a, const Tensor3<Scalar>& b) {
    if (a.dims() != b.dims())
        throw DimensionError("inner_product: dims (" + std::to_string(a.dims()[0]) + "," +
                             std::to_string(a.dims()[1]) + "," + std::to_string(a.dims()[2]) +
                             ") vs (" + std::to_string(b.dims()[0]) + "," +
                             std::to_string(b.dims()[1]) + "," + std::to_string(b.dims()[2]) +
                             ")");
    return a.vec().dot(b.vec());
}

template <typename Scalar>
Scalar frobenius_norm(const Tensor3<Scalar>& t) {
    return t.vec().norm();
}

template <typename Scalar>
Tensor3<Scalar> operator+(const Tensor3<Scalar>& a, const Tensor3<Scalar>& b) {
    if (a.dims() != b.dims()) throw DimensionError("operator+: dimension mismatch");
    Tensor3<Scalar> r = a;
    r.vec() += b.vec();
    return r;
}

template <typename Scalar>
Tensor3<Scalar> operator-(const Tensor3<Scalar>& a, const Tensor3<Scalar>& b) {
    if (a.dims() != b.dims()) throw DimensionError("operator-: dimension mismatch");
    Tensor3<Scalar> r = a;
    r.vec() -= b.vec();
    return r;
}

template <typename Scalar>
Tensor3<Scalar> operator*(Scalar s, const Tensor3<Scalar>& t) {
    Tensor3<Scalar> r = t;
    r.vec() *= s;
    return r;
}

}  // namespace tanim
