#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tanim/errors.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

// Per-frame affine map y = L x + b sending frame-0 coordinates to frame-i
// coordinates, stored as the 3x4 block [L | b]. Vertices are matrix rows, so
// applying to a K x 3 frame is V L^T + 1 b^T.
struct FrameTransform {
    Eigen::Matrix<double, 3, 4> matrix;

    FrameTransform() { matrix << Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(); }

    static FrameTransform identity() { return FrameTransform{}; }

    Eigen::Matrix3d linear() const { return matrix.template leftCols<3>(); }
    Eigen::Vector3d translation() const { return matrix.col(3); }

    // 2-norm condition number of the linear block; infinity when singular.
    double condition_number() const {
        const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(linear()).singularValues();
        if (sv[2] == 0.0) return std::numeric_limits<double>::infinity();
        return sv[0] / sv[2];
    }

    bool invertible() const {
        const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(linear()).singularValues();
        return sv[2] > 1e-12 * sv[0] && sv[0] > 0.0;
    }

    Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
        return (points * linear().transpose()).rowwise() + translation().transpose();
    }

    // Solves y = L x + b for x; the caller guarantees invertibility.
    Eigen::MatrixXd apply_inverse(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
        const Eigen::PartialPivLU<Eigen::Matrix3d> lu(linear());
        return lu.solve((points.rowwise() - translation().transpose()).transpose()).transpose();
    }
};

using TransformSequence = std::vector<FrameTransform>;

struct RigidMotionResult {
    Tensor3d normalized;           // X: every frame expressed in frame-0 coordinates
    TransformSequence transforms;  // one per frame; transforms[0] is the identity
    // Frames whose affine fit was degenerate and fell back to translation only.
    std::vector<Eigen::Index> degenerate_frames;
};

// Least-squares affine registration of every frame against frame 0. The fit
// minimizes ||[V0 1] A^T - V_i||_F over 3x4 maps A; the normalized tensor holds
// each frame pulled back through its map, so X_{::0} equals T_{::0} exactly and
// a pure rigid or affine animation normalizes to a frame-constant X.
//
// Degenerate geometry (fewer than four vertices, coplanar or collinear frame-0
// cloud, or a fitted frame map that collapses space) cannot be inverted; such
// frames fall back to a translation-only map (centroid displacement) and are
// reported in degenerate_frames rather than aborting the pipeline.
inline RigidMotionResult estimate_rigid_motion(const Tensor3d& t) {
    const auto [k, j, f] = t.dims();
    if (j != 3)
        throw DimensionError("estimate_rigid_motion: coordinate dimension must be 3, got " +
                             std::to_string(j));
    if (f < 1 || k < 1)
        throw DimensionError("estimate_rigid_motion: need at least one vertex and one frame");
    if (!t.all_finite())
        throw ArgumentError("estimate_rigid_motion: tensor contains non-finite values");

    RigidMotionResult result;
    result.normalized = Tensor3d(k, 3, f);
    result.transforms.assign(f, FrameTransform::identity());
    result.normalized.slice(0) = t.slice(0);

    Eigen::MatrixXd g(k, 4);
    g.leftCols<3>() = t.slice(0);
    g.col(3).setOnes();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
    const bool geometry_ok = k >= 4 && qr.rank() == 4;
    const Eigen::RowVector3d centroid0 = t.slice(0).colwise().mean();

    for (Eigen::Index i = 1; i < f; ++i) {
        const auto frame = t.slice(i);
        FrameTransform map;
        bool fallback = !geometry_ok;
        if (geometry_ok) {
            map.matrix = qr.solve(Eigen::MatrixXd(frame)).transpose();
            fallback = !map.invertible();
        }
        if (fallback) {
            map = FrameTransform::identity();
            map.matrix.col(3) = (frame.colwise().mean() - centroid0).transpose();
            result.degenerate_frames.push_back(i);
        }
        result.normalized.slice(i) = map.apply_inverse(frame);
        result.transforms[i] = map;
    }
    return result;
}

// Undoes the normalization: pushes every frame of x through its stored map.
// A singular linear block means the sequence cannot have come from a valid
// normalization, so it is rejected with the offending frame index.
inline Tensor3d apply_inverse_transforms(const Tensor3d& x, const TransformSequence& r) {
    const auto [k, j, f] = x.dims();
    if (j != 3)
        throw DimensionError("apply_inverse_transforms: coordinate dimension must be 3, got " +
                             std::to_string(j));
    if (static_cast<Eigen::Index>(r.size()) != f)
        throw DimensionError("apply_inverse_transforms: " + std::to_string(r.size()) +
                             " transforms for " + std::to_string(f) + " frames");
    Tensor3d t(k, 3, f);
    for (Eigen::Index i = 0; i < f; ++i) {
        if (!r[i].invertible())
            throw TransformError("apply_inverse_transforms: singular transform at frame " +
                                 std::to_string(i));
        t.slice(i) = r[i].apply(x.slice(i));
    }
    return t;
}

}  // namespace tanim
