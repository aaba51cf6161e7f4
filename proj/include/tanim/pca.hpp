#pragma once

#include <string>

#include <Eigen/Dense>

#include "tanim/errors.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

// Keyframe model: each animation frame is the mean frame plus a combination
// of `kept` principal frame-shapes. Components live in flattened frame space
// (length K*J, index k + K*j), matching a frame slice's memory order.
struct PcaModel {
    Eigen::MatrixXd components;   // (K*J) x kept, orthonormal columns
    Eigen::MatrixXd coefficients; // F x kept
    Eigen::VectorXd mean;         // K*J
    Eigen::Index kept = 0;
    Eigen::VectorXd eigenvalues;  // kept, non-increasing; diagnostic only
};

namespace detail {

// frames-as-rows view of the animation: F x (K*J)
inline Eigen::MatrixXd frame_matrix(const Tensor3d& x) {
    const Eigen::Index k = x.dim(1), j = x.dim(2), frames = x.dim(3);
    Eigen::MatrixXd d(frames, k * j);
    for (Eigen::Index i = 0; i < frames; ++i)
        d.row(i) = Eigen::Map<const Eigen::VectorXd>(x.slice(i).data(), k * j);
    return d;
}

}  // namespace detail

inline PcaModel pca_compress(const Tensor3d& x, Eigen::Index p_prime) {
    const Eigen::Index k = x.dim(1), j = x.dim(2), frames = x.dim(3);
    const Eigen::Index max_kept = std::min(frames, k * j);
    if (p_prime < 1 || p_prime > max_kept)
        throw RankError("pca_compress: p' = " + std::to_string(p_prime) + " outside [1, " +
                        std::to_string(max_kept) + "]");
    if (!x.all_finite()) throw ArgumentError("pca_compress: input has non-finite values");

    const Eigen::MatrixXd d = detail::frame_matrix(x);
    PcaModel model;
    model.kept = p_prime;
    model.mean = d.colwise().mean();
    const Eigen::MatrixXd centered = d.rowwise() - model.mean.transpose();
    if (centered.norm() == 0.0) {
        // every frame equals the mean; any orthonormal completion will do
        model.components = Eigen::MatrixXd::Identity(k * j, p_prime);
        model.coefficients = Eigen::MatrixXd::Zero(frames, p_prime);
        model.eigenvalues = Eigen::VectorXd::Zero(p_prime);
        return model;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw DecompositionError("pca_compress: singular value decomposition did not converge");
    model.components = svd.matrixV().leftCols(p_prime);
    model.coefficients = centered * model.components;
    model.eigenvalues = svd.singularValues().head(p_prime).array().square();
    return model;
}

inline Tensor3d pca_reconstruct(const PcaModel& model, Eigen::Index k, Eigen::Index j,
                                Eigen::Index frames) {
    if (k < 1 || j < 1 || frames < 1)
        throw DimensionError("pca_reconstruct: dimensions must be >= 1");
    if (model.mean.size() != k * j)
        throw DimensionError("pca_reconstruct: mean length " + std::to_string(model.mean.size()) +
                             " does not match K*J = " + std::to_string(k * j));
    if (model.components.rows() != k * j || model.components.cols() != model.kept ||
        model.coefficients.cols() != model.kept)
        throw DimensionError("pca_reconstruct: model matrices disagree with kept = " +
                             std::to_string(model.kept));
    if (model.coefficients.rows() != frames)
        throw DimensionError("pca_reconstruct: model holds " +
                             std::to_string(model.coefficients.rows()) + " frames, expected " +
                             std::to_string(frames));
    Tensor3d out(k, j, frames);
    const Eigen::MatrixXd rows =
        (model.coefficients * model.components.transpose()).rowwise() + model.mean.transpose();
    for (Eigen::Index i = 0; i < frames; ++i) {
        const Eigen::VectorXd row = rows.row(i);
        out.slice(i) = Eigen::Map<const Eigen::MatrixXd>(row.data(), k, j);
    }
    return out;
}

// Storage for p' frame-shape components plus p' coefficients per frame,
// against the dense animation. The mean frame (K*J values) is accounted
// separately by the container, not in this ratio.
inline double pca_compression_ratio(Eigen::Index p_prime, Eigen::Index k, Eigen::Index frames,
                                    Eigen::Index j = 3) {
    if (k < 1 || frames < 1 || j < 1)
        throw DimensionError("pca_compression_ratio: dimensions must be >= 1");
    if (p_prime < 1) throw RankError("pca_compression_ratio: p' must be >= 1");
    return double((k * j + frames) * p_prime) / (double(k) * double(frames) * double(j));
}

}  // namespace tanim
