#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tanim/errors.hpp"
#include "tanim/mesh_topology.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

enum class Metric { mse, hausdorff, msdm };

inline const char* metric_name(Metric m) {
    switch (m) {
        case Metric::mse: return "mse";
        case Metric::hausdorff: return "hausdorff";
        default: return "msdm";
    }
}

inline Metric metric_from_name(const std::string& name) {
    if (name == "mse") return Metric::mse;
    if (name == "hausdorff") return Metric::hausdorff;
    if (name == "msdm") return Metric::msdm;
    throw ArgumentError("unknown metric '" + name + "'");
}

enum class Aggregation { mean, max };

inline const char* aggregation_name(Aggregation a) {
    return a == Aggregation::mean ? "mean" : "max";
}

struct DistortionReport {
    Metric metric = Metric::mse;
    std::vector<double> per_frame;
    double aggregate = 0.0;
    Aggregation aggregation = Aggregation::mean;
};

namespace detail {

inline void require_same_animation_dims(const Tensor3d& a, const Tensor3d& b, const char* who) {
    if (a.dims() != b.dims())
        throw DimensionError(std::string(who) + ": tensors of shape " + std::to_string(a.dim(1)) +
                             "x" + std::to_string(a.dim(2)) + "x" + std::to_string(a.dim(3)) +
                             " and " + std::to_string(b.dim(1)) + "x" + std::to_string(b.dim(2)) +
                             "x" + std::to_string(b.dim(3)) + " are not comparable");
}

inline double mean_of(const std::vector<double>& values) {
    return values.empty() ? 0.0
                          : std::accumulate(values.begin(), values.end(), 0.0) /
                                double(values.size());
}

}  // namespace detail

// Mean over all K*J coordinates of squared per-coordinate differences, frame
// by frame; the animation aggregate averages the frames.
inline DistortionReport mse(const Tensor3d& original, const Tensor3d& reconstructed) {
    detail::require_same_animation_dims(original, reconstructed, "mse");
    DistortionReport report;
    report.metric = Metric::mse;
    report.aggregation = Aggregation::mean;
    const Eigen::Index frames = original.dim(3);
    const double coords = double(original.dim(1)) * double(original.dim(2));
    report.per_frame.reserve(std::size_t(frames));
    for (Eigen::Index i = 0; i < frames; ++i)
        report.per_frame.push_back(
            (original.slice(i) - reconstructed.slice(i)).squaredNorm() / coords);
    report.aggregate = detail::mean_of(report.per_frame);
    return report;
}

// Symmetric Hausdorff distance between two vertex point sets (they may have
// different sizes). The inner scan abandons a point as soon as some partner
// is provably closer than the running maximum, which never changes the value
// relative to the full quadratic scan: a maximizing point can only tie the
// running maximum, and ties do not trigger the early exit.
inline double hausdorff_distance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                 const Eigen::Ref<const Eigen::MatrixXd>& b) {
    if (a.rows() < 1 || b.rows() < 1)
        throw DimensionError("hausdorff_distance: point sets must be non-empty");
    if (a.cols() != b.cols())
        throw DimensionError("hausdorff_distance: point dimensionalities differ");
    double worst_sq = 0.0;
    const auto directed = [&](const Eigen::Ref<const Eigen::MatrixXd>& from,
                              const Eigen::Ref<const Eigen::MatrixXd>& to) {
        for (Eigen::Index i = 0; i < from.rows(); ++i) {
            double nearest_sq = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < to.rows(); ++j) {
                const double d_sq = (from.row(i) - to.row(j)).squaredNorm();
                if (d_sq < worst_sq) {
                    nearest_sq = d_sq;
                    break;
                }
                nearest_sq = std::min(nearest_sq, d_sq);
            }
            worst_sq = std::max(worst_sq, nearest_sq);
        }
    };
    directed(a, b);
    directed(b, a);
    return std::sqrt(worst_sq);
}

// Per-frame Hausdorff over an animation; the aggregate keeps the worst frame.
inline DistortionReport hausdorff(const Tensor3d& original, const Tensor3d& reconstructed) {
    detail::require_same_animation_dims(original, reconstructed, "hausdorff");
    DistortionReport report;
    report.metric = Metric::hausdorff;
    report.aggregation = Aggregation::max;
    const Eigen::Index frames = original.dim(3);
    report.per_frame.reserve(std::size_t(frames));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < frames; ++i) {
        report.per_frame.push_back(hausdorff_distance(original.slice(i), reconstructed.slice(i)));
        worst = std::max(worst, report.per_frame.back());
    }
    report.aggregate = worst;
    return report;
}

struct MsdmParams {
    int window_hops = 2;        // BFS radius of each vertex's local window
    double minkowski_power = 3.0;
    double weight_mean = 0.4;
    double weight_deviation = 0.4;
    double weight_structure = 0.2;
};

struct MsdmFrameStats {
    Eigen::Index windows_used = 0;
    Eigen::Index windows_excluded = 0;  // degenerate geometry in either mesh
};

namespace detail {

// Discrete curvature magnitude per vertex: distance to the 1-ring centroid,
// normalized by the squared mean incident edge length so the value scales as
// 1/length. NaN marks vertices whose neighborhood is empty or collapsed.
inline Eigen::VectorXd umbrella_curvature(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                          const std::vector<std::vector<std::uint32_t>>& adjacent) {
    const Eigen::Index n = points.rows();
    Eigen::VectorXd curvature =
        Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto& ring = adjacent[std::size_t(v)];
        if (ring.empty()) continue;
        Eigen::RowVector3d centroid = Eigen::RowVector3d::Zero();
        double mean_edge = 0.0;
        for (const std::uint32_t u : ring) {
            centroid += points.row(u);
            mean_edge += (points.row(v) - points.row(u)).norm();
        }
        centroid /= double(ring.size());
        mean_edge /= double(ring.size());
        if (mean_edge <= 0.0) continue;
        curvature[v] = (points.row(v) - centroid).norm() / (mean_edge * mean_edge);
    }
    return curvature;
}

inline std::vector<std::uint32_t> bfs_window(std::uint32_t center, int hops,
                                             const std::vector<std::vector<std::uint32_t>>& adjacent,
                                             std::vector<int>& visit_mark, int stamp) {
    std::vector<std::uint32_t> window{center};
    visit_mark[center] = stamp;
    std::size_t level_begin = 0;
    for (int hop = 0; hop < hops; ++hop) {
        const std::size_t level_end = window.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (const std::uint32_t u : adjacent[window[i]])
                if (visit_mark[u] != stamp) {
                    visit_mark[u] = stamp;
                    window.push_back(u);
                }
        level_begin = level_end;
    }
    return window;
}

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace detail

// Structural distortion between two frames sharing one edge set: curvature
// mean/deviation/covariance are compared per local window, window distances
// are combined by a Minkowski mean, and the result is clamped to [0,1].
// Windows touching degenerate geometry (isolated vertices, collapsed rings,
// fewer than two comparable vertices) are excluded and counted, never NaN.
inline double msdm_frame(const Eigen::Ref<const Eigen::MatrixXd>& original,
                         const Eigen::Ref<const Eigen::MatrixXd>& reconstructed,
                         const EdgeList& edges, const MsdmParams& params = {},
                         MsdmFrameStats* stats = nullptr) {
    if (original.rows() != reconstructed.rows())
        throw DimensionError("msdm_frame: vertex counts differ");
    if (original.cols() != 3 || reconstructed.cols() != 3)
        throw DimensionError("msdm_frame: vertices must be 3-dimensional");
    if (edges.empty())
        throw TopologyError("msdm_frame: curvature needs connectivity, got an empty edge set");
    if (params.window_hops < 1) throw ArgumentError("msdm_frame: window_hops must be >= 1");
    if (!(params.minkowski_power >= 1.0))
        throw ArgumentError("msdm_frame: minkowski_power must be >= 1");

    const Eigen::Index n = original.rows();
    const auto adjacent = adjacency_lists(canonical_edges(edges, n), n);
    const Eigen::VectorXd kappa_a = detail::umbrella_curvature(original, adjacent);
    const Eigen::VectorXd kappa_b = detail::umbrella_curvature(reconstructed, adjacent);

    constexpr double eps = 1e-30;
    const double p = params.minkowski_power;
    double sum_pow = 0.0;
    Eigen::Index used = 0, excluded = 0;
    std::vector<int> visit_mark(std::size_t(n), -1);
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto window = detail::bfs_window(std::uint32_t(v), params.window_hops, adjacent,
                                               visit_mark, int(v));
        double sa = 0, sb = 0;
        Eigen::Index m = 0;
        bool degenerate = false;
        for (const std::uint32_t u : window) {
            if (std::isnan(kappa_a[u]) || std::isnan(kappa_b[u])) {
                degenerate = true;
                break;
            }
            sa += kappa_a[u];
            sb += kappa_b[u];
            ++m;
        }
        if (degenerate || m < 2) {
            ++excluded;
            continue;
        }
        const double mu_a = sa / double(m), mu_b = sb / double(m);
        // two-pass moments: variances stay non-negative and identical inputs
        // cancel exactly, so equal meshes score a hard zero
        double var_a = 0, var_b = 0, cov = 0;
        for (const std::uint32_t u : window) {
            const double da = kappa_a[u] - mu_a, db = kappa_b[u] - mu_b;
            var_a += da * da;
            var_b += db * db;
            cov += da * db;
        }
        var_a /= double(m);
        var_b /= double(m);
        cov /= double(m);
        const double sigma_a = std::sqrt(var_a), sigma_b = std::sqrt(var_b);
        const double sigma_product = std::sqrt(var_a * var_b);
        const double l_mean = detail::clamp01(std::abs(mu_a - mu_b) /
                                              (std::max(mu_a, mu_b) + eps));
        const double l_dev = detail::clamp01(std::abs(sigma_a - sigma_b) /
                                             (std::max(sigma_a, sigma_b) + eps));
        const double l_struct = detail::clamp01(std::abs(sigma_product - cov) /
                                                (sigma_product + eps));
        const double window_distance =
            std::pow(params.weight_mean * std::pow(l_mean, p) +
                         params.weight_deviation * std::pow(l_dev, p) +
                         params.weight_structure * std::pow(l_struct, p),
                     1.0 / p);
        sum_pow += std::pow(window_distance, p);
        ++used;
    }
    if (stats) {
        stats->windows_used = used;
        stats->windows_excluded = excluded;
    }
    if (used == 0) return 0.0;  // nothing comparable; stats record why
    return detail::clamp01(std::pow(sum_pow / double(used), 1.0 / p));
}

// Per-frame structural distortion; the aggregate averages the frames.
inline DistortionReport msdm(const Tensor3d& original, const Tensor3d& reconstructed,
                             const EdgeList& edges, const MsdmParams& params = {},
                             std::vector<MsdmFrameStats>* stats = nullptr) {
    detail::require_same_animation_dims(original, reconstructed, "msdm");
    DistortionReport report;
    report.metric = Metric::msdm;
    report.aggregation = Aggregation::mean;
    const Eigen::Index frames = original.dim(3);
    report.per_frame.reserve(std::size_t(frames));
    if (stats) stats->assign(std::size_t(frames), {});
    for (Eigen::Index i = 0; i < frames; ++i) {
        MsdmFrameStats frame_stats;
        report.per_frame.push_back(
            msdm_frame(original.slice(i), reconstructed.slice(i), edges, params, &frame_stats));
        if (stats) (*stats)[std::size_t(i)] = frame_stats;
    }
    report.aggregate = detail::mean_of(report.per_frame);
    return report;
}

// Uniform entry point used by the codec and the command-line tools; the edge
// set is only consulted by the structural metric.
inline DistortionReport evaluate_metric(Metric metric, const Tensor3d& original,
                                        const Tensor3d& reconstructed, const EdgeList& edges) {
    switch (metric) {
        case Metric::mse: return mse(original, reconstructed);
        case Metric::hausdorff: return hausdorff(original, reconstructed);
        default: return msdm(original, reconstructed, edges);
    }
}

}  // namespace tanim
