#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "tanim/animation.hpp"
#include "tanim/container.hpp"
#include "tanim/errors.hpp"
#include "tanim/hosvd.hpp"
#include "tanim/metrics.hpp"
#include "tanim/parameter_search.hpp"
#include "tanim/rigid_motion.hpp"
#include "tanim/tensor3.hpp"

namespace tanim {

struct EncodeOptions {
    double target_cr = 0.1;
    Strategy strategy = Strategy::diagonal;
    Metric metric = Metric::mse;  // drives plan search and the reported error
    int ds = 4;
    double delta = 0.002;  // accepted |achieved - target| band
    int samples = 5;       // per refinement level of the iterative search
    int depth = 3;         // refinement levels after the initial sampling
    // both > 0 pins the ranks directly and skips the search
    Eigen::Index rank_v = 0;
    Eigen::Index rank_f = 0;
};

struct EncodeResult {
    CompressedAnimation container;
    CompressionPlan plan;
    double achieved_cr = 0.0;     // analytic ratio of the chosen ranks
    double achieved_error = 0.0;  // chosen metric, original vs decoded
    std::vector<Eigen::Index> degenerate_frames;  // rigid fit fell back
};

// Rebuild the animation: expand the truncated Tucker model of the normalized
// tensor, then move every frame back with its stored rigid map.
inline Tensor3d decode(const CompressedAnimation& c) {
    detail::validate_container(c);
    TruncatedTucker<double> model;
    model.core = c.core;
    model.factors = {c.u1, Eigen::MatrixXd(c.u2), c.u3};
    model.ranks = {c.v, 3, c.f};
    model.original_dims = {c.k, 3, c.frames};
    Tensor3d normalized = reconstruct(model);
    return apply_inverse_transforms(normalized, c.transforms);
}

inline EncodeResult encode(const AnimationSequence& anim, const EncodeOptions& options = {}) {
    validate_animation(anim);
    const Eigen::Index k = anim.vertices.dim(1);
    const Eigen::Index frames = anim.vertices.dim(3);
    if (k < 4)
        throw DimensionError("encode: need at least 4 vertices for the rigid fit, got " +
                             std::to_string(k));
    if (options.ds != 4 && options.ds != 8)
        throw ArgumentError("encode: element width must be 4 or 8 bytes");

    const RigidMotionResult rigid = estimate_rigid_motion(anim.vertices);
    const TuckerOperator<double> op = hosvd(rigid.normalized);

    CompressionPlan plan;
    const bool explicit_ranks = options.rank_v > 0 || options.rank_f > 0;
    if (explicit_ranks) {
        if (options.rank_v < 1 || options.rank_v > k)
            throw RankError("encode: vertex rank " + std::to_string(options.rank_v) +
                            " outside [1, " + std::to_string(k) + "]");
        if (options.rank_f < 1 || options.rank_f > frames)
            throw RankError("encode: frame rank " + std::to_string(options.rank_f) +
                            " outside [1, " + std::to_string(frames) + "]");
        plan = {options.rank_v, options.rank_f, double(options.rank_v) / double(options.rank_f),
                compression_ratio(options.rank_v, options.rank_f, k, frames),
                Strategy::explicit_ranks};
    } else {
        const auto candidates =
            enumerate_candidates(k, frames, options.target_cr, options.delta);
        if (options.strategy == Strategy::diagonal) {
            plan = diagonal_plan(candidates);
        } else if (options.strategy == Strategy::iterative) {
            const auto error_at = [&](Eigen::Index v, Eigen::Index f) {
                const auto trial = truncate(op, {v, 3, f});
                Tensor3d decoded = reconstruct(trial);
                decoded = apply_inverse_transforms(decoded, rigid.transforms);
                return evaluate_metric(options.metric, anim.vertices, decoded, anim.edges)
                    .aggregate;
            };
            plan = iterative_plan(candidates, error_at, options.samples, options.depth);
        } else {
            throw ArgumentError("encode: pass rank_v/rank_f for explicit-rank encoding");
        }
    }

    const auto model = truncate(op, {plan.v, 3, plan.f});
    EncodeResult result;
    result.container.k = k;
    result.container.frames = frames;
    result.container.v = plan.v;
    result.container.f = plan.f;
    result.container.ds = options.ds;
    result.container.strategy = plan.strategy;
    result.container.metric = options.metric;
    result.container.u1 = model.factors[0];
    result.container.u2 = model.factors[1];
    result.container.u3 = model.factors[2];
    result.container.core = model.core;
    result.container.transforms = rigid.transforms;
    quantize_payload(result.container);

    result.plan = plan;
    result.achieved_cr = compression_ratio(plan.v, plan.f, k, frames);
    result.degenerate_frames = rigid.degenerate_frames;
    result.achieved_error =
        evaluate_metric(options.metric, anim.vertices, decode(result.container), anim.edges)
            .aggregate;
    return result;
}

}  // namespace tanim
