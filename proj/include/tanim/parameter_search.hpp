#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tanim/errors.hpp"

namespace tanim {

enum class Strategy { diagonal, iterative, explicit_ranks };

inline const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::diagonal: return "diagonal";
        case Strategy::iterative: return "iterative";
        default: return "explicit";
    }
}

inline Strategy strategy_from_name(const std::string& name) {
    if (name == "diagonal") return Strategy::diagonal;
    if (name == "iterative") return Strategy::iterative;
    if (name == "explicit") return Strategy::explicit_ranks;
    throw ArgumentError("unknown strategy '" + name + "'");
}

struct CompressionPlan {
    Eigen::Index v = 0;  // retained mode-1 (vertex) components
    Eigen::Index f = 0;  // retained mode-3 (frame) components
    double vtf = 0.0;    // v/f
    double target_cr = 0.0;
    Strategy strategy = Strategy::diagonal;
};

struct Candidate {
    Eigen::Index v = 0;
    Eigen::Index f = 0;
    double cr = 0.0;
};

struct CandidateList {
    std::vector<Candidate> pairs;  // at most one per dominant-mode value, sorted by it
    Eigen::Index num_vertices = 0;
    Eigen::Index num_frames = 0;
    double target_cr = 0.0;
    double delta = 0.0;
    bool dominant_is_v = true;  // vertices dominate when K > F
};

// Fraction of the dense animation kept by a rank-(v,3,f) model: factors of
// v*K, 3*3 and f*F entries plus a v*3*f core, against K*F*3 raw entries. The
// element width cancels, so the ratio is width-independent.
inline double compression_ratio(Eigen::Index v, Eigen::Index f, Eigen::Index num_vertices,
                                Eigen::Index num_frames, Eigen::Index j = 3) {
    if (num_vertices < 1 || num_frames < 1 || j < 1)
        throw DimensionError("compression_ratio: dimensions must be >= 1");
    if (v < 1 || v > num_vertices)
        throw RankError("compression_ratio: v = " + std::to_string(v) + " outside [1, " +
                        std::to_string(num_vertices) + "]");
    if (f < 1 || f > num_frames)
        throw RankError("compression_ratio: f = " + std::to_string(f) + " outside [1, " +
                        std::to_string(num_frames) + "]");
    const double stored = double(v * num_vertices) + double(j * j) + double(f * num_frames) +
                          double(v * j * f);
    return stored / (double(num_vertices) * double(num_frames) * double(j));
}

inline double space_savings(double cr) { return (1.0 - cr) * 100.0; }

// One candidate pair per dominant-mode value: the other coordinate is chosen
// minimizing |ratio - target| (ties toward the smaller coordinate, found by
// bisection since the ratio is strictly increasing in each rank), and the pair
// is kept only when that minimum lies within delta of the target. An empty
// list means the target is unreachable on this grid.
inline CandidateList enumerate_candidates(Eigen::Index num_vertices, Eigen::Index num_frames,
                                          double target_cr, double delta) {
    if (num_vertices < 1 || num_frames < 1)
        throw DimensionError("enumerate_candidates: dimensions must be >= 1");
    if (!(target_cr > 0.0) || target_cr > 1.0)
        throw ArgumentError("enumerate_candidates: target compression ratio must be in (0, 1], got " +
                            std::to_string(target_cr));
    if (!(delta >= 0.0))
        throw ArgumentError("enumerate_candidates: delta must be non-negative");

    CandidateList list;
    list.num_vertices = num_vertices;
    list.num_frames = num_frames;
    list.target_cr = target_cr;
    list.delta = delta;
    list.dominant_is_v = num_vertices > num_frames;

    const Eigen::Index dominant_max = list.dominant_is_v ? num_vertices : num_frames;
    const Eigen::Index other_max = list.dominant_is_v ? num_frames : num_vertices;
    const auto ratio_at = [&](Eigen::Index dominant, Eigen::Index other) {
        const Eigen::Index v = list.dominant_is_v ? dominant : other;
        const Eigen::Index f = list.dominant_is_v ? other : dominant;
        return compression_ratio(v, f, num_vertices, num_frames);
    };

    for (Eigen::Index d = 1; d <= dominant_max; ++d) {
        // smallest `other` whose ratio reaches the target
        Eigen::Index lo = 1, hi = other_max + 1;
        while (lo < hi) {
            const Eigen::Index mid = lo + (hi - lo) / 2;
            if (ratio_at(d, mid) >= target_cr) hi = mid;
            else lo = mid + 1;
        }
        Eigen::Index best = std::min(lo, other_max);
        if (lo > 1) {
            const double below = std::abs(ratio_at(d, lo - 1) - target_cr);
            const double at = std::abs(ratio_at(d, best) - target_cr);
            if (below <= at) best = lo - 1;
        }
        const double achieved = ratio_at(d, best);
        if (std::abs(achieved - target_cr) <= delta) {
            const Eigen::Index v = list.dominant_is_v ? d : best;
            const Eigen::Index f = list.dominant_is_v ? best : d;
            list.pairs.push_back({v, f, achieved});
        }
    }
    return list;
}

// Picks the candidate whose retained fractions are most balanced across the
// vertex and frame modes: minimizes |v/K - f/F|, breaking ties by residual to
// the target, then by smaller v, then smaller f. Costs no reconstructions.
inline CompressionPlan diagonal_plan(const CandidateList& candidates) {
    if (candidates.pairs.empty())
        throw InfeasibleTargetError(
            "diagonal_plan: no rank pair reaches the target compression ratio within delta");
    const double k = double(candidates.num_vertices);
    const double frames = double(candidates.num_frames);
    const Candidate* best = nullptr;
    double best_score = 0.0, best_resid = 0.0;
    for (const auto& c : candidates.pairs) {
        const double score = std::abs(double(c.v) / k - double(c.f) / frames);
        const double resid = std::abs(c.cr - candidates.target_cr);
        const bool take =
            best == nullptr || score < best_score ||
            (score == best_score &&
             (resid < best_resid ||
              (resid == best_resid && (c.v < best->v || (c.v == best->v && c.f < best->f)))));
        if (take) {
            best = &c;
            best_score = score;
            best_resid = resid;
        }
    }
    return {best->v, best->f, double(best->v) / double(best->f), candidates.target_cr,
            Strategy::diagonal};
}

struct IterativeDiagnostics {
    double best_error = 0.0;
    std::size_t evaluations = 0;
};

// Coarse-to-fine search over the candidate list: samples `samples` evenly
// spaced candidates, then recurses (up to `depth` times) into the bracket
// around the sampled minimizer. A bracket no wider than the sample count is
// evaluated exhaustively, and the final level spends its budget on whatever
// the bracket still lacks when that fits — the cache already holds the
// bracket's endpoints and midpoint, so modest lists get the true minimum.
// Ties resolve toward the lower index, so a constant error profile returns
// the first candidate. error_fn is invoked at most samples * (depth + 1)
// times.
inline CompressionPlan iterative_plan(const CandidateList& candidates,
                                      const std::function<double(Eigen::Index, Eigen::Index)>& error_fn,
                                      int samples = 5, int depth = 3,
                                      IterativeDiagnostics* diagnostics = nullptr) {
    if (candidates.pairs.empty())
        throw InfeasibleTargetError(
            "iterative_plan: no rank pair reaches the target compression ratio within delta");
    if (samples < 3) throw ArgumentError("iterative_plan: need at least three samples per level");
    if (depth < 1) throw ArgumentError("iterative_plan: depth must be at least 1");
    if (!error_fn) throw ArgumentError("iterative_plan: error_fn must be callable");

    std::map<std::size_t, double> cache;
    const auto evaluate = [&](std::size_t i) {
        const auto found = cache.find(i);
        if (found != cache.end()) return found->second;
        const auto& c = candidates.pairs[i];
        const double value = error_fn(c.v, c.f);
        cache.emplace(i, value);
        return value;
    };
    // strict improvement only, so earlier (lower) indices win ties
    const auto better = [](double a, double b) {
        if (std::isnan(a)) return false;
        if (std::isnan(b)) return true;
        return a < b;
    };

    std::size_t lo = 0, hi = candidates.pairs.size() - 1;
    for (int level = 0; ; ++level) {
        const std::size_t width = hi - lo + 1;
        const bool last = level == depth || width <= std::size_t(samples);
        std::vector<std::size_t> picked;
        if (width <= std::size_t(samples)) {
            for (std::size_t i = lo; i <= hi; ++i) picked.push_back(i);
        } else if (last) {
            for (std::size_t i = lo; i <= hi; ++i)
                if (!cache.count(i)) picked.push_back(i);
            if (picked.size() > std::size_t(samples)) picked.clear();
        }
        if (picked.empty() && !(last && width <= std::size_t(samples))) {
            for (int s = 0; s < samples; ++s)
                picked.push_back(lo + std::size_t(std::llround(double(s) * double(hi - lo) /
                                                               double(samples - 1))));
        }
        for (const std::size_t i : picked) evaluate(i);
        if (last) break;
        std::size_t level_best = picked.front();
        double level_best_value = cache.at(level_best);
        for (const std::size_t i : picked) {
            if (better(cache.at(i), level_best_value)) {
                level_best = i;
                level_best_value = cache.at(i);
            }
        }
        std::size_t pos = 0;
        while (picked[pos] != level_best) ++pos;
        const std::size_t next_lo = picked[pos == 0 ? 0 : pos - 1];
        const std::size_t next_hi = picked[std::min(pos + 1, picked.size() - 1)];
        if (next_lo == lo && next_hi == hi) break;
        lo = next_lo;
        hi = next_hi;
    }

    std::size_t best = cache.begin()->first;
    double best_value = cache.begin()->second;
    for (const auto& [i, value] : cache)
        if (better(value, best_value)) {
            best = i;
            best_value = value;
        }
    if (diagnostics) {
        diagnostics->best_error = best_value;
        diagnostics->evaluations = cache.size();
    }
    const auto& c = candidates.pairs[best];
    return {c.v, c.f, double(c.v) / double(c.f), candidates.target_cr, Strategy::iterative};
}

}  // namespace tanim
