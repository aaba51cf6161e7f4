#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tanim/codec.hpp"
#include "tanim/errors.hpp"
#include "tanim/metrics.hpp"
#include "tanim/pca.hpp"
#include "tanim/parameter_search.hpp"

// Rate-distortion sweeps and the CSV surfaces behind the command-line tools.
// Both schemas are versioned: the first line names the schema, the second is
// the column header, everything after is data. Reals are printed with %.17g so
// they parse back to the exact double.
namespace tanim {

namespace detail {

inline std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

// messages land in a CSV field; keep them one-token-per-cell parseable
inline std::string csv_sanitize(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n') c = ';';
    return text;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// evaluate: per-frame metric rows plus one aggregate row per metric.

inline constexpr const char* kEvaluateCsvSchema = "# tanim-evaluate-v1";
inline constexpr const char* kEvaluateCsvHeader = "metric,frame,value";

struct EvaluateOutput {
    std::string csv;
    bool had_errors = false;
};

inline EvaluateOutput render_evaluate_csv(const Tensor3d& original, const Tensor3d& reconstructed,
                                          const EdgeList& edges,
                                          const std::vector<Metric>& metrics) {
    if (metrics.empty()) throw ArgumentError("render_evaluate_csv: no metrics requested");
    EvaluateOutput out;
    out.csv = std::string(kEvaluateCsvSchema) + "\n" + kEvaluateCsvHeader + "\n";
    for (const Metric metric : metrics) {
        try {
            const DistortionReport report =
                evaluate_metric(metric, original, reconstructed, edges);
            for (std::size_t f = 0; f < report.per_frame.size(); ++f)
                out.csv += std::string(metric_name(metric)) + "," + std::to_string(f) + "," +
                           detail::format_real(report.per_frame[f]) + "\n";
            out.csv += std::string(metric_name(metric)) + ",aggregate," +
                       detail::format_real(report.aggregate) + "\n";
        } catch (const Error& e) {
            out.csv += std::string(metric_name(metric)) + ",error," +
                       detail::csv_sanitize(e.what()) + "\n";
            out.had_errors = true;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// sweep: one reconstruction per (method, strategy, target), one row per metric.

inline constexpr const char* kSweepCsvSchema = "# tanim-sweep-v1";
inline constexpr const char* kSweepCsvHeader =
    "method,strategy,target_ss,achieved_ss,v,f,metric,value,error";

struct SweepSpec {
    std::vector<double> ss_grid;                          // percentages, strictly increasing
    std::vector<Strategy> strategies{Strategy::diagonal};
    std::vector<Metric> metrics{Metric::mse};
    bool use_hosvd = true;
    bool use_pca = false;
    double delta = 0.002;
    int samples = 5;
    int depth = 3;
    int ds = 8;  // curves describe rank truncation, so default to lossless storage
};

struct SweepRow {
    std::string method;    // "hosvd" or "pca"
    std::string strategy;  // plan strategy, or "-" for pca
    double target_ss = 0.0;
    double achieved_ss = 0.0;  // empty in CSV when the point failed
    Eigen::Index v = 0;        // pca rows: 0
    Eigen::Index f = 0;        // pca rows: number of kept components
    std::string metric;        // "-" on a failed point
    double value = 0.0;
    std::string error;  // empty on success
    bool failed = false;
};

inline void validate_sweep_spec(const SweepSpec& spec) {
    if (spec.ss_grid.empty()) throw ArgumentError("sweep: empty target grid");
    for (std::size_t i = 0; i < spec.ss_grid.size(); ++i) {
        if (!(spec.ss_grid[i] >= 0.0) || !(spec.ss_grid[i] < 100.0))
            throw ArgumentError("sweep: space-savings targets must lie in [0, 100)");
        if (i > 0 && !(spec.ss_grid[i] > spec.ss_grid[i - 1]))
            throw ArgumentError("sweep: target grid must be strictly increasing");
    }
    if (!spec.use_hosvd && !spec.use_pca) throw ArgumentError("sweep: no methods selected");
    if (spec.use_hosvd && spec.strategies.empty())
        throw ArgumentError("sweep: no strategies selected");
    if (spec.metrics.empty()) throw ArgumentError("sweep: no metrics selected");
}

namespace detail {

inline Eigen::Index pca_components_for_target(double target_cr, Eigen::Index k, Eigen::Index j,
                                              Eigen::Index frames) {
    const Eigen::Index max_kept = std::min(frames, k * j);
    const double ideal = target_cr * double(k * frames * j) / double(k * j + frames);
    Eigen::Index lo = Eigen::Index(std::floor(ideal));
    lo = std::max(Eigen::Index(1), std::min(lo, max_kept));
    Eigen::Index hi = std::max(Eigen::Index(1), std::min(lo + 1, max_kept));
    const auto residual = [&](Eigen::Index p) {
        return std::abs(pca_compression_ratio(p, k, frames) - target_cr);
    };
    return residual(lo) <= residual(hi) ? lo : hi;  // ties keep the smaller
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const AnimationSequence& anim, const SweepSpec& spec) {
    validate_sweep_spec(spec);
    std::vector<SweepRow> rows;
    const auto emit_failure = [&rows](const std::string& method, const std::string& strategy,
                                      double target_ss, const Error& e) {
        SweepRow row;
        row.method = method;
        row.strategy = strategy;
        row.target_ss = target_ss;
        row.metric = "-";
        row.error = detail::csv_sanitize(e.what());
        row.failed = true;
        rows.push_back(row);
    };
    const auto emit_metrics = [&](SweepRow base, const Tensor3d& reconstructed) {
        for (const Metric metric : spec.metrics) {
            base.metric = metric_name(metric);
            base.value =
                evaluate_metric(metric, anim.vertices, reconstructed, anim.edges).aggregate;
            rows.push_back(base);
        }
    };

    for (const double target_ss : spec.ss_grid) {
        const double target_cr = 1.0 - target_ss / 100.0;
        if (spec.use_hosvd) {
            for (const Strategy strategy : spec.strategies) {
                EncodeOptions options;
                options.target_cr = target_cr;
                options.strategy = strategy;
                options.metric = spec.metrics.front();
                options.ds = spec.ds;
                options.delta = spec.delta;
                options.samples = spec.samples;
                options.depth = spec.depth;
                try {
                    const EncodeResult result = encode(anim, options);
                    SweepRow base;
                    base.method = "hosvd";
                    base.strategy = strategy_name(strategy);
                    base.target_ss = target_ss;
                    base.achieved_ss = space_savings(result.achieved_cr);
                    base.v = result.plan.v;
                    base.f = result.plan.f;
                    emit_metrics(base, decode(result.container));
                } catch (const Error& e) {
                    emit_failure("hosvd", strategy_name(strategy), target_ss, e);
                }
            }
        }
        if (spec.use_pca) {
            const Eigen::Index k = anim.vertices.dim(1), frames = anim.vertices.dim(3);
            try {
                const Eigen::Index kept =
                    detail::pca_components_for_target(target_cr, k, 3, frames);
                const PcaModel model = pca_compress(anim.vertices, kept);
                SweepRow base;
                base.method = "pca";
                base.strategy = "-";
                base.target_ss = target_ss;
                base.achieved_ss = space_savings(pca_compression_ratio(kept, k, frames));
                base.v = 0;
                base.f = kept;
                emit_metrics(base, pca_reconstruct(model, k, 3, frames));
            } catch (const Error& e) {
                emit_failure("pca", "-", target_ss, e);
            }
        }
    }
    return rows;
}

inline std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string csv = std::string(kSweepCsvSchema) + "\n" + kSweepCsvHeader + "\n";
    for (const SweepRow& row : rows) {
        csv += row.method + "," + row.strategy + "," + detail::format_real(row.target_ss) + ",";
        if (row.failed) {
            csv += ",,,-,," + row.error + "\n";
        } else {
            csv += detail::format_real(row.achieved_ss) + "," + std::to_string(row.v) + "," +
                   std::to_string(row.f) + "," + row.metric + "," +
                   detail::format_real(row.value) + ",\n";
        }
    }
    return csv;
}

}  // namespace tanim
