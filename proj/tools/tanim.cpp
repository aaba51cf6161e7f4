// tanim: compress, inspect, and stress-test vertex-animation assets with the
// truncated Tucker codec and its PCA baseline.
//
// Exit codes: 0 success, 2 infeasible compression target, 3 I/O failure,
// 4 invalid input or flags, 1 anything unexpected.

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tanim/codec.hpp"
#include "tanim/sweep.hpp"
#include "tanim/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvalid = 4;

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const tanim::InfeasibleTargetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const tanim::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const tanim::Error& e) {  // validation, format, topology, ranks
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitUnexpected;
    }
}

std::vector<tanim::Metric> parse_metrics(const std::vector<std::string>& names) {
    std::vector<tanim::Metric> metrics;
    for (const auto& name : names) metrics.push_back(tanim::metric_from_name(name));
    return metrics;
}

std::vector<tanim::Strategy> parse_strategies(const std::vector<std::string>& names) {
    std::vector<tanim::Strategy> strategies;
    for (const auto& name : names) strategies.push_back(tanim::strategy_from_name(name));
    return strategies;
}

std::string format_real(double value) { return tanim::detail::format_real(value); }

void print_plan(const tanim::EncodeResult& result, const tanim::EncodeOptions& options) {
    std::cout << "v=" << result.plan.v << " f=" << result.plan.f << " vtf=" << result.plan.vtf
              << " strategy=" << tanim::strategy_name(result.plan.strategy)
              << " target_cr=" << format_real(result.plan.target_cr)
              << " achieved_cr=" << format_real(result.achieved_cr)
              << " achieved_ss=" << format_real(tanim::space_savings(result.achieved_cr))
              << " metric=" << tanim::metric_name(options.metric)
              << " error=" << format_real(result.achieved_error)
              << " ds=" << options.ds
              << " payload_bytes=" << tanim::payload_bytes(result.container) << "\n";
}

void write_csv(const std::string& csv, const std::string& output) {
    if (output.empty())
        std::cout << csv;
    else
        tanim::detail::write_file_bytes(output, csv);
}

struct SweepFlags {
    std::string input, output;
    std::vector<double> ss_grid;
    std::vector<std::string> strategies{"diagonal"};
    std::vector<std::string> metrics{"mse"};
    std::vector<std::string> methods{"hosvd"};
    double delta = 0.002;
    int samples = 5;
    int depth = 3;
    int ds = 8;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& flags, bool with_methods) {
    cmd->add_option("input", flags.input, "animation asset (directory, .manm)")->required();
    cmd->add_option("--ss", flags.ss_grid,
                    "space-savings targets in [0,100), strictly increasing")
        ->required()
        ->delimiter(',');
    cmd->add_option("--strategy", flags.strategies, "plan strategies (diagonal, iterative)")
        ->delimiter(',');
    cmd->add_option("--metrics", flags.metrics, "distortion metrics (mse, hausdorff, msdm)")
        ->delimiter(',');
    if (with_methods)
        cmd->add_option("--methods", flags.methods, "methods to sweep (hosvd, pca)")
            ->delimiter(',');
    cmd->add_option("--delta", flags.delta, "target-ratio tolerance");
    cmd->add_option("--samples", flags.samples, "iterative search: samples per level");
    cmd->add_option("--depth", flags.depth, "iterative search: recursion depth");
    cmd->add_option("--ds", flags.ds, "payload bytes per value (4 or 8)");
    cmd->add_option("--output", flags.output, "CSV destination (default: standard output)");
}

int run_sweep_command(const SweepFlags& flags, bool force_both_methods) {
    tanim::SweepSpec spec;
    spec.ss_grid = flags.ss_grid;
    spec.strategies = parse_strategies(flags.strategies);
    spec.metrics = parse_metrics(flags.metrics);
    spec.delta = flags.delta;
    spec.samples = flags.samples;
    spec.depth = flags.depth;
    spec.ds = flags.ds;
    if (force_both_methods) {
        spec.use_hosvd = true;
        spec.use_pca = true;
    } else {
        spec.use_hosvd = false;
        spec.use_pca = false;
        for (const auto& method : flags.methods) {
            if (method == "hosvd")
                spec.use_hosvd = true;
            else if (method == "pca")
                spec.use_pca = true;
            else
                throw tanim::ArgumentError("unknown method '" + method + "' (hosvd, pca)");
        }
    }
    const auto anim = tanim::load_animation(flags.input);
    const auto rows = tanim::run_sweep(anim, spec);
    write_csv(tanim::render_sweep_csv(rows), flags.output);
    int failed = 0;
    for (const auto& row : rows)
        if (row.failed) ++failed;
    if (failed > 0) std::cerr << failed << " sweep point(s) failed; see the error column\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated-Tucker codec for 3D vertex animations"};
    app.require_subcommand(1);

    // ---- compress ----------------------------------------------------------
    struct {
        std::string input, output, strategy = "diagonal", metric = "mse";
        double cr = 0.0, ss = 0.0;
        int ds = 4, samples = 5, depth = 3;
        double delta = 0.002;
        Eigen::Index rank_v = 0, rank_f = 0;
    } compress;
    auto* compress_cmd = app.add_subcommand("compress", "encode an animation to a container");
    compress_cmd->add_option("input", compress.input, "animation asset")->required();
    compress_cmd->add_option("output", compress.output, "container file to write")->required();
    auto* cr_opt = compress_cmd->add_option("--cr", compress.cr, "target compression ratio");
    auto* ss_opt = compress_cmd->add_option("--ss", compress.ss, "target space savings, percent");
    cr_opt->excludes(ss_opt);
    ss_opt->excludes(cr_opt);
    compress_cmd->add_option("--strategy", compress.strategy,
                             "diagonal, iterative, or explicit (needs --rank-v/--rank-f)");
    compress_cmd->add_option("--metric", compress.metric, "plan-selection metric");
    compress_cmd->add_option("--ds", compress.ds, "payload bytes per value (4 or 8)");
    compress_cmd->add_option("--delta", compress.delta, "target-ratio tolerance");
    compress_cmd->add_option("--samples", compress.samples, "iterative: samples per level");
    compress_cmd->add_option("--depth", compress.depth, "iterative: recursion depth");
    compress_cmd->add_option("--rank-v", compress.rank_v, "explicit vertex rank");
    compress_cmd->add_option("--rank-f", compress.rank_f, "explicit frame rank");
    compress_cmd->callback([&] {
        tanim::EncodeOptions options;
        if (*ss_opt)
            options.target_cr = 1.0 - compress.ss / 100.0;
        else if (*cr_opt)
            options.target_cr = compress.cr;
        else if (compress.rank_v == 0 && compress.rank_f == 0)
            throw tanim::ArgumentError("compress: give --cr, --ss, or explicit ranks");
        options.strategy = tanim::strategy_from_name(compress.strategy);
        options.metric = tanim::metric_from_name(compress.metric);
        options.ds = compress.ds;
        options.delta = compress.delta;
        options.samples = compress.samples;
        options.depth = compress.depth;
        options.rank_v = compress.rank_v;
        options.rank_f = compress.rank_f;
        const auto anim = tanim::load_animation(compress.input);
        const auto result = tanim::encode(anim, options);
        tanim::save_container(result.container, compress.output);
        print_plan(result, options);
        if (!result.degenerate_frames.empty())
            std::cerr << result.degenerate_frames.size()
                      << " frame(s) used a translation-only motion fit\n";
    });

    // ---- decompress --------------------------------------------------------
    struct {
        std::string input, output, connectivity;
    } decompress;
    auto* decompress_cmd =
        app.add_subcommand("decompress", "decode a container to a raw animation");
    decompress_cmd->add_option("input", decompress.input, "container file")->required();
    decompress_cmd->add_option("output", decompress.output, "raw animation to write")
        ->required();
    decompress_cmd->add_option("--connectivity-from", decompress.connectivity,
                               "asset whose edges are copied into the output");
    decompress_cmd->callback([&] {
        const auto container = tanim::load_container(decompress.input);
        tanim::AnimationSequence anim;
        anim.vertices = tanim::decode(container);
        anim.name = "decoded";
        if (!decompress.connectivity.empty())
            anim.edges = tanim::load_animation(decompress.connectivity).edges;
        tanim::save_raw_animation(anim, decompress.output);
        std::cout << "k=" << anim.vertices.dim(1) << " frames=" << anim.vertices.dim(3)
                  << " v=" << container.v << " f=" << container.f
                  << " edges=" << anim.edges.size() << " output=" << decompress.output << "\n";
    });

    // ---- evaluate ----------------------------------------------------------
    struct {
        std::string original, reconstructed;
        std::vector<std::string> metrics{"mse"};
    } evaluate;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "per-frame distortion between two assets");
    evaluate_cmd->add_option("original", evaluate.original, "reference asset")->required();
    evaluate_cmd
        ->add_option("reconstructed", evaluate.reconstructed, "asset or container to score")
        ->required();
    evaluate_cmd->add_option("--metrics", evaluate.metrics, "mse, hausdorff, msdm")
        ->delimiter(',');
    int evaluate_exit = kExitOk;
    evaluate_cmd->callback([&] {
        const auto original = tanim::load_animation(evaluate.original);
        tanim::Tensor3d reconstructed;
        try {
            reconstructed = tanim::decode(tanim::load_container(evaluate.reconstructed));
        } catch (const tanim::FormatError&) {
            reconstructed = tanim::load_animation(evaluate.reconstructed).vertices;
        }
        const auto out = tanim::render_evaluate_csv(original.vertices, reconstructed,
                                                    original.edges,
                                                    parse_metrics(evaluate.metrics));
        std::cout << out.csv;
        if (out.had_errors) {
            std::cerr << "one or more metrics failed; see the error rows\n";
            evaluate_exit = kExitInvalid;
        }
    });

    // ---- sweep / compare ---------------------------------------------------
    SweepFlags sweep_flags;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "rate-distortion rows over a space-savings grid");
    add_sweep_flags(sweep_cmd, sweep_flags, true);

    SweepFlags compare_flags;
    auto* compare_cmd =
        app.add_subcommand("compare", "sweep with both methods (hosvd and pca)");
    add_sweep_flags(compare_cmd, compare_flags, false);

    // ---- synth -------------------------------------------------------------
    struct {
        std::string kind = "rigid", output;
        Eigen::Index vertices = 100, frames = 20, rank_v = 4, rank_f = 3;
        double amplitude = 1.0;
        std::uint64_t seed = 1;
    } synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a deterministic test asset");
    synth_cmd->add_option("output", synth.output, "raw animation to write")->required();
    synth_cmd->add_option("--kind", synth.kind, "rigid, lowrank, bulge, or mixed");
    synth_cmd->add_option("--vertices", synth.vertices, "vertex count (>= 4)");
    synth_cmd->add_option("--frames", synth.frames, "frame count (>= 1)");
    synth_cmd->add_option("--rank-v", synth.rank_v, "vertex-mode rank (lowrank/mixed)");
    synth_cmd->add_option("--rank-f", synth.rank_f, "frame-mode rank (lowrank/mixed)");
    synth_cmd->add_option("--amplitude", synth.amplitude, "deformation scale");
    synth_cmd->add_option("--seed", synth.seed, "random seed");
    synth_cmd->callback([&] {
        tanim::SynthParams params;
        params.num_vertices = synth.vertices;
        params.num_frames = synth.frames;
        params.rank_v = synth.rank_v;
        params.rank_f = synth.rank_f;
        params.amplitude = synth.amplitude;
        params.seed = synth.seed;
        const auto anim = tanim::make_synthetic(tanim::synth_kind_from_name(synth.kind), params);
        tanim::save_raw_animation(anim, synth.output);
        std::cout << "kind=" << synth.kind << " k=" << params.num_vertices
                  << " frames=" << params.num_frames << " seed=" << synth.seed
                  << " edges=" << anim.edges.size() << " output=" << synth.output << "\n";
    });

    sweep_cmd->callback([&] { run_sweep_command(sweep_flags, false); });
    compare_cmd->callback([&] { run_sweep_command(compare_flags, true); });

    // subcommand callbacks run inside parse(), so the whole call sits under
    // the exit-code mapping
    return run_guarded([&]() -> int {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
            std::cerr << "error: " << e.get_name() << ": " << e.what() << "\n";
            return kExitInvalid;
        }
        return evaluate_exit;
    });
}
