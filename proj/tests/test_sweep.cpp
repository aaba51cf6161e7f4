#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "tanim/sweep.hpp"
#include "tanim/synth.hpp"
#include "test_util.hpp"

using Eigen::Index;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::vector<std::string> csv_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(csv);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

tanim::AnimationSequence known_rank_asset() {
    tanim::SynthParams params;
    params.num_vertices = 36;
    params.num_frames = 18;
    params.rank_v = 4;
    params.rank_f = 3;
    params.amplitude = 1.0;
    params.seed = 42;
    return tanim::make_synthetic(tanim::SynthKind::lowrank, params);
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("evaluate csv is frozen byte for byte") {
    tanim::Tensor3d original(4, 3, 2);
    original.vec().setZero();
    auto place = [&](Index v, double x, double y) {
        for (Index f = 0; f < 2; ++f) {
            original(v, 0, f) = x;
            original(v, 1, f) = y;
        }
    };
    place(0, 0, 0);
    place(1, 2, 0);
    place(2, 0, 2);
    place(3, 2, 2);
    tanim::Tensor3d moved = original;
    moved(0, 0, 1) += 0.5;

    const auto out = tanim::render_evaluate_csv(original, moved, {{0, 1}, {2, 3}},
                                                {tanim::Metric::mse, tanim::Metric::hausdorff});
    CHECK_FALSE(out.had_errors);
    CHECK(out.csv ==
          "# tanim-evaluate-v1\n"
          "metric,frame,value\n"
          "mse,0,0\n"
          "mse,1,0.020833333333333332\n"
          "mse,aggregate,0.010416666666666666\n"
          "hausdorff,0,0\n"
          "hausdorff,1,0.5\n"
          "hausdorff,aggregate,0.5\n");
}

TEST_CASE("evaluate records a metric failure as an error row") {
    tanim::Tensor3d t(5, 3, 1);
    t.vec().setRandom();
    const auto out = tanim::render_evaluate_csv(t, t, {}, {tanim::Metric::msdm});
    CHECK(out.had_errors);
    CHECK(out.csv ==
          "# tanim-evaluate-v1\n"
          "metric,frame,value\n"
          "msdm,error,msdm_frame: curvature needs connectivity; got an empty edge set\n");
}

TEST_CASE("sweep csv schema is pinned and rows are rectangular") {
    const auto anim = known_rank_asset();
    tanim::SweepSpec spec;
    spec.ss_grid = {50.0, 70.0, 90.0};
    spec.strategies = {tanim::Strategy::iterative};
    const auto rows = tanim::run_sweep(anim, spec);
    const std::string csv = tanim::render_sweep_csv(rows);
    const auto lines = csv_lines(csv);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "# tanim-sweep-v1");
    CHECK(lines[1] == "method,strategy,target_ss,achieved_ss,v,f,metric,value,error");
    for (std::size_t i = 2; i < lines.size(); ++i) CHECK(split_fields(lines[i]).size() == 9);
}

TEST_CASE("known-rank asset stays exact until the grid forces under-rank plans") {
    const auto anim = known_rank_asset();
    tanim::SweepSpec spec;
    spec.ss_grid = {50.0, 70.0, 90.0};
    spec.strategies = {tanim::Strategy::iterative};
    const auto rows = tanim::run_sweep(anim, spec);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK_FALSE(row.failed);
        CHECK(row.method == "hosvd");
        CHECK(row.metric == "mse");
    }
    CHECK(rows[0].target_ss == 50.0);
    CHECK(rows[0].value <= 1e-20);  // enough budget for the true rank (4, 3)
    CHECK(rows[1].value <= 1e-20);
    CHECK(rows[2].value >= 1e-6);  // no candidate at SS 90 reaches rank (4, 3)
    CHECK((rows[2].v < 4 || rows[2].f < 3));
    // distortion is non-decreasing along the grid
    CHECK(rows[0].value <= rows[1].value + 1e-12);
    CHECK(rows[1].value <= rows[2].value + 1e-12);
}

TEST_CASE("both methods report at every target") {
    const auto anim = known_rank_asset();
    const double coarse = tanim::space_savings(tanim::compression_ratio(20, 9, 36, 18));
    const double fine = tanim::space_savings(tanim::compression_ratio(10, 5, 36, 18));
    tanim::SweepSpec spec;
    spec.ss_grid = {coarse, fine};  // exact grid points, ascending savings
    spec.use_pca = true;
    const auto rows = tanim::run_sweep(anim, spec);
    REQUIRE(rows.size() == 4);
    for (const double target : spec.ss_grid) {
        bool saw_hosvd = false, saw_pca = false;
        for (const auto& row : rows) {
            if (row.target_ss != target) continue;
            CHECK_FALSE(row.failed);
            if (row.method == "hosvd") {
                saw_hosvd = true;
                CHECK(row.strategy == "diagonal");
                CHECK(std::abs(row.achieved_ss - target) <= 0.2);  // delta * 100
            }
            if (row.method == "pca") {
                saw_pca = true;
                CHECK(row.strategy == "-");
                CHECK(row.v == 0);
                CHECK(row.f >= 1);
                CHECK(row.achieved_ss ==
                      tanim::space_savings(tanim::pca_compression_ratio(row.f, 36, 18)));
            }
        }
        CHECK(saw_hosvd);
        CHECK(saw_pca);
    }
}

TEST_CASE("a failed point leaves an error row and the sweep continues") {
    const auto anim = known_rank_asset();
    const double feasible = tanim::space_savings(tanim::compression_ratio(5, 3, 36, 18));
    tanim::SweepSpec spec;
    spec.ss_grid = {feasible, 99.9};  // 99.9 is below every representable ratio
    spec.use_pca = true;
    const auto rows = tanim::run_sweep(anim, spec);
    REQUIRE(rows.size() == 4);
    int failures = 0;
    for (const auto& row : rows) {
        if (!row.failed) continue;
        ++failures;
        CHECK(row.method == "hosvd");
        CHECK(row.target_ss == 99.9);
        CHECK(row.metric == "-");
        CHECK_FALSE(row.error.empty());
        CHECK(row.error.find(',') == std::string::npos);
    }
    CHECK(failures == 1);  // pca has a component count for any target
    const auto lines = csv_lines(tanim::render_sweep_csv(rows));
    for (std::size_t i = 2; i < lines.size(); ++i) CHECK(split_fields(lines[i]).size() == 9);
}

TEST_CASE("pca component counts minimize the ratio residual") {
    using tanim::detail::pca_components_for_target;
    // pca_cr(p) = p/8 at K=4, F=24: every ratio and residual is an exact double
    CHECK(pca_components_for_target(0.25, 4, 3, 24) == 2);
    CHECK(pca_components_for_target(0.375, 4, 3, 24) == 3);
    CHECK(pca_components_for_target(0.3125, 4, 3, 24) == 2);  // exact tie: smaller wins
    CHECK(pca_components_for_target(0.34, 4, 3, 24) == 3);
    CHECK(pca_components_for_target(1e-9, 4, 3, 24) == 1);
    CHECK(pca_components_for_target(1.0, 4, 3, 24) == 8);
    CHECK(pca_components_for_target(2.0, 4, 3, 24) == 12);  // clamped to min(F, K*J)
}

TEST_CASE("printed reals parse back to the exact double") {
    for (const double x : {0.25 / 12, 3.141592653589793, 1e-300, 98.8, -7.25,
                           0.00951760176017601}) {
        const std::string text = tanim::detail::format_real(x);
        CHECK(std::strtod(text.c_str(), nullptr) == x);
    }
}

TEST_CASE("sweep spec validation") {
    const auto anim = known_rank_asset();
    tanim::SweepSpec spec;
    CHECK_THROWS_AS(tanim::run_sweep(anim, spec), tanim::ArgumentError);  // empty grid
    spec.ss_grid = {50.0, 50.0};
    CHECK_THROWS_AS(tanim::run_sweep(anim, spec), tanim::ArgumentError);  // not increasing
    spec.ss_grid = {50.0, 100.0};
    CHECK_THROWS_AS(tanim::run_sweep(anim, spec), tanim::ArgumentError);  // 100 excluded
    spec.ss_grid = {50.0};
    spec.use_hosvd = false;
    CHECK_THROWS_AS(tanim::run_sweep(anim, spec), tanim::ArgumentError);  // no methods
    spec.use_hosvd = true;
    spec.strategies = {};
    CHECK_THROWS_AS(tanim::run_sweep(anim, spec), tanim::ArgumentError);  // no strategies
    spec.strategies = {tanim::Strategy::diagonal};
    spec.metrics = {};
    CHECK_THROWS_AS(tanim::run_sweep(anim, spec), tanim::ArgumentError);  // no metrics
}

}  // TEST_SUITE
