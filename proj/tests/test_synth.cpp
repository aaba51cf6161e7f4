#include <doctest.h>

#include <Eigen/QR>

#include "tanim/codec.hpp"
#include "tanim/hosvd.hpp"
#include "tanim/rigid_motion.hpp"
#include "tanim/synth.hpp"
#include "test_util.hpp"

using Eigen::Index;

namespace {

bool same_vertices(const tanim::AnimationSequence& a, const tanim::AnimationSequence& b) {
    return a.vertices.dims() == b.vertices.dims() &&
           (a.vertices.vec().array() == b.vertices.vec().array()).all();
}

double relative_decode_error(const tanim::AnimationSequence& anim, Index v, Index f) {
    tanim::EncodeOptions options;
    options.rank_v = v;
    options.rank_f = f;
    options.ds = 8;
    const auto result = tanim::encode(anim, options);
    const auto decoded = tanim::decode(result.container);
    return tanim::frobenius_norm(anim.vertices - decoded) / tanim::frobenius_norm(anim.vertices);
}

Index affine_fit_rank(const Eigen::MatrixXd& positions) {
    Eigen::MatrixXd g(positions.rows(), 4);
    g << positions, Eigen::VectorXd::Ones(positions.rows());
    return Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(g).rank();
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("same seed gives bitwise-identical assets, new seed a new asset") {
    for (const auto kind : {tanim::SynthKind::rigid, tanim::SynthKind::lowrank,
                            tanim::SynthKind::bulge, tanim::SynthKind::mixed}) {
        tanim::SynthParams params;
        params.num_vertices = 24;
        params.num_frames = 8;
        params.seed = 7;
        const auto first = tanim::make_synthetic(kind, params);
        const auto again = tanim::make_synthetic(kind, params);
        CHECK(same_vertices(first, again));
        CHECK(first.edges == again.edges);
        params.seed = 8;
        const auto other = tanim::make_synthetic(kind, params);
        CHECK_FALSE(same_vertices(first, other));
    }
}

TEST_CASE("base meshes support an affine frame fit") {
    const auto grid = tanim::make_base_mesh(20);  // 5 x 4 lattice
    CHECK(grid.grid_nx == 5);
    CHECK(grid.grid_ny == 4);
    CHECK(grid.positions.rows() == 20);
    CHECK(grid.edges.size() == 31);  // 4*4 + 5*3 lattice edges
    CHECK(affine_fit_rank(grid.positions) == 4);

    const auto helix = tanim::make_base_mesh(7);  // prime count: space curve
    CHECK(helix.grid_nx == 0);
    CHECK(helix.edges.size() == 6);
    CHECK(affine_fit_rank(helix.positions) == 4);
}

TEST_CASE("rigid assets normalize to a constant tensor") {
    tanim::SynthParams params;
    params.num_vertices = 30;
    params.num_frames = 10;
    params.seed = 11;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::rigid, params);
    const auto rigid = tanim::estimate_rigid_motion(anim.vertices);
    CHECK(rigid.degenerate_frames.empty());
    const Eigen::MatrixXd reference = rigid.normalized.slice(0);
    for (Index f = 1; f < 10; ++f) {
        const double drift =
            (Eigen::MatrixXd(rigid.normalized.slice(f)) - reference).norm() / reference.norm();
        CHECK(drift <= 1e-10);
        // the fitted maps are the generating rotations, hence orthogonal
        const Eigen::Matrix3d l = rigid.transforms[std::size_t(f)].matrix.leftCols<3>();
        CHECK((l.transpose() * l - Eigen::Matrix3d::Identity()).norm() <= 1e-9);
    }
}

TEST_CASE("rigid assets compress to vertex rank 3, one frame component") {
    tanim::SynthParams params;
    params.num_vertices = 60;
    params.num_frames = 20;
    params.seed = 12;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::rigid, params);
    tanim::EncodeOptions options;
    options.target_cr = tanim::compression_ratio(3, 1, 60, 20);
    options.ds = 8;
    const auto result = tanim::encode(anim, options);
    CHECK(result.plan.v == 3);
    CHECK(result.plan.f == 1);
    const auto decoded = tanim::decode(result.container);
    CHECK(tanim::frobenius_norm(anim.vertices - decoded) /
              tanim::frobenius_norm(anim.vertices) <=
          1e-8);
}

TEST_CASE("lowrank assets have exactly the requested multilinear rank") {
    tanim::SynthParams params;
    params.num_vertices = 30;
    params.num_frames = 12;
    params.rank_v = 4;
    params.rank_f = 3;
    params.seed = 13;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::lowrank, params);
    const auto op = tanim::hosvd(anim.vertices);
    const auto mode1 = tanim::core_slice_norms(op, 1);
    const auto mode3 = tanim::core_slice_norms(op, 3);
    CHECK(mode1[3] >= 1e-3 * mode1[0]);  // the kept spectrum is well conditioned
    CHECK(mode3[2] >= 1e-3 * mode3[0]);
    for (Index i = 4; i < mode1.size(); ++i) CHECK(mode1[i] <= 1e-10 * mode1[0]);
    for (Index i = 3; i < mode3.size(); ++i) CHECK(mode3[i] <= 1e-10 * mode3[0]);
}

TEST_CASE("lowrank deformation leaves the motion fits at the identity") {
    tanim::SynthParams params;
    params.num_vertices = 25;
    params.num_frames = 9;
    params.rank_v = 5;
    params.rank_f = 3;
    params.seed = 14;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::lowrank, params);
    const auto rigid = tanim::estimate_rigid_motion(anim.vertices);
    for (const auto& t : rigid.transforms) {
        CHECK((t.matrix.leftCols<3>() - Eigen::Matrix3d::Identity()).norm() <= 1e-10);
        CHECK(t.matrix.col(3).norm() <= 1e-10);
    }
}

TEST_CASE("lowrank assets decode exactly iff both ranks suffice") {
    tanim::SynthParams params;
    params.num_vertices = 30;
    params.num_frames = 12;
    params.rank_v = 4;
    params.rank_f = 3;
    params.seed = 15;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::lowrank, params);
    CHECK(relative_decode_error(anim, 4, 3) <= 1e-8);
    CHECK(relative_decode_error(anim, 6, 4) <= 1e-8);  // headroom stays exact
    CHECK(relative_decode_error(anim, 3, 3) >= 1e-3);
    CHECK(relative_decode_error(anim, 4, 2) >= 1e-3);
}

TEST_CASE("bulge assets move smoothly and are not low rank") {
    tanim::SynthParams params;
    params.num_vertices = 49;
    params.num_frames = 16;
    params.amplitude = 0.5;
    params.seed = 16;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::bulge, params);
    const Eigen::MatrixXd first = anim.vertices.slice(0);
    const Eigen::MatrixXd last = anim.vertices.slice(15);
    CHECK((last - first).norm() > 1e-2);
    // only heights move; the footprint is the base lattice in every frame
    for (Index f = 0; f < 16; ++f) {
        CHECK(anim.vertices.slice(f).col(0) == first.col(0));
        CHECK(anim.vertices.slice(f).col(1) == first.col(1));
    }
    const auto op = tanim::hosvd(anim.vertices);
    const auto mode3 = tanim::core_slice_norms(op, 3);
    CHECK(mode3[3] >= 1e-6 * mode3[0]);  // a travelling bump needs many components
}

TEST_CASE("mixed assets carry genuine rigid motion and survive a full round trip") {
    tanim::SynthParams params;
    params.num_vertices = 31;  // prime: exercises the curve fallback
    params.num_frames = 10;
    params.seed = 17;
    const auto anim = tanim::make_synthetic(tanim::SynthKind::mixed, params);
    const auto rigid = tanim::estimate_rigid_motion(anim.vertices);
    double largest = 0.0;
    for (const auto& t : rigid.transforms)
        largest = std::max(largest,
                           (t.matrix.leftCols<3>() - Eigen::Matrix3d::Identity()).norm());
    CHECK(largest > 0.1);
    CHECK(relative_decode_error(anim, 31, 10) <= 1e-9);
}

TEST_CASE("parameter validation") {
    tanim::SynthParams params;
    params.num_vertices = 3;
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::rigid, params),
                    tanim::DimensionError);
    params.num_vertices = 20;
    params.num_frames = 0;
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::rigid, params),
                    tanim::DimensionError);
    params.num_frames = 10;
    params.amplitude = 0.0;
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::bulge, params),
                    tanim::ArgumentError);
    params.amplitude = 1.0;
    params.rank_v = 3;
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::lowrank, params), tanim::RankError);
    params.rank_v = 17;  // > K - 4
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::lowrank, params), tanim::RankError);
    params.rank_v = 10;  // extra_v = 7 > 3 * extra_f = 3
    params.rank_f = 2;
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::lowrank, params), tanim::RankError);
    params.rank_v = 4;
    params.rank_f = 1;
    CHECK_THROWS_AS(tanim::make_synthetic(tanim::SynthKind::lowrank, params), tanim::RankError);
    CHECK(tanim::synth_kind_from_name("bulge") == tanim::SynthKind::bulge);
    CHECK(tanim::synth_kind_name(tanim::SynthKind::mixed) == std::string("mixed"));
    CHECK_THROWS_AS(tanim::synth_kind_from_name("wobble"), tanim::ArgumentError);
}

}  // TEST_SUITE
