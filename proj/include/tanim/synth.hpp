#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "tanim/animation.hpp"
#include "tanim/errors.hpp"
#include "tanim/mesh_topology.hpp"
#include "tanim/tensor3.hpp"

// Deterministic test corpora: animations with controlled structure (pure rigid
// motion, exact multilinear rank, smooth non-rigid stress) for exercising the
// codec where the ground truth is known by construction.
namespace tanim {

enum class SynthKind { rigid, lowrank, bulge, mixed };

inline const char* synth_kind_name(SynthKind kind) {
    switch (kind) {
        case SynthKind::rigid: return "rigid";
        case SynthKind::lowrank: return "lowrank";
        case SynthKind::bulge: return "bulge";
        case SynthKind::mixed: return "mixed";
    }
    throw ArgumentError("synth_kind_name: unknown kind");
}

inline SynthKind synth_kind_from_name(const std::string& name) {
    if (name == "rigid") return SynthKind::rigid;
    if (name == "lowrank") return SynthKind::lowrank;
    if (name == "bulge") return SynthKind::bulge;
    if (name == "mixed") return SynthKind::mixed;
    throw ArgumentError("unknown asset kind '" + name + "' (rigid, lowrank, bulge, mixed)");
}

struct SynthParams {
    Eigen::Index num_vertices = 100;
    Eigen::Index num_frames = 20;
    Eigen::Index rank_v = 4;   // lowrank/mixed: vertex-mode multilinear rank
    Eigen::Index rank_f = 3;   // lowrank/mixed: frame-mode multilinear rank
    double amplitude = 1.0;    // deformation scale relative to the unit-extent base
    std::uint64_t seed = 1;
};

struct BaseMesh {
    Eigen::MatrixXd positions;  // K x 3
    EdgeList edges;
    Eigen::Index grid_nx = 0, grid_ny = 0;  // 0 when the fallback curve was used
};

// A unit-extent surface sampled on an nx x ny lattice when K factors into one,
// otherwise a helix. Both keep [positions | 1] at full column rank, which the
// motion estimator needs.
inline BaseMesh make_base_mesh(Eigen::Index num_vertices) {
    if (num_vertices < 4) throw DimensionError("make_base_mesh: need at least 4 vertices");
    BaseMesh mesh;
    Eigen::Index ny = Eigen::Index(std::sqrt(double(num_vertices)));
    while (ny > 1 && num_vertices % ny != 0) --ny;
    mesh.positions.resize(num_vertices, 3);
    if (ny > 1) {
        const Eigen::Index nx = num_vertices / ny;
        mesh.grid_nx = nx;
        mesh.grid_ny = ny;
        const double dx = 1.0 / double(nx - 1), dy = 1.0 / double(ny - 1);
        for (Eigen::Index iy = 0; iy < ny; ++iy)
            for (Eigen::Index ix = 0; ix < nx; ++ix) {
                const double x = double(ix) * dx, y = double(iy) * dy;
                mesh.positions.row(iy * nx + ix)
                    << x, y, 0.3 * std::sin(1.7 * x + 0.3) * std::cos(1.3 * y + 0.4) + 0.1 * x * x;
            }
        for (Eigen::Index iy = 0; iy < ny; ++iy)
            for (Eigen::Index ix = 0; ix < nx; ++ix) {
                const std::uint32_t at = std::uint32_t(iy * nx + ix);
                if (ix + 1 < nx) mesh.edges.emplace_back(at, at + 1);
                if (iy + 1 < ny) mesh.edges.emplace_back(at, at + std::uint32_t(nx));
            }
    } else {
        for (Eigen::Index i = 0; i < num_vertices; ++i) {
            const double theta = 0.5 * double(i);
            mesh.positions.row(i) << std::cos(theta), std::sin(theta), 0.15 * theta;
        }
        for (std::uint32_t i = 0; i + 1 < std::uint32_t(num_vertices); ++i)
            mesh.edges.emplace_back(i, i + 1);
    }
    mesh.edges = canonical_edges(mesh.edges, num_vertices);
    return mesh;
}

namespace detail {

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::Vector4d q;
    do {
        for (int i = 0; i < 4; ++i) q[i] = gauss(rng);
    } while (q.norm() < 1e-6);
    q.normalize();
    return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
}

inline void apply_rigid_motion(Tensor3d& vertices, std::mt19937_64& rng, double travel) {
    std::normal_distribution<double> gauss;
    for (Eigen::Index f = 1; f < vertices.dim(3); ++f) {  // frame 0 stays put
        const Eigen::Matrix3d rotation = random_rotation(rng);
        Eigen::RowVector3d translation;
        for (int i = 0; i < 3; ++i) translation[i] = travel * gauss(rng);
        auto slice = vertices.slice(f);
        slice = (slice * rotation.transpose()).rowwise() + translation;
    }
}

// Columns orthonormal and orthogonal to span([base | 1]): deformations built
// from them leave the frame-to-frame affine fits exactly at the identity.
inline Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& base, Eigen::Index columns,
                                        std::mt19937_64& rng) {
    const Eigen::Index k = base.rows();
    Eigen::MatrixXd fitted(k, 4);
    fitted << base, Eigen::VectorXd::Ones(k);
    const Eigen::MatrixXd q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(fitted).householderQ() *
        Eigen::MatrixXd::Identity(k, 4);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd raw(k, columns);
    for (Eigen::Index c = 0; c < columns; ++c)
        for (Eigen::Index r = 0; r < k; ++r) raw(r, c) = gauss(rng);
    raw -= q * (q.transpose() * raw);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
           Eigen::MatrixXd::Identity(k, columns);
}

// Deformation with exact multilinear rank (extra_v, <=3, extra_f), vanishing on
// frame 0, with vertex-mode range orthogonal to span([base | 1]).
inline Tensor3d rank_controlled_deformation(const Eigen::MatrixXd& base, Eigen::Index frames,
                                            Eigen::Index extra_v, Eigen::Index extra_f,
                                            double amplitude, std::uint64_t seed) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * std::uint64_t(attempt));
        std::normal_distribution<double> gauss;
        const Eigen::MatrixXd u1 = complement_basis(base, extra_v, rng);
        Eigen::MatrixXd u3_raw(frames, extra_f);
        for (Eigen::Index c = 0; c < extra_f; ++c) {
            u3_raw(0, c) = 0.0;
            for (Eigen::Index r = 1; r < frames; ++r) u3_raw(r, c) = gauss(rng);
        }
        // column orthonormalization keeps the zero first row
        const Eigen::MatrixXd u3 =
            Eigen::HouseholderQR<Eigen::MatrixXd>(u3_raw).householderQ() *
            Eigen::MatrixXd::Identity(frames, extra_f);
        Tensor3d core(extra_v, 3, extra_f);
        for (Eigen::Index i = 0; i < core.vec().size(); ++i)
            core.vec()[i] = amplitude * gauss(rng);
        // resample until the core unfoldings are solidly conditioned, so the
        // composed tensor's trailing mode spectra stay far above roundoff
        const double floor = 0.3 * amplitude;
        const auto sigma_min = [](const Eigen::MatrixXd& m) {
            return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().minCoeff();
        };
        if (sigma_min(unfold(core, 1).data) < floor) continue;
        if (sigma_min(unfold(core, 3).data) < floor) continue;
        return mode_multiply(mode_multiply(core, u1, 1), u3, 3);
    }
    throw DecompositionError("rank_controlled_deformation: no well-conditioned draw in 32 tries");
}

inline void add_travelling_bulge(Tensor3d& vertices, const BaseMesh& mesh, double amplitude,
                                 std::uint64_t seed) {
    const Eigen::Index k = vertices.dim(1), frames = vertices.dim(3);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    const double phase = angle(rng);
    const double width = 0.18;
    for (Eigen::Index f = 0; f < frames; ++f) {
        const double s = frames > 1 ? double(f) / double(frames - 1) : 0.0;
        const double cx = 0.2 + 0.6 * s;
        const double cy = 0.5 + 0.3 * std::sin(2.0 * 3.14159265358979323846 * s + phase);
        auto slice = vertices.slice(f);
        for (Eigen::Index v = 0; v < k; ++v) {
            const double dx = mesh.positions(v, 0) - cx;
            const double dy = mesh.positions(v, 1) - cy;
            slice(v, 2) += amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
        }
    }
}

}  // namespace detail

inline AnimationSequence make_synthetic(SynthKind kind, const SynthParams& params) {
    if (params.num_vertices < 4)
        throw DimensionError("make_synthetic: need at least 4 vertices");
    if (params.num_frames < 1) throw DimensionError("make_synthetic: need at least one frame");
    if (!(params.amplitude > 0.0))
        throw ArgumentError("make_synthetic: amplitude must be positive");
    const bool ranked = kind == SynthKind::lowrank || kind == SynthKind::mixed;
    if (ranked) {
        // the base shape itself spans rank (3, 3, 1), so the deformation adds
        // rank_v - 3 vertex directions and rank_f - 1 frame directions
        if (params.rank_v < 4 || params.rank_v > params.num_vertices - 4)
            throw RankError("make_synthetic: vertex rank must lie in [4, K-4]");
        if (params.rank_f < 2 || params.rank_f > params.num_frames - 1)
            throw RankError("make_synthetic: frame rank must lie in [2, F-1]");
        if (params.rank_v - 3 > 3 * (params.rank_f - 1))
            throw RankError("make_synthetic: vertex rank too high for this frame rank");
    }

    const BaseMesh mesh = make_base_mesh(params.num_vertices);
    AnimationSequence anim;
    anim.name = synth_kind_name(kind);
    anim.edges = mesh.edges;
    anim.vertices = Tensor3d(params.num_vertices, 3, params.num_frames);
    for (Eigen::Index f = 0; f < params.num_frames; ++f) anim.vertices.slice(f) = mesh.positions;

    std::mt19937_64 rng(params.seed);
    switch (kind) {
        case SynthKind::rigid:
            detail::apply_rigid_motion(anim.vertices, rng, params.amplitude);
            break;
        case SynthKind::lowrank:
            anim.vertices = anim.vertices + detail::rank_controlled_deformation(
                                                mesh.positions, params.num_frames,
                                                params.rank_v - 3, params.rank_f - 1,
                                                params.amplitude, params.seed);
            break;
        case SynthKind::bulge:
            detail::add_travelling_bulge(anim.vertices, mesh, params.amplitude, params.seed);
            break;
        case SynthKind::mixed:
            anim.vertices = anim.vertices + detail::rank_controlled_deformation(
                                                mesh.positions, params.num_frames,
                                                params.rank_v - 3, params.rank_f - 1,
                                                0.5 * params.amplitude, params.seed);
            detail::add_travelling_bulge(anim.vertices, mesh, 0.5 * params.amplitude,
                                         params.seed ^ 0xb5297a4d9c80ff13ull);
            detail::apply_rigid_motion(anim.vertices, rng, params.amplitude);
            break;
    }
    validate_animation(anim);
    return anim;
}

}  // namespace tanim
