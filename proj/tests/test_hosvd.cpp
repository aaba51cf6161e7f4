#include <doctest.h>

#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tanim/hosvd.hpp"
#include "tanim/tensor3.hpp"
#include "test_util.hpp"

using tanim::Tensor3d;
using tanim::TuckerOperatord;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Independent singular-value route: one-sided Jacobi on the unfolding itself.
VectorXd singular_values_oracle(const Tensor3d& t, int mode) {
    Eigen::JacobiSVD<MatrixXd> svd(tanim::unfold(t, mode).data);
    return svd.singularValues();
}

double truncation_error(const TuckerOperatord& op, const Tensor3d& t,
                        const std::array<Eigen::Index, 3>& ranks) {
    return tanim::frobenius_norm(t - tanim::reconstruct(tanim::truncate(op, ranks)));
}

// Rank-1 outer product a \circ b \circ c.
Tensor3d outer3(const VectorXd& a, const VectorXd& b, const VectorXd& c) {
    Tensor3d t(a.size(), b.size(), c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) t.slice(k) = a * b.transpose() * c[k];
    return t;
}

}  // namespace

TEST_SUITE("hosvd") {

TEST_CASE("full reconstruction of a random tensor is exact to 1e-9") {
    auto rng = testutil::make_rng(101);
    const Tensor3d t = testutil::random_tensor(5, 3, 7, rng);
    const auto op = tanim::hosvd(t);
    const Tensor3d back = tanim::reconstruct(tanim::truncate(op, t.dims()));
    CHECK(testutil::rel_err(back, t) <= 1e-9);
}

TEST_CASE("factors are square and orthogonal") {
    auto rng = testutil::make_rng(102);
    const Tensor3d t = testutil::random_tensor(6, 3, 4, rng);
    const auto op = tanim::hosvd(t);
    for (int l = 0; l < 3; ++l) {
        const Eigen::Index n = t.dims()[l];
        CHECK(op.factors[l].rows() == n);
        CHECK(op.factors[l].cols() == n);
        const double defect =
            (op.factors[l].transpose() * op.factors[l] - MatrixXd::Identity(n, n)).norm();
        CHECK(defect <= 1e-8 * std::sqrt(double(n)));
    }
}

TEST_CASE("completion branch keeps factors orthogonal when a mode dominates") {
    // mode-1 dimension exceeds the product of the others, so the left singular
    // basis must be completed beyond the unfolding's column count
    auto rng = testutil::make_rng(103);
    const Tensor3d t = testutil::random_tensor(20, 3, 2, rng);
    const auto op = tanim::hosvd(t);
    const double defect =
        (op.factors[0].transpose() * op.factors[0] - MatrixXd::Identity(20, 20)).norm();
    CHECK(defect <= 1e-8 * std::sqrt(20.0));
    const Tensor3d back = tanim::reconstruct(tanim::truncate(op, t.dims()));
    CHECK(testutil::rel_err(back, t) <= 1e-9);
}

TEST_CASE("core slice norms equal the unfolding singular values, non-increasing") {
    auto rng = testutil::make_rng(104);
    const Tensor3d t = testutil::random_tensor(6, 3, 5, rng);
    const auto op = tanim::hosvd(t);
    for (int mode = 1; mode <= 3; ++mode) {
        const VectorXd norms = tanim::core_slice_norms(op, mode);
        const VectorXd sv = singular_values_oracle(t, mode);
        REQUIRE(norms.size() == t.dims()[mode - 1]);
        const double scale = sv[0];
        for (Eigen::Index i = 0; i < norms.size(); ++i) {
            const double expected = i < sv.size() ? sv[i] : 0.0;
            CHECK(std::abs(norms[i] - expected) <= 1e-8 * scale);
        }
        for (Eigen::Index i = 0; i + 1 < norms.size(); ++i)
            CHECK(norms[i + 1] <= norms[i] + 1e-10 * scale);
    }
}

TEST_CASE("core slices are mutually orthogonal for a decomposition output") {
    auto rng = testutil::make_rng(105);
    const Tensor3d t = testutil::random_tensor(5, 3, 6, rng);
    const auto op = tanim::hosvd(t);
    for (int mode = 1; mode <= 3; ++mode)
        CHECK(tanim::core_orthogonality_defect(op, mode) <= 1e-8);
}

TEST_CASE("orthogonality defect flags a hand-built correlated core") {
    TuckerOperatord op;
    op.core = Tensor3d(2, 2, 2);
    // both mode-3 slices identical: normalized cross inner product is 1
    op.core.slice(0) << 1, 2, 3, 4;
    op.core.slice(1) << 1, 2, 3, 4;
    for (int l = 0; l < 3; ++l) op.factors[l] = MatrixXd::Identity(2, 2);
    CHECK(tanim::core_orthogonality_defect(op, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonality defect of a zero core is zero") {
    TuckerOperatord op;
    op.core = Tensor3d(3, 3, 3);
    for (int l = 0; l < 3; ++l) op.factors[l] = MatrixXd::Identity(3, 3);
    for (int mode = 1; mode <= 3; ++mode)
        CHECK(tanim::core_orthogonality_defect(op, mode) == 0.0);
}

TEST_CASE("all-zero tensor decomposes into orthogonal factors and a zero core") {
    const Tensor3d t(4, 3, 5);
    const auto op = tanim::hosvd(t);
    CHECK(tanim::frobenius_norm(op.core) == 0.0);
    for (int l = 0; l < 3; ++l) {
        const Eigen::Index n = t.dims()[l];
        CHECK((op.factors[l].transpose() * op.factors[l] - MatrixXd::Identity(n, n)).norm() <=
              1e-12);
    }
}

TEST_CASE("rank-1 tensor concentrates all energy in the leading core entry") {
    auto rng = testutil::make_rng(106);
    VectorXd a = testutil::random_matrix(4, 1, rng);
    VectorXd b = testutil::random_matrix(3, 1, rng);
    VectorXd c = testutil::random_matrix(5, 1, rng);
    const Tensor3d t = outer3(a, b, c);
    const auto op = tanim::hosvd(t);
    const double total = tanim::frobenius_norm(t);
    CHECK(std::abs(std::abs(op.core(0, 0, 0)) - total) <= 1e-12 * total);
    const Tensor3d back = tanim::reconstruct(tanim::truncate(op, {1, 1, 1}));
    CHECK(testutil::rel_err(back, t) <= 1e-10);
}

TEST_CASE("exact multilinear-rank tensors are recovered at their ranks") {
    auto rng = testutil::make_rng(107);
    const MatrixXd u1 = testutil::random_orthonormal(8, 2, rng);
    const MatrixXd u2 = testutil::random_orthonormal(3, 3, rng);
    const MatrixXd u3 = testutil::random_orthonormal(7, 2, rng);
    const Tensor3d core = testutil::random_tensor(2, 3, 2, rng);
    const Tensor3d t = tanim::mode_multiply(
        tanim::mode_multiply(tanim::mode_multiply(core, u1, 1), u2, 2), u3, 3);
    const auto op = tanim::hosvd(t);
    CHECK(truncation_error(op, t, {2, 3, 2}) <= 1e-10 * tanim::frobenius_norm(t));
    CHECK(truncation_error(op, t, {1, 3, 2}) >= 1e-6 * tanim::frobenius_norm(t));
}

TEST_CASE("truncation at full ranks reproduces the input") {
    auto rng = testutil::make_rng(108);
    const Tensor3d t = testutil::random_tensor(4, 3, 6, rng);
    const auto op = tanim::hosvd(t);
    const auto tt = tanim::truncate(op, t.dims());
    CHECK(tt.ranks == t.dims());
    CHECK(tt.original_dims == t.dims());
    CHECK(testutil::rel_err(tanim::reconstruct(tt), t) <= 1e-9);
}

TEST_CASE("truncate validates the requested ranks") {
    auto rng = testutil::make_rng(109);
    const auto op = tanim::hosvd(testutil::random_tensor(4, 3, 5, rng));
    CHECK_THROWS_AS(tanim::truncate(op, {0, 3, 5}), tanim::RankError);
    CHECK_THROWS_AS(tanim::truncate(op, {4, 4, 5}), tanim::RankError);
    CHECK_THROWS_AS(tanim::truncate(op, {4, 3, 6}), tanim::RankError);
}

TEST_CASE("truncated energies satisfy the pythagorean split") {
    auto rng = testutil::make_rng(110);
    const Tensor3d t = testutil::random_tensor(6, 3, 8, rng);
    const auto op = tanim::hosvd(t);
    const double total2 = std::pow(tanim::frobenius_norm(t), 2);
    for (const auto& ranks : {std::array<Eigen::Index, 3>{3, 2, 4},
                              std::array<Eigen::Index, 3>{1, 3, 8},
                              std::array<Eigen::Index, 3>{6, 1, 2}}) {
        const Tensor3d approx = tanim::reconstruct(tanim::truncate(op, ranks));
        const double err2 = std::pow(tanim::frobenius_norm(t - approx), 2);
        const double kept2 = std::pow(tanim::frobenius_norm(approx), 2);
        CHECK(std::abs(err2 + kept2 - total2) <= 1e-8 * total2);
    }
}

TEST_CASE("truncation error is bounded by the discarded singular values") {
    auto rng = testutil::make_rng(111);
    const Tensor3d t = testutil::random_tensor(7, 3, 6, rng);
    const auto op = tanim::hosvd(t);
    std::array<VectorXd, 3> sv;
    for (int mode = 1; mode <= 3; ++mode) sv[mode - 1] = singular_values_oracle(t, mode);
    for (const auto& ranks : {std::array<Eigen::Index, 3>{4, 3, 3},
                              std::array<Eigen::Index, 3>{2, 2, 5},
                              std::array<Eigen::Index, 3>{5, 3, 1}}) {
        double bound2 = 0;
        for (int l = 0; l < 3; ++l)
            for (Eigen::Index i = ranks[l]; i < sv[l].size(); ++i) bound2 += sv[l][i] * sv[l][i];
        const double err2 = std::pow(truncation_error(op, t, ranks), 2);
        CHECK(err2 <= bound2 + 1e-10 * std::pow(tanim::frobenius_norm(t), 2));
    }
}

TEST_CASE("truncation error is monotone in each retained rank") {
    auto rng = testutil::make_rng(112);
    const Tensor3d t = testutil::random_tensor(12, 3, 10, rng);
    const auto op = tanim::hosvd(t);
    for (Eigen::Index f = 1; f <= 10; ++f) {
        double prev = truncation_error(op, t, {1, 3, f});
        for (Eigen::Index v = 2; v <= 12; ++v) {
            const double cur = truncation_error(op, t, {v, 3, f});
            CHECK(cur <= prev + 1e-10);
            prev = cur;
        }
    }
    for (Eigen::Index v = 1; v <= 12; ++v) {
        double prev = truncation_error(op, t, {v, 3, 1});
        for (Eigen::Index f = 2; f <= 10; ++f) {
            const double cur = truncation_error(op, t, {v, 3, f});
            CHECK(cur <= prev + 1e-10);
            prev = cur;
        }
    }
}

TEST_CASE("hosvd validates its input") {
    CHECK_THROWS_AS(tanim::hosvd(Tensor3d(0, 3, 4)), tanim::DimensionError);
    Tensor3d bad(2, 2, 2);
    bad(0, 0, 0) = std::nan("");
    CHECK_THROWS_AS(tanim::hosvd(bad), tanim::ArgumentError);
}

TEST_CASE("reconstruct validates factor shapes") {
    auto rng = testutil::make_rng(113);
    const auto op = tanim::hosvd(testutil::random_tensor(4, 3, 5, rng));
    auto tt = tanim::truncate(op, {2, 3, 2});
    tt.factors[0] = MatrixXd::Zero(4, 3);
    CHECK_THROWS_AS(tanim::reconstruct(tt), tanim::DimensionError);
    auto tt2 = tanim::truncate(op, {2, 3, 2});
    tt2.ranks = {2, 3, 3};
    CHECK_THROWS_AS(tanim::reconstruct(tt2), tanim::DimensionError);
}

}  // TEST_SUITE
