#include <doctest.h>

#include <random>

#include "coreinv/decomp.hpp"
#include "coreinv/errors.hpp"
#include "coreinv/verify.hpp"
#include "oracles.hpp"

using namespace coreinv;
using coreinv::testing::max_abs_diff;
using coreinv::testing::unitarity_defect;

namespace {

const CMatrix kM{{1, 2}, {0, 0}};
const CMatrix kNilpotent{{0, 1}, {0, 0}};

}  // namespace

TEST_CASE("rank") {
  const Tolerances tol;
  CHECK(rank(kM, tol) == 1);
  CHECK(rank(CMatrix::identity(5), tol) == 5);
  CHECK(rank(CMatrix::zeros(3, 3), tol) == 0);
  CHECK(rank(CMatrix(3, 0), tol) == 0);

  const Instance inst = generate_index1({6, 3, 99, 10.0});
  CHECK(rank(inst.m, tol) == 3);
}

TEST_CASE("index_of") {
  const Tolerances tol;
  std::mt19937_64 rng(1);
  const IndexResult nonsingular = index_of(random_complex(4, 4, rng), tol);
  CHECK(nonsingular.k == 0);
  CHECK(nonsingular.rank_sequence == std::vector<std::size_t>{4});

  const IndexResult zero = index_of(CMatrix::zeros(3, 3), tol);
  CHECK(zero.k == 1);
  CHECK(zero.rank_sequence == std::vector<std::size_t>{0, 0});

  const IndexResult nil = index_of(kNilpotent, tol);
  CHECK(nil.k == 2);
  CHECK(nil.rank_sequence == std::vector<std::size_t>{1, 0, 0});

  CHECK(index_of(kM, tol).k == 1);
  CHECK_THROWS_AS(index_of(CMatrix(2, 3), tol), DimensionError);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(index_of(generate_index2(5, seed), tol).k >= 2);
    // Rotated 2x2 nilpotents: M^2 is rounding noise, not rank.
    CHECK(index_of(generate_index2(2, seed), tol).k == 2);
  }
}

TEST_CASE("core_decomposition") {
  const Tolerances tol;

  SUBCASE("worked example") {
    const CoreDecomposition d = core_decomposition(kM, tol);
    CHECK(d.r == 1);
    CHECK(fro_norm(d.reassemble() - kM) <= 1e-12);
    CHECK(unitarity_defect(d.v) <= 1e-12);
  }

  SUBCASE("identity") {
    const CoreDecomposition d = core_decomposition(CMatrix::identity(4), tol);
    CHECK(d.r == 4);
    CHECK(d.s.cols() == 0);
    CHECK(rank(d.t, tol) == 4);
  }

  SUBCASE("zero matrix") {
    const CoreDecomposition d = core_decomposition(CMatrix::zeros(3, 3), tol);
    CHECK(d.r == 0);
    CHECK(d.t.rows() == 0);
    CHECK(d.reassemble() == CMatrix::zeros(3, 3));
  }

  SUBCASE("index two is rejected") {
    CHECK_THROWS_AS(core_decomposition(kNilpotent, tol), IndexExceedsOne);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CHECK_THROWS_AS(core_decomposition(generate_index2(6, seed), tol), IndexExceedsOne);
      CHECK_THROWS_AS(core_decomposition(generate_index2(2, seed), tol), IndexExceedsOne);
      CHECK_THROWS_AS(require_index_at_most_one(generate_index2(2, seed), tol), IndexExceedsOne);
    }
  }

  SUBCASE("generated instances") {
    for (std::size_t n = 2; n <= 9; ++n) {
      for (std::size_t r = 0; r <= n; ++r) {
        const Instance inst = generate_index1({n, r, 31 * n + r, 100.0});
        const CoreDecomposition d = core_decomposition(inst.m, tol);
        CHECK(d.r == r);
        CHECK(unitarity_defect(d.v) <= 1e-12 * static_cast<double>(n));
        CHECK(fro_norm(d.reassemble() - inst.m) <= 1e-12 * fro_norm(inst.m));
        // Applying the block formula to this decomposition gives the generator's answer.
        const CMatrix v1 = d.range_basis();
        const CMatrix core = v1 * inverse(d.t, tol) * conj_transpose(v1);
        CHECK(coreinv::testing::rel_diff(core, inst.known_core_inverse) <= 1e-8);
      }
    }
  }
}

TEST_CASE("null_basis") {
  const Tolerances tol;

  const NullBasis l = null_basis(kM, tol);
  REQUIRE(l.basis.cols() == 1);
  // Spans (0, 1)^T: unit modulus against e2, orthogonal to e1.
  CHECK(std::abs(l.basis(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(l.basis(0, 0)) <= 1e-15);

  CHECK(null_basis(CMatrix::identity(3), tol).basis.cols() == 0);

  const NullBasis all = null_basis(CMatrix::zeros(2, 2), tol);
  CHECK(all.basis.cols() == 2);
  CHECK(unitarity_defect(all.basis) <= 1e-15);

  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t r = 0; r < n; ++r) {
      const Instance inst = generate_index1({n, r, 7 * n + r, 10.0});
      const NullBasis nb = null_basis(inst.m, tol);
      CHECK(nb.basis.cols() == n - r);
      CHECK(fro_norm(conj_transpose(inst.m) * nb.basis) <= 1e-12 * (1.0 + fro_norm(inst.m)));
      const CoreDecomposition d = core_decomposition(inst.m, tol);
      CHECK(unitarity_defect(hstack(d.range_basis(), nb.basis)) <= 1e-12 * static_cast<double>(n));
    }
  }
}

TEST_CASE("full_rank_factorization") {
  const Tolerances tol;

  const FullRankFactors fm = full_rank_factorization(kM, tol);
  CHECK(fm.f.cols() == 1);
  CHECK(fm.g.rows() == 1);
  CHECK(max_abs_diff(fm.f * fm.g, kM) <= 1e-15);

  const FullRankFactors fi = full_rank_factorization(CMatrix::identity(2), tol);
  CHECK(max_abs_diff(fi.f * fi.g, CMatrix::identity(2)) <= 1e-15);

  const FullRankFactors fz = full_rank_factorization(CMatrix::zeros(3, 3), tol);
  CHECK(fz.f.cols() == 0);
  CHECK(fz.g.rows() == 0);
  CHECK(fz.f * fz.g == CMatrix::zeros(3, 3));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_complex(6, 3, rng) * random_complex(3, 5, rng);
    const FullRankFactors fg = full_rank_factorization(a, tol);
    CHECK(rank(a, tol) == 3);
    CHECK(rank(fg.f, tol) == 3);
    CHECK(rank(fg.g, tol) == 3);
    CHECK(fro_norm(fg.f * fg.g - a) <= 1e-12 * fro_norm(a));
  }
}

TEST_CASE("index at most one implies rank(M^2) == rank(M)") {
  const Tolerances tol;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 10;
    const Instance inst = generate_index1({n, seed % n, seed, 100.0});
    CHECK(rank(inst.m * inst.m, tol) == rank(inst.m, tol));
    CHECK_NOTHROW(require_index_at_most_one(inst.m, tol));
  }
  CHECK_THROWS_AS(require_index_at_most_one(kNilpotent, tol), IndexExceedsOne);
}
