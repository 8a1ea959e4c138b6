#include <doctest.h>

#include <random>

#include "coreinv/errors.hpp"
#include "coreinv/ginv.hpp"
#include "coreinv/solve.hpp"
#include "coreinv/verify.hpp"
#include "oracles.hpp"

using namespace coreinv;
using coreinv::testing::max_abs_diff;
using coreinv::testing::rel_diff;

namespace {

const CMatrix kM{{1, 2}, {0, 0}};
const CMatrix kB{{1}, {1}};
const CMatrix kX{{1}, {0}};
const NullBasis kL{CMatrix{{0}, {1}}};

}  // namespace

TEST_CASE("solve method names") {
  for (SolveMethod m :
       {SolveMethod::Direct, SolveMethod::CramerBordered, SolveMethod::CramerCondensed}) {
    CHECK(parse_solve_method(to_string(m)) == m);
  }
  CHECK_FALSE(parse_solve_method("lsqr").has_value());
}

TEST_CASE("worked example by all three routes") {
  const Tolerances tol;

  const SolveReport direct = solve_constrained(kM, kB, tol);
  CHECK(max_abs_diff(direct.x, kX) <= 1e-14);
  CHECK(direct.method == SolveMethod::Direct);
  CHECK(direct.residual_fro == doctest::Approx(1.0));
  CHECK(direct.min_residual_reference == doctest::Approx(1.0));
  CHECK(direct.in_range_defect <= 1e-14);
  CHECK_FALSE(direct.determinant.has_value());

  const SolveReport bordered = solve_cramer_bordered(kM, kL, kB, tol);
  CHECK(max_abs_diff(bordered.x, kX) <= 1e-14);
  REQUIRE(bordered.determinant.has_value());
  CHECK(std::abs(*bordered.determinant - cplx{-1.0}) <= 1e-14);
  REQUIRE(bordered.numerators.size() == 2);
  CHECK(std::abs(bordered.numerators[0] - cplx{-1.0}) <= 1e-14);
  CHECK(std::abs(bordered.numerators[1]) <= 1e-14);

  const SolveReport condensed = solve_cramer_condensed(kM, kL, kB, tol);
  CHECK(max_abs_diff(condensed.x, kX) <= 1e-14);
  REQUIRE(condensed.determinant.has_value());
  CHECK(std::abs(*condensed.determinant - cplx{5.0}) <= 1e-13);
  REQUIRE(condensed.numerators.size() == 2);
  CHECK(std::abs(condensed.numerators[0] - cplx{5.0}) <= 1e-13);
  CHECK(std::abs(condensed.numerators[1]) <= 1e-13);

  // Dispatch uses the computed (orthonormal) L and must agree.
  for (SolveMethod m :
       {SolveMethod::Direct, SolveMethod::CramerBordered, SolveMethod::CramerCondensed}) {
    CHECK(max_abs_diff(solve(kM, kB, m, tol).x, kX) <= 1e-14);
  }
}

TEST_CASE("degenerate problems") {
  const Tolerances tol;
  std::mt19937_64 rng(9);

  SUBCASE("nonsingular M gives the ordinary solution") {
    const CMatrix a = random_complex(4, 4, rng);
    const CMatrix b = random_complex(4, 1, rng);
    const CMatrix expected = lu_solve(lu_factor(a, tol), b);
    const NullBasis empty{CMatrix(4, 0)};
    for (const SolveReport& rep :
         {solve_constrained(a, b, tol), solve_cramer_bordered(a, empty, b, tol),
          solve_cramer_condensed(a, empty, b, tol)}) {
      CHECK(rel_diff(rep.x, expected) <= 1e-10);
      CHECK(rep.residual_fro <= 1e-10);
    }
    // With no border the bordered rule is plain Cramer over M itself.
    const SolveReport br = solve_cramer_bordered(a, empty, b, tol);
    CHECK(std::abs(*br.determinant - det(a, tol)) <= 1e-12 * std::abs(det(a, tol)));
    // And the condensed matrix reduces to M M* M.
    const SolveReport cr = solve_cramer_condensed(a, empty, b, tol);
    const cplx d = det(a * conj_transpose(a) * a, tol);
    CHECK(std::abs(*cr.determinant - d) <= 1e-10 * std::abs(d));
  }

  SUBCASE("zero M") {
    const CMatrix z = CMatrix::zeros(3, 3);
    const CMatrix b = random_complex(3, 1, rng);
    for (SolveMethod m :
         {SolveMethod::Direct, SolveMethod::CramerBordered, SolveMethod::CramerCondensed}) {
      const SolveReport rep = solve(z, b, m, tol);
      CHECK(rep.x == CMatrix::zeros(3, 1));
      CHECK(rep.residual_fro == doctest::Approx(fro_norm(b)));
    }
  }
}

TEST_CASE("residual_floor") {
  const Tolerances tol;
  CHECK(residual_floor(kM, kB, tol) == doctest::Approx(1.0));
  CHECK(residual_floor(kM, CMatrix{{3}, {0}}, tol) <= 1e-15);
  const CMatrix b{{3}, {4}};
  CHECK(residual_floor(CMatrix::zeros(2, 2), b, tol) == doctest::Approx(5.0));
  CHECK_THROWS_AS(residual_floor(kM, CMatrix(3, 1), tol), DimensionError);
}

TEST_CASE("solver errors") {
  const Tolerances tol;
  const CMatrix nil{{0, 1}, {0, 0}};
  for (SolveMethod m :
       {SolveMethod::Direct, SolveMethod::CramerBordered, SolveMethod::CramerCondensed}) {
    CHECK_THROWS_AS(solve(nil, kB, m, tol), IndexExceedsOne);
    CHECK_THROWS_AS(solve(generate_index2(6, 3), CMatrix(6, 1), m, tol), IndexExceedsOne);
    CHECK_THROWS_AS(solve(kM, CMatrix(3, 1), m, tol), DimensionError);
    CHECK_THROWS_AS(solve(kM, CMatrix(2, 2), m, tol), DimensionError);
  }
  CHECK_THROWS_AS(solve_cramer_bordered(nil, kL, kB, tol), IndexExceedsOne);
  CHECK_THROWS_AS(solve_cramer_condensed(nil, kL, kB, tol), IndexExceedsOne);

  Tolerances small = tol;
  small.cramer_max_dim = 1;
  CHECK_THROWS_AS(solve(kM, kB, SolveMethod::CramerBordered, small),
                  DimensionTooLargeForDeterminantal);
  CHECK_THROWS_AS(solve_cramer_condensed(kM, kL, kB, small), DimensionTooLargeForDeterminantal);
  CHECK_NOTHROW(solve(kM, kB, SolveMethod::Direct, small));
}

TEST_CASE("solver properties over generated instances") {
  const Tolerances tol;
  std::mt19937_64 rng(314);
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t r = 0; r < n; ++r) {
      CAPTURE(n);
      CAPTURE(r);
      const Instance inst = generate_index1({n, r, 9000 + 19 * n + r, 100.0});
      const CMatrix b = random_complex(n, 1, rng);
      const NullBasis l = null_basis(inst.m, tol);
      const SolveReport reports[] = {solve_constrained(inst.m, b, tol),
                                     solve_cramer_bordered(inst.m, l, b, tol),
                                     solve_cramer_condensed(inst.m, l, b, tol)};
      const double floor = residual_floor(inst.m, b, tol);

      CHECK(rel_diff(reports[0].x, inst.known_core_inverse * b) <= 1e-8);
      for (const SolveReport& rep : reports) {
        CHECK(rel_diff(rep.x, reports[0].x) <= 1e-6);
        CHECK(std::abs(rep.residual_fro - floor) <= 1e-8 * (1.0 + fro_norm(b)));
        CHECK(rep.in_range_defect <= 1e-8 * (1.0 + fro_norm(rep.x)));
      }

      // x minimises over R(M): stepping along M*delta never helps.
      const SolveReport& best = reports[0];
      for (int k = 0; k < 50; ++k) {
        CMatrix delta = random_complex(n, 1, rng);
        delta *= 1e-2 / fro_norm(delta);
        const CMatrix moved = best.x + inst.m * delta;
        CHECK(fro_norm(inst.m * moved - b) >= best.residual_fro - 1e-10);
      }

      // Consistent right-hand sides are solved exactly.
      const CMatrix consistent = inst.m * random_complex(n, 1, rng);
      const SolveReport exact = solve_constrained(inst.m, consistent, tol);
      CHECK(exact.residual_fro <= 1e-8 * (1.0 + fro_norm(consistent)));
    }
  }
}
