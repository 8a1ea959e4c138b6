#pragma once

// Minimize ||Mx - b||_F subject to x in R(M), for M of index at most one.
// The unique minimizer is x = M#core b; three routes compute it.

#include <optional>
#include <string_view>
#include <vector>

#include "coreinv/decomp.hpp"
#include "coreinv/matrix.hpp"

namespace coreinv {

enum class SolveMethod {
  Direct,           // x = M#core b
  CramerBordered,   // determinant ratios over G = [[M, L], [L*, 0]]
  CramerCondensed,  // determinant ratios over M M* M + L L*
};

std::string_view to_string(SolveMethod method);
std::optional<SolveMethod> parse_solve_method(std::string_view name);

struct SolveReport {
  CMatrix x;
  double residual_fro = 0.0;
  SolveMethod method = SolveMethod::Direct;
  // ||M M^+ x - x||_F
  double in_range_defect = 0.0;
  // ||(I - M M^+) b||_F, the analytic minimum.
  double min_residual_reference = 0.0;
  // Cramer routes only: the common denominator and per-entry numerators.
  std::optional<cplx> determinant;
  std::vector<cplx> numerators;
};

SolveReport solve_constrained(const CMatrix& m, const CMatrix& b, const Tolerances& tol);
SolveReport solve_cramer_bordered(const CMatrix& m, const NullBasis& l, const CMatrix& b,
                                  const Tolerances& tol);
SolveReport solve_cramer_condensed(const CMatrix& m, const NullBasis& l, const CMatrix& b,
                                   const Tolerances& tol);

// Dispatch; Cramer routes use the computed orthonormal basis of N(M*).
SolveReport solve(const CMatrix& m, const CMatrix& b, SolveMethod method, const Tolerances& tol);

double residual_floor(const CMatrix& m, const CMatrix& b, const Tolerances& tol);

}  // namespace coreinv
