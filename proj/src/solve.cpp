#include "coreinv/solve.hpp"

#include <string>

#include "coreinv/errors.hpp"
#include "coreinv/ginv.hpp"

namespace coreinv {

namespace {

void check_problem(const CMatrix& m, const CMatrix& b) {
  if (!m.is_square()) {
    throw DimensionError("M must be square");
  }
  if (b.rows() != m.rows() || b.cols() != 1) {
    throw DimensionError("b must be " + std::to_string(m.rows()) + "x1, got " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void check_cramer_gate(const CMatrix& m, const NullBasis& l, const Tolerances& tol) {
  if (m.rows() > tol.cramer_max_dim) {
    throw DimensionTooLargeForDeterminantal("n = " + std::to_string(m.rows()) +
                                            " exceeds cramer_max_dim = " +
                                            std::to_string(tol.cramer_max_dim));
  }
  if (l.basis.rows() != m.rows()) {
    throw DimensionError("L must have as many rows as M");
  }
}

CMatrix orthogonal_range_projector(const CMatrix& m, const Tolerances& tol) {
  return m * moore_penrose(m, tol);
}

SolveReport finish_report(const CMatrix& m, const CMatrix& b, CMatrix x, SolveMethod method,
                          const Tolerances& tol) {
  SolveReport report;
  const CMatrix proj = orthogonal_range_projector(m, tol);
  report.residual_fro = fro_norm(m * x - b);
  report.in_range_defect = fro_norm(proj * x - x);
  report.min_residual_reference = fro_norm(b - proj * b);
  report.method = method;
  report.x = std::move(x);
  return report;
}

// x_i = det(A(i -> rhs)) / det(A) for every i.
SolveReport cramer_ratios(const CMatrix& a, const CMatrix& rhs, std::size_t entries,
                          const Tolerances& tol) {
  const cplx denominator = det(a, tol);
  if (denominator == cplx{}) {
    throw SingularSystem("Cramer denominator vanishes at tolerance");
  }
  SolveReport partial;
  partial.determinant = denominator;
  partial.x = CMatrix(entries, 1);
  partial.numerators.reserve(entries);
  for (std::size_t i = 0; i < entries; ++i) {
    const cplx numerator = det(column_replace(a, i, rhs), tol);
    partial.numerators.push_back(numerator);
    partial.x(i, 0) = numerator / denominator;
  }
  return partial;
}

}  // namespace

std::string_view to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::Direct:
      return "direct";
    case SolveMethod::CramerBordered:
      return "cramer-bordered";
    case SolveMethod::CramerCondensed:
      return "cramer-condensed";
  }
  return "unknown";
}

std::optional<SolveMethod> parse_solve_method(std::string_view name) {
  for (SolveMethod method :
       {SolveMethod::Direct, SolveMethod::CramerBordered, SolveMethod::CramerCondensed}) {
    if (to_string(method) == name) {
      return method;
    }
  }
  return std::nullopt;
}

SolveReport solve_constrained(const CMatrix& m, const CMatrix& b, const Tolerances& tol) {
  check_problem(m, b);
  CMatrix x = core_inverse(m, CoreInverseMethod::Decomposition, tol) * b;
  return finish_report(m, b, std::move(x), SolveMethod::Direct, tol);
}

SolveReport solve_cramer_bordered(const CMatrix& m, const NullBasis& l, const CMatrix& b,
                                  const Tolerances& tol) {
  check_problem(m, b);
  check_cramer_gate(m, l, tol);
  require_index_at_most_one(m, tol);
  const BorderedSystem sys = bordered_matrix(m, l);
  // G(i -> [b; 0]) is exactly [[M(i -> b), L], [L*(i -> 0), 0]].
  CMatrix rhs(sys.g.rows(), 1);
  rhs.set_block(0, 0, b);
  SolveReport partial = cramer_ratios(sys.g, rhs, sys.n, tol);
  SolveReport report = finish_report(m, b, std::move(partial.x), SolveMethod::CramerBordered, tol);
  report.determinant = partial.determinant;
  report.numerators = std::move(partial.numerators);
  return report;
}

SolveReport solve_cramer_condensed(const CMatrix& m, const NullBasis& l, const CMatrix& b,
                                   const Tolerances& tol) {
  check_problem(m, b);
  check_cramer_gate(m, l, tol);
  require_index_at_most_one(m, tol);
  const CMatrix a = condensed_matrix(m, l);
  const CMatrix rhs = m * (conj_transpose(m) * b);
  SolveReport partial = cramer_ratios(a, rhs, m.rows(), tol);
  SolveReport report =
      finish_report(m, b, std::move(partial.x), SolveMethod::CramerCondensed, tol);
  report.determinant = partial.determinant;
  report.numerators = std::move(partial.numerators);
  return report;
}

SolveReport solve(const CMatrix& m, const CMatrix& b, SolveMethod method, const Tolerances& tol) {
  switch (method) {
    case SolveMethod::Direct:
      return solve_constrained(m, b, tol);
    case SolveMethod::CramerBordered:
    case SolveMethod::CramerCondensed: {
      check_problem(m, b);
      if (m.rows() > tol.cramer_max_dim) {
        check_cramer_gate(m, NullBasis{}, tol);
      }
      const NullBasis l = null_basis(m, tol);
      return method == SolveMethod::CramerBordered ? solve_cramer_bordered(m, l, b, tol)
                                                   : solve_cramer_condensed(m, l, b, tol);
    }
  }
  throw Error("unknown solve method");
}

double residual_floor(const CMatrix& m, const CMatrix& b, const Tolerances& tol) {
  if (!m.is_square() || b.rows() != m.rows()) {
    throw DimensionError("residual_floor needs square M and conformable b");
  }
  return fro_norm(b - orthogonal_range_projector(m, tol) * b);
}

}  // namespace coreinv
