#include "coreinv/ginv.hpp"

#include <algorithm>
#include <string>

#include "coreinv/errors.hpp"

namespace coreinv {

namespace {

void require_square(const CMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

void require_border_shape(const CMatrix& m, const NullBasis& l) {
  if (l.basis.rows() != m.rows()) {
    throw DimensionError("L has " + std::to_string(l.basis.rows()) + " rows, M has " +
                         std::to_string(m.rows()));
  }
}

// (L* L)^-1 L*
CMatrix left_inverse_of_basis(const CMatrix& l, const Tolerances& tol) {
  const CMatrix l_star = conj_transpose(l);
  return lu_solve(lu_factor(l_star * l, tol), l_star);
}

CMatrix core_inverse_decomposition(const CMatrix& m, const Tolerances& tol) {
  const CoreDecomposition d = core_decomposition(m, tol);
  const CMatrix v1 = d.range_basis();
  const CMatrix t_inv = inverse(d.t, tol);
  return v1 * t_inv * conj_transpose(v1);
}

CMatrix core_inverse_bordered(const CMatrix& m, const NullBasis& l, const Tolerances& tol) {
  require_index_at_most_one(m, tol);
  const BorderedSystem sys = bordered_matrix(m, l);
  const LUFactors f = lu_factor(sys.g, tol);
  if (f.singular) {
    throw SingularSystem("bordered matrix G is singular at tolerance; is R(L) = N(M*)?");
  }
  // Only the leading n columns of G^-1 are needed.
  CMatrix rhs(sys.g.rows(), sys.n);
  rhs.set_block(0, 0, CMatrix::identity(sys.n));
  return lu_solve(f, rhs).block(0, 0, sys.n, sys.n);
}

CMatrix core_inverse_closed_form(const CMatrix& m, const NullBasis& l, const Tolerances& tol) {
  require_index_at_most_one(m, tol);
  const LUFactors f = lu_factor(condensed_matrix(m, l), tol);
  return lu_solve(f, m * conj_transpose(m));
}

CMatrix core_inverse_determinantal(const CMatrix& m, const NullBasis& l, const Tolerances& tol) {
  const std::size_t n = m.rows();
  if (n > tol.cramer_max_dim) {
    throw DimensionTooLargeForDeterminantal("n = " + std::to_string(n) +
                                            " exceeds cramer_max_dim = " +
                                            std::to_string(tol.cramer_max_dim));
  }
  require_index_at_most_one(m, tol);
  const CMatrix a = condensed_matrix(m, l);
  const CMatrix mm_star = m * conj_transpose(m);
  const cplx denominator = det(a, tol);
  if (denominator == cplx{}) {
    throw SingularSystem("M M* M + L L* is singular at tolerance");
  }
  CMatrix x(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const CMatrix rhs = mm_star.col(j);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, j) = det(column_replace(a, i, rhs), tol) / denominator;
    }
  }
  return x;
}

}  // namespace

std::string_view to_string(CoreInverseMethod method) {
  switch (method) {
    case CoreInverseMethod::Decomposition:
      return "decomp";
    case CoreInverseMethod::BorderedBlock:
      return "bordered";
    case CoreInverseMethod::ClosedForm:
      return "closed";
    case CoreInverseMethod::Determinantal:
      return "determinantal";
  }
  return "unknown";
}

std::optional<CoreInverseMethod> parse_core_inverse_method(std::string_view name) {
  for (CoreInverseMethod method : kAllCoreInverseMethods) {
    if (to_string(method) == name) {
      return method;
    }
  }
  return std::nullopt;
}

CMatrix moore_penrose(const CMatrix& m, const Tolerances& tol) {
  const FullRankFactors fg = full_rank_factorization(m, tol);
  const CMatrix f_star = conj_transpose(fg.f);
  const CMatrix g_star = conj_transpose(fg.g);
  const CMatrix inner = lu_solve(lu_factor(f_star * fg.f, tol), f_star);
  return g_star * lu_solve(lu_factor(fg.g * g_star, tol), inner);
}

CMatrix group_inverse(const CMatrix& m, const Tolerances& tol) {
  const CoreDecomposition d = core_decomposition(m, tol);
  const std::size_t n = m.rows();
  const LUFactors tf = lu_factor(d.t, tol);
  const CMatrix t_inv = lu_solve(tf, CMatrix::identity(d.r));
  const CMatrix t_inv2_s = lu_solve(tf, lu_solve(tf, d.s));
  CMatrix block(n, n);
  block.set_block(0, 0, t_inv);
  block.set_block(0, d.r, t_inv2_s);
  return d.v * block * conj_transpose(d.v);
}

CMatrix core_inverse(const CMatrix& m, CoreInverseMethod method, const Tolerances& tol) {
  require_square(m);
  if (method == CoreInverseMethod::Decomposition) {
    return core_inverse_decomposition(m, tol);
  }
  if (method == CoreInverseMethod::Determinantal && m.rows() > tol.cramer_max_dim) {
    // Fail the dimension gate before spending a factorization on L.
    return core_inverse_determinantal(m, NullBasis{}, tol);
  }
  return core_inverse(m, null_basis(m, tol), method, tol);
}

CMatrix core_inverse(const CMatrix& m, const NullBasis& l, CoreInverseMethod method,
                     const Tolerances& tol) {
  require_square(m);
  switch (method) {
    case CoreInverseMethod::Decomposition:
      return core_inverse_decomposition(m, tol);
    case CoreInverseMethod::BorderedBlock:
      require_border_shape(m, l);
      return core_inverse_bordered(m, l, tol);
    case CoreInverseMethod::ClosedForm:
      require_border_shape(m, l);
      return core_inverse_closed_form(m, l, tol);
    case CoreInverseMethod::Determinantal:
      if (m.rows() <= tol.cramer_max_dim) require_border_shape(m, l);
      return core_inverse_determinantal(m, l, tol);
  }
  throw Error("unknown core inverse method");
}

CMatrix core_inverse_via_identity(const CMatrix& m, const Tolerances& tol) {
  return group_inverse(m, tol) * m * moore_penrose(m, tol);
}

CMatrix condensed_matrix(const CMatrix& m, const NullBasis& l) {
  require_square(m);
  require_border_shape(m, l);
  return m * conj_transpose(m) * m + l.basis * conj_transpose(l.basis);
}

BorderedSystem bordered_matrix(const CMatrix& m, const NullBasis& l) {
  require_square(m);
  require_border_shape(m, l);
  const std::size_t n = m.rows();
  const std::size_t k = l.basis.cols();
  BorderedSystem sys{CMatrix(n + k, n + k), n, k};
  sys.g.set_block(0, 0, m);
  sys.g.set_block(0, n, l.basis);
  sys.g.set_block(n, 0, conj_transpose(l.basis));
  return sys;
}

CMatrix bordered_inverse(const CMatrix& m, const NullBasis& l, const Tolerances& tol) {
  require_square(m);
  require_border_shape(m, l);
  const std::size_t n = m.rows();
  const std::size_t k = l.basis.cols();
  const CMatrix core = core_inverse_decomposition(m, tol);
  const CMatrix l_left = left_inverse_of_basis(l.basis, tol);
  // L (L* L)^-1 is the conjugate transpose of (L* L)^-1 L*.
  const CMatrix l_right = conj_transpose(l_left);

  CMatrix g_inv(n + k, n + k);
  g_inv.set_block(0, 0, core);
  g_inv.set_block(0, n, (CMatrix::identity(n) - core * m) * l_right);
  g_inv.set_block(n, 0, l_left);
  return g_inv;
}

ProjectorPair projectors(const CMatrix& m, const CMatrix& x, const Tolerances& tol) {
  if (x.rows() != m.cols() || x.cols() != m.rows()) {
    throw DimensionError("candidate inverse has the wrong shape");
  }
  const double scale = 1.0 + fro_norm(m) + fro_norm(x);
  const double bound = std::max(tol.verify_atol, tol.verify_rtol * scale);
  const CMatrix mx = m * x;
  const CMatrix xm = x * m;
  const double r1 = fro_norm(mx * m - m);
  const double r2 = fro_norm(xm * x - x);
  if (r1 > bound || r2 > bound) {
    throw NotAOneTwoInverse("X is not a {1,2}-inverse of M (residuals " + std::to_string(r1) +
                            ", " + std::to_string(r2) + ")");
  }
  return {xm, mx};
}

double resolution_identity_check(const CMatrix& m, const NullBasis& l, const Tolerances& tol) {
  require_square(m);
  require_border_shape(m, l);
  const std::size_t n = m.rows();
  const CMatrix core_m = core_inverse_decomposition(m, tol) * m;
  const CMatrix l_right = conj_transpose(left_inverse_of_basis(l.basis, tol));
  const CMatrix complement = (CMatrix::identity(n) - core_m) * l_right * conj_transpose(l.basis);
  return fro_norm(core_m + complement - CMatrix::identity(n));
}

}  // namespace coreinv
