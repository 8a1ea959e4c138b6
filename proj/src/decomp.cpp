#include "coreinv/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coreinv/errors.hpp"

namespace coreinv {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (!m.is_square()) {
    throw DimensionError(std::string(what) + " needs a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

struct RangeSplit {
  CMatrix q;  // unitary; leading r columns span R(M)
  CMatrix r_factor;
  std::vector<std::size_t> perm;
  std::size_t r = 0;
};

RangeSplit range_split(const CMatrix& m, const Tolerances& tol) {
  QRFactors qr = householder_qr(m, Pivoting::Column);
  const std::size_t r = rank_from_r(qr.r, tol.rank_rtol);
  return {std::move(qr.q), std::move(qr.r), std::move(qr.perm), r};
}

// |r_00| of a column-pivoted QR of m: its largest column norm.
double pivot_scale(const CMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) sq += std::norm(m(i, j));
    best = std::max(best, sq);
  }
  return std::sqrt(best);
}

// Rank of m^p with the threshold scaled by the p-th power of m's own scale,
// so rounding noise in a power of a nilpotent part does not read as rank.
std::size_t power_rank(const CMatrix& power, std::size_t p, double scale, const Tolerances& tol) {
  return rank_from_r(householder_qr(power, Pivoting::Column).r, tol.rank_rtol,
                     std::pow(scale, static_cast<double>(p)));
}

}  // namespace

std::size_t rank(const CMatrix& m, const Tolerances& tol) {
  return rank_from_r(householder_qr(m, Pivoting::Column).r, tol.rank_rtol);
}

IndexResult index_of(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "index");
  const std::size_t n = m.rows();
  IndexResult result;
  const double scale = pivot_scale(m);
  std::size_t previous = n;
  CMatrix power = m;
  for (std::size_t p = 1; p <= n + 1; ++p) {
    const std::size_t r = power_rank(power, p, scale, tol);
    result.rank_sequence.push_back(r);
    if (r == previous) {
      result.k = p - 1;
      return result;
    }
    previous = r;
    power = matmul(power, m);
  }
  // Unreachable in exact terms: ranks are a non-increasing sequence in [0, n].
  result.k = n;
  return result;
}

CMatrix CoreDecomposition::reassemble() const {
  const std::size_t n = v.rows();
  CMatrix top = hstack(t, s);
  CMatrix block(n, n);
  block.set_block(0, 0, top);
  return v * block * conj_transpose(v);
}

CoreDecomposition core_decomposition(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "core decomposition");
  const std::size_t n = m.rows();
  RangeSplit split = range_split(m, tol);
  const std::size_t r = split.r;

  CoreDecomposition d;
  d.r = r;
  d.v = std::move(split.q);
  const CMatrix v1 = d.v.leading_cols(r);
  const CMatrix v2 = d.v.trailing_cols(n - r);
  const CMatrix v1_star = conj_transpose(v1);
  const CMatrix v1_star_m = v1_star * m;
  d.t = v1_star_m * v1;
  d.s = v1_star_m * v2;

  if (r > 0) {
    const QRFactors tqr = householder_qr(d.t, Pivoting::Column);
    // Judged against M: T can be pure rounding noise when M is nilpotent.
    if (rank_from_r(tqr.r, tol.rank_rtol, std::abs(split.r_factor(0, 0))) < r) {
      throw IndexExceedsOne("T block is singular: rank(M^2) < rank(M), index exceeds one");
    }
  }
  return d;
}

NullBasis null_basis(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "null basis");
  RangeSplit split = range_split(m, tol);
  return {split.q.trailing_cols(m.rows() - split.r)};
}

FullRankFactors full_rank_factorization(const CMatrix& m, const Tolerances& tol) {
  RangeSplit split = range_split(m, tol);
  const std::size_t r = split.r;
  // m(:, perm) = Q R  =>  m = Q1 * (R1 P^T), with R1 the leading r rows of R.
  CMatrix f = split.q.leading_cols(r);
  CMatrix g(r, m.cols());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      g(i, split.perm[j]) = split.r_factor(i, j);
    }
  }
  return {std::move(f), std::move(g)};
}

void require_index_at_most_one(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "index check");
  const std::size_t r1 = rank(m, tol);
  if (r1 == m.rows()) {
    return;
  }
  const std::size_t r2 = power_rank(m * m, 2, pivot_scale(m), tol);
  if (r2 != r1) {
    throw IndexExceedsOne("rank(M^2) = " + std::to_string(r2) + " < rank(M) = " +
                          std::to_string(r1) + ", index exceeds one");
  }
}

}  // namespace coreinv
