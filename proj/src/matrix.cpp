#include "coreinv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "coreinv/errors.hpp"

namespace coreinv {

namespace {

std::string shape(const CMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace

void Tolerances::validate() const {
  if (!(rank_rtol > 0.0 && rank_rtol < 1.0)) {
    throw std::invalid_argument("rank_rtol must lie in (0, 1)");
  }
  if (!(verify_atol > 0.0) || !(verify_rtol > 0.0)) {
    throw std::invalid_argument("verification tolerances must be positive");
  }
  if (cramer_max_dim == 0) {
    throw std::invalid_argument("cramer_max_dim must be positive");
  }
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  if (!all_finite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionError("ragged initializer list");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    id(i, i) = 1.0;
  }
  return id;
}

CMatrix CMatrix::column(std::span<const cplx> values) {
  return CMatrix(values.size(), 1, std::vector<cplx>(values.begin(), values.end()));
}

CMatrix CMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                       std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw DimensionError("block out of range of " + shape(*this));
  }
  CMatrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      out(i, j) = (*this)(row0 + i, col0 + j);
    }
  }
  return out;
}

void CMatrix::set_block(std::size_t row0, std::size_t col0, const CMatrix& src) {
  if (row0 + src.rows() > rows_ || col0 + src.cols() > cols_) {
    throw DimensionError("block " + shape(src) + " does not fit in " + shape(*this));
  }
  for (std::size_t i = 0; i < src.rows(); ++i) {
    for (std::size_t j = 0; j < src.cols(); ++j) {
      (*this)(row0 + i, col0 + j) = src(i, j);
    }
  }
}

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionError("cannot add " + shape(other) + " to " + shape(*this));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] += other.data_[k];
  }
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionError("cannot subtract " + shape(other) + " from " + shape(*this));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] -= other.data_[k];
  }
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) {
    z *= s;
  }
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + shape(a) + " by " + shape(b));
  }
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

CMatrix conj_transpose(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = std::conj(a(i, j));
    }
  }
  return out;
}

CMatrix column_replace(const CMatrix& a, std::size_t i, const CMatrix& v) {
  if (i >= a.cols()) {
    throw DimensionError("column index " + std::to_string(i) + " out of range for " + shape(a));
  }
  if (v.rows() != a.rows() || v.cols() != 1) {
    throw DimensionError("replacement column " + shape(v) + " does not fit " + shape(a));
  }
  CMatrix out = a;
  out.set_block(0, i, v);
  return out;
}

CMatrix hstack(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hstack of " + shape(a) + " and " + shape(b));
  }
  CMatrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

CMatrix vstack(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("vstack of " + shape(a) + " and " + shape(b));
  }
  CMatrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

Norms norms(const CMatrix& a) {
  Norms n;
  double sum = 0.0;
  for (const cplx& z : a.entries()) {
    const double m = std::abs(z);
    sum += m * m;
    n.max_abs = std::max(n.max_abs, m);
  }
  n.fro = std::sqrt(sum);
  return n;
}

double fro_norm(const CMatrix& a) { return norms(a).fro; }

LUFactors lu_factor(const CMatrix& a, const Tolerances& tol) {
  if (!a.is_square()) {
    throw DimensionError("LU of non-square " + shape(a));
  }
  const std::size_t n = a.rows();
  LUFactors f;
  f.combined_lu = a;
  f.permutation.resize(n);
  std::iota(f.permutation.begin(), f.permutation.end(), std::size_t{0});
  f.min_pivot = std::numeric_limits<double>::infinity();
  f.pivot_threshold = tol.rank_rtol * norms(a).max_abs;

  CMatrix& lu = f.combined_lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = std::abs(lu(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (best <= f.pivot_threshold) {
      // Column is (numerically) eliminated already; leave it and move on.
      f.singular = true;
      f.min_pivot = 0.0;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(k, j), lu(p, j));
      }
      std::swap(f.permutation[k], f.permutation[p]);
      f.sign = -f.sign;
    }
    f.min_pivot = std::min(f.min_pivot, best);
    const cplx pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = lu(i, k) / pivot;
      lu(i, k) = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) {
        lu(i, j) -= l * lu(k, j);
      }
    }
  }
  return f;
}

cplx det(const LUFactors& f) {
  if (f.singular) {
    return {0.0, 0.0};
  }
  cplx d = static_cast<double>(f.sign);
  for (std::size_t k = 0; k < f.combined_lu.rows(); ++k) {
    d *= f.combined_lu(k, k);
  }
  return d;
}

cplx det(const CMatrix& a, const Tolerances& tol) { return det(lu_factor(a, tol)); }

CMatrix lu_solve(const LUFactors& f, const CMatrix& rhs) {
  const CMatrix& lu = f.combined_lu;
  const std::size_t n = lu.rows();
  if (rhs.rows() != n) {
    throw DimensionError("right-hand side " + shape(rhs) + " does not match " + shape(lu));
  }
  if (f.singular) {
    throw SingularSystem("LU factorization is singular at tolerance");
  }
  const std::size_t m = rhs.cols();
  CMatrix x(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      x(i, j) = rhs(f.permutation[i], j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const cplx l = lu(i, k);
      if (l == cplx{}) continue;
      for (std::size_t j = 0; j < m; ++j) {
        x(i, j) -= l * x(k, j);
      }
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const cplx u = lu(ii, k);
      if (u == cplx{}) continue;
      for (std::size_t j = 0; j < m; ++j) {
        x(ii, j) -= u * x(k, j);
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      x(ii, j) /= lu(ii, ii);
    }
  }
  return x;
}

CMatrix inverse(const CMatrix& a, const Tolerances& tol) {
  return lu_solve(lu_factor(a, tol), CMatrix::identity(a.rows()));
}

QRFactors householder_qr(const CMatrix& a, Pivoting pivoting) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  QRFactors f{CMatrix::identity(m), a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  CMatrix& r = f.r;
  CMatrix& q = f.q;

  std::vector<cplx> v(m);
  const std::size_t steps = std::min(m, n);
  for (std::size_t k = 0; k < steps; ++k) {
    if (pivoting == Pivoting::Column) {
      // Column norms are recomputed each step; n is small and this avoids
      // the cancellation problems of downdating.
      std::size_t best_col = k;
      double best = -1.0;
      for (std::size_t j = k; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) {
          s += std::norm(r(i, j));
        }
        if (s > best) {
          best = s;
          best_col = j;
        }
      }
      if (best_col != k) {
        for (std::size_t i = 0; i < m; ++i) {
          std::swap(r(i, k), r(i, best_col));
        }
        std::swap(f.perm[k], f.perm[best_col]);
      }
    }

    double below2 = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) {
      below2 += std::norm(r(i, k));
    }
    if (below2 == 0.0) {
      // Already upper triangular in this column: H = I.
      continue;
    }
    const double xnorm = std::sqrt(below2 + std::norm(r(k, k)));
    const cplx x0 = r(k, k);
    const cplx phase = std::abs(x0) == 0.0 ? cplx{1.0, 0.0} : x0 / std::abs(x0);
    const cplx alpha = -phase * xnorm;

    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      v[i] = r(i, k);
    }
    v[k] -= alpha;
    for (std::size_t i = k; i < m; ++i) {
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) {
      continue;
    }
    const double beta = 2.0 / vnorm2;

    // r <- (I - beta v v*) r on rows k.., columns k+1..
    for (std::size_t j = k + 1; j < n; ++j) {
      cplx s{};
      for (std::size_t i = k; i < m; ++i) {
        s += std::conj(v[i]) * r(i, j);
      }
      s *= beta;
      for (std::size_t i = k; i < m; ++i) {
        r(i, j) -= s * v[i];
      }
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) {
      r(i, k) = 0.0;
    }

    // q <- q (I - beta v v*)
    for (std::size_t i = 0; i < m; ++i) {
      cplx s{};
      for (std::size_t l = k; l < m; ++l) {
        s += q(i, l) * v[l];
      }
      s *= beta;
      for (std::size_t l = k; l < m; ++l) {
        q(i, l) -= s * std::conj(v[l]);
      }
    }
  }
  return f;
}

std::size_t rank_from_r(const CMatrix& r, double rank_rtol) {
  if (std::min(r.rows(), r.cols()) == 0) {
    return 0;
  }
  return rank_from_r(r, rank_rtol, std::abs(r(0, 0)));
}

std::size_t rank_from_r(const CMatrix& r, double rank_rtol, double scale) {
  if (scale == 0.0) {
    return 0;
  }
  const double threshold = rank_rtol * scale;
  const std::size_t steps = std::min(r.rows(), r.cols());
  std::size_t rank = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (std::abs(r(k, k)) > threshold) {
      ++rank;
    } else {
      break;
    }
  }
  return rank;
}

}  // namespace coreinv
