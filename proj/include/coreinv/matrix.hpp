#pragma once

// Dense complex matrices and the factorizations everything else is built on.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace coreinv {

using cplx = std::complex<double>;

// Thresholds controlling every floating-point decision.
struct Tolerances {
  // Relative threshold for declaring a pivot or R diagonal zero.
  double rank_rtol = 1e-10;
  // Absolute floor for residual checks.
  double verify_atol = 1e-12;
  // Relative residual scale for verification.
  double verify_rtol = 1e-8;
  // Largest n admitted on determinant-ratio (Cramer) paths.
  std::size_t cramer_max_dim = 32;

  // Throws std::invalid_argument unless all thresholds are positive and rank_rtol < 1.
  void validate() const;
};

// Row-major dense complex matrix. Zero-row and zero-column shapes are legal.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  // Throws DimensionError on a size mismatch and std::invalid_argument on NaN/Inf.
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix column(std::span<const cplx> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return data_; }

  CMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const CMatrix& src);
  CMatrix col(std::size_t j) const { return block(0, j, rows_, 1); }
  CMatrix leading_cols(std::size_t k) const { return block(0, 0, rows_, k); }
  CMatrix trailing_cols(std::size_t k) const { return block(0, cols_ - k, rows_, k); }

  bool all_finite() const noexcept;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix conj_transpose(const CMatrix& a);

// Copy of `a` with column `i` (zero-based) replaced by the n x 1 matrix `v`.
CMatrix column_replace(const CMatrix& a, std::size_t i, const CMatrix& v);

// [a | b] and [a ; b].
CMatrix hstack(const CMatrix& a, const CMatrix& b);
CMatrix vstack(const CMatrix& a, const CMatrix& b);

struct Norms {
  double fro = 0.0;
  double max_abs = 0.0;
};

Norms norms(const CMatrix& a);
double fro_norm(const CMatrix& a);

// Partial-pivoting LU. Row i of P*A is row permutation[i] of A; the strictly
// lower part of combined_lu holds the unit-lower factor, the rest holds U.
struct LUFactors {
  std::vector<std::size_t> permutation;
  CMatrix combined_lu;
  int sign = 1;
  bool singular = false;
  // Smallest accepted pivot modulus (infinity for 0x0, 0 when singular).
  double min_pivot = 0.0;
  // Singularity threshold the factorization was run against.
  double pivot_threshold = 0.0;
};

LUFactors lu_factor(const CMatrix& a, const Tolerances& tol);
cplx det(const LUFactors& f);
cplx det(const CMatrix& a, const Tolerances& tol);
// Throws SingularSystem when f.singular is set.
CMatrix lu_solve(const LUFactors& f, const CMatrix& rhs);
CMatrix inverse(const CMatrix& a, const Tolerances& tol);

enum class Pivoting { None, Column };

// Householder QR with full square Q: a(:, perm) = q * r.
struct QRFactors {
  CMatrix q;
  CMatrix r;
  std::vector<std::size_t> perm;
};

QRFactors householder_qr(const CMatrix& a, Pivoting pivoting);

// Number of diagonal entries of r with |r_kk| > rank_rtol * |r_00|.
std::size_t rank_from_r(const CMatrix& r, double rank_rtol);

// Same count against rank_rtol * scale, for factors whose size must be judged
// relative to another matrix (a block of M, or a power of M).
std::size_t rank_from_r(const CMatrix& r, double rank_rtol, double scale);

}  // namespace coreinv
