#pragma once

// Rank, index, and the unitary block decomposition M = V [[T, S], [0, 0]] V*.

#include <cstddef>
#include <vector>

#include "coreinv/matrix.hpp"

namespace coreinv {

/// Numerical rank from the diagonal of a column-pivoted QR.
std::size_t rank(const CMatrix& m, const Tolerances& tol);

struct IndexResult {
  /// Smallest k >= 0 with rank(M^{k+1}) == rank(M^k).
  std::size_t k = 0;
  /// Ranks of M, M^2, ... up to and including the first repeat.
  std::vector<std::size_t> rank_sequence;
};

/// Index by explicit powering; terminates within n + 1 powers.
IndexResult index_of(const CMatrix& m, const Tolerances& tol);

/// M = V [[T, S], [0, 0]] V* with V unitary and T nonsingular.
///
/// The first r columns of V are an orthonormal basis of R(M) and the trailing
/// n - r columns an orthonormal basis of N(M*). V is not unique, so callers
/// should only rely on the reconstruction, never on individual entries.
struct CoreDecomposition {
  CMatrix v;
  CMatrix t;
  CMatrix s;
  std::size_t r = 0;

  CMatrix range_basis() const { return v.leading_cols(r); }
  CMatrix null_basis() const { return v.trailing_cols(v.cols() - r); }
  CMatrix reassemble() const;
};

/// Throws IndexExceedsOne when T is singular at tolerance.
CoreDecomposition core_decomposition(const CMatrix& m, const Tolerances& tol);

/// Basis L of N(M*). Produced orthonormal here, but every consumer accepts
/// any full-column-rank L with R(L) = N(M*).
struct NullBasis {
  CMatrix basis;
};

NullBasis null_basis(const CMatrix& m, const Tolerances& tol);

/// m = f * g with f full column rank and g full row rank.
struct FullRankFactors {
  CMatrix f;
  CMatrix g;
};

FullRankFactors full_rank_factorization(const CMatrix& m, const Tolerances& tol);

/// Throws IndexExceedsOne unless rank(M^2) == rank(M). Does not touch the
/// decomposition, so methods that avoid V can gate on it independently.
void require_index_at_most_one(const CMatrix& m, const Tolerances& tol);

}  // namespace coreinv
