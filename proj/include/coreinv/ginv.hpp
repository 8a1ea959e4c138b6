#pragma once

// Moore-Penrose, group, and core inverses; the bordered matrix
// G = [[M, L], [L*, 0]] and its block inverse.

#include <cstddef>
#include <optional>
#include <string_view>

#include "coreinv/decomp.hpp"
#include "coreinv/matrix.hpp"

namespace coreinv {

/// Independent routes to the core inverse.
enum class CoreInverseMethod {
  Decomposition,  // V [[T^-1, 0], [0, 0]] V*
  BorderedBlock,  // leading n x n block of G^-1, G inverted densely
  ClosedForm,     // (M M* M + L L*)^-1 M M*
  Determinantal,  // entrywise determinant ratios of M M* M + L L*
};

inline constexpr CoreInverseMethod kAllCoreInverseMethods[] = {
    CoreInverseMethod::Decomposition, CoreInverseMethod::BorderedBlock,
    CoreInverseMethod::ClosedForm, CoreInverseMethod::Determinantal};

std::string_view to_string(CoreInverseMethod method);
std::optional<CoreInverseMethod> parse_core_inverse_method(std::string_view name);

/// Pseudoinverse from a full-rank factorization M = F G:
/// M^+ = G* (G G*)^-1 (F* F)^-1 F*.
CMatrix moore_penrose(const CMatrix& m, const Tolerances& tol);

/// V [[T^-1, T^-2 S], [0, 0]] V*. Throws IndexExceedsOne.
CMatrix group_inverse(const CMatrix& m, const Tolerances& tol);

/// Throws IndexExceedsOne; Determinantal also throws
/// DimensionTooLargeForDeterminantal when n > tol.cramer_max_dim.
CMatrix core_inverse(const CMatrix& m, CoreInverseMethod method, const Tolerances& tol);

/// Same, with a caller-supplied basis L of N(M*) for the methods that use one.
CMatrix core_inverse(const CMatrix& m, const NullBasis& l, CoreInverseMethod method,
                     const Tolerances& tol);

/// M^# M M^+, used as an extra oracle.
CMatrix core_inverse_via_identity(const CMatrix& m, const Tolerances& tol);

/// M M* M + L L*, the n x n matrix behind the closed-form and condensed rules.
CMatrix condensed_matrix(const CMatrix& m, const NullBasis& l);

struct BorderedSystem {
  CMatrix g;
  std::size_t n = 0;       // size of the M block
  std::size_t border = 0;  // number of columns of L
};

BorderedSystem bordered_matrix(const CMatrix& m, const NullBasis& l);

/// G^-1 assembled blockwise:
/// [[M#core, (I - M#core M) L (L* L)^-1], [(L* L)^-1 L*, 0]].
CMatrix bordered_inverse(const CMatrix& m, const NullBasis& l, const Tolerances& tol);

struct ProjectorPair {
  CMatrix xm;  // P_{R(X), N(M)}
  CMatrix mx;  // P_{R(M), N(X)}
};

/// Throws NotAOneTwoInverse unless MXM = M and XMX = X at tolerance.
ProjectorPair projectors(const CMatrix& m, const CMatrix& x, const Tolerances& tol);

/// || M#core M + (I - M#core M) L (L* L)^-1 L* - I ||_F.
double resolution_identity_check(const CMatrix& m, const NullBasis& l, const Tolerances& tol);

}  // namespace coreinv
