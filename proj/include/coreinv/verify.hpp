#pragma once

// Defining-equation checks for candidate inverses, projector checks, and
// seeded generators of test instances with a known core inverse.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coreinv/matrix.hpp"

namespace coreinv {

enum class InverseKind { MoorePenrose, Group, Core, OneTwoInverse, Projector };

std::string_view to_string(InverseKind kind);
std::optional<InverseKind> parse_inverse_kind(std::string_view name);

struct VerifyReport {
  InverseKind kind = InverseKind::Core;
  // Equation label -> Frobenius-norm residual, in a fixed order per kind.
  std::vector<std::pair<std::string, double>> residuals;
  bool pass = false;
  double tolerance_used = 0.0;
  // Residuals pass when <= max(verify_atol, tolerance_used * scale).
  double scale = 1.0;

  double max_residual() const;
  // Label of the largest residual; empty when there are none.
  std::string worst() const;
};

// Core: MXM-M, MX^2-X, (MX)*-MX. Group: MXM-M, XMX-X, MX-XM.
// MoorePenrose: all four Penrose residuals. OneTwoInverse: MXM-M, XMX-X.
VerifyReport check_inverse(const CMatrix& m, const CMatrix& x, InverseKind kind,
                           const Tolerances& tol);

VerifyReport check_projector(const CMatrix& p, const Tolerances& tol, bool hermitian_required);

struct InstanceSpec {
  std::size_t n = 2;
  std::size_t r = 1;
  std::uint64_t seed = 0;
  // Singular values of T are spread log-uniformly over
  // [1/sqrt(condition_target), sqrt(condition_target)].
  double condition_target = 10.0;
};

struct Instance {
  CMatrix m;
  CMatrix known_core_inverse;
};

// M = V [[T, S], [0, 0]] V* assembled from seeded V, T, S, so that
// V [[T^-1, 0], [0, 0]] V* is its core inverse independently of any solver.
// Uses std::mt19937_64; bit-identical per seed on one platform.
Instance generate_index1(const InstanceSpec& spec);

// W diag(J, T) W* with J a nilpotent Jordan block of size >= 2, so the
// result has index >= 2. Requires n >= 2.
CMatrix generate_index2(std::size_t n, std::uint64_t seed);

// Entries with independent standard normal real and imaginary parts.
CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

// Q factor of a random complex Gaussian matrix, phases fixed so the result
// is Haar distributed.
CMatrix random_unitary(std::size_t n, std::mt19937_64& rng);

}  // namespace coreinv
