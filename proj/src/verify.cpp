#include "coreinv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coreinv/errors.hpp"

namespace coreinv {

namespace {

VerifyReport finish(InverseKind kind, std::vector<std::pair<std::string, double>> residuals,
                    double scale, const Tolerances& tol) {
  VerifyReport report;
  report.kind = kind;
  report.residuals = std::move(residuals);
  report.tolerance_used = tol.verify_rtol;
  report.scale = scale;
  const double bound = std::max(tol.verify_atol, tol.verify_rtol * scale);
  report.pass = std::all_of(report.residuals.begin(), report.residuals.end(),
                            [bound](const auto& kv) { return kv.second <= bound; });
  return report;
}

// diag(sigma) with sigma log-uniform over [1/sqrt(c), sqrt(c)].
CMatrix random_singular_values(std::size_t r, double condition_target, std::mt19937_64& rng) {
  const double half_log = 0.5 * std::log(condition_target);
  std::uniform_real_distribution<double> unit(-half_log, half_log);
  CMatrix d(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    d(i, i) = std::exp(unit(rng));
  }
  // Pin the extremes so the requested spread is actually realised.
  if (r >= 2) {
    d(0, 0) = std::exp(half_log);
    d(r - 1, r - 1) = std::exp(-half_log);
  }
  return d;
}

}  // namespace

std::string_view to_string(InverseKind kind) {
  switch (kind) {
    case InverseKind::MoorePenrose:
      return "mp";
    case InverseKind::Group:
      return "group";
    case InverseKind::Core:
      return "core";
    case InverseKind::OneTwoInverse:
      return "onetwo";
    case InverseKind::Projector:
      return "projector";
  }
  return "unknown";
}

std::optional<InverseKind> parse_inverse_kind(std::string_view name) {
  for (InverseKind kind : {InverseKind::MoorePenrose, InverseKind::Group, InverseKind::Core,
                           InverseKind::OneTwoInverse, InverseKind::Projector}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

double VerifyReport::max_residual() const {
  double worst_value = 0.0;
  for (const auto& [label, value] : residuals) {
    worst_value = std::max(worst_value, value);
  }
  return worst_value;
}

std::string VerifyReport::worst() const {
  auto it = std::max_element(residuals.begin(), residuals.end(),
                             [](const auto& a, const auto& b) { return a.second < b.second; });
  return it == residuals.end() ? std::string{} : it->first;
}

VerifyReport check_inverse(const CMatrix& m, const CMatrix& x, InverseKind kind,
                           const Tolerances& tol) {
  if (x.rows() != m.cols() || x.cols() != m.rows()) {
    throw DimensionError("candidate X must be " + std::to_string(m.cols()) + "x" +
                         std::to_string(m.rows()));
  }
  const bool square_required = kind == InverseKind::Core || kind == InverseKind::Group;
  if (square_required && !m.is_square()) {
    throw DimensionError("core and group inverses need a square M");
  }
  if (kind == InverseKind::Projector) {
    throw std::invalid_argument("use check_projector for projectors");
  }

  const CMatrix mx = m * x;
  const CMatrix xm = x * m;
  std::vector<std::pair<std::string, double>> residuals;
  residuals.emplace_back("MXM-M", fro_norm(mx * m - m));
  switch (kind) {
    case InverseKind::Core:
      residuals.emplace_back("MX^2-X", fro_norm(mx * x - x));
      residuals.emplace_back("(MX)*-MX", fro_norm(conj_transpose(mx) - mx));
      break;
    case InverseKind::Group:
      residuals.emplace_back("XMX-X", fro_norm(xm * x - x));
      residuals.emplace_back("MX-XM", fro_norm(mx - xm));
      break;
    case InverseKind::MoorePenrose:
      residuals.emplace_back("XMX-X", fro_norm(xm * x - x));
      residuals.emplace_back("(MX)*-MX", fro_norm(conj_transpose(mx) - mx));
      residuals.emplace_back("(XM)*-XM", fro_norm(conj_transpose(xm) - xm));
      break;
    case InverseKind::OneTwoInverse:
      residuals.emplace_back("XMX-X", fro_norm(xm * x - x));
      break;
    case InverseKind::Projector:
      break;
  }
  return finish(kind, std::move(residuals), 1.0 + fro_norm(m) + fro_norm(x), tol);
}

VerifyReport check_projector(const CMatrix& p, const Tolerances& tol, bool hermitian_required) {
  if (!p.is_square()) {
    throw DimensionError("a projector must be square");
  }
  std::vector<std::pair<std::string, double>> residuals;
  residuals.emplace_back("P^2-P", fro_norm(p * p - p));
  if (hermitian_required) {
    residuals.emplace_back("P*-P", fro_norm(conj_transpose(p) - p));
  }
  return finish(InverseKind::Projector, std::move(residuals), 1.0 + fro_norm(p), tol);
}

CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = {re, im};
    }
  }
  return a;
}

CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  QRFactors qr = householder_qr(random_complex(n, n, rng), Pivoting::None);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx d = qr.r(j, j);
    const cplx phase = std::abs(d) == 0.0 ? cplx{1.0, 0.0} : d / std::abs(d);
    for (std::size_t i = 0; i < n; ++i) {
      qr.q(i, j) *= phase;
    }
  }
  return qr.q;
}

Instance generate_index1(const InstanceSpec& spec) {
  if (spec.r > spec.n) {
    throw std::invalid_argument("instance rank exceeds dimension");
  }
  if (!(spec.condition_target >= 1.0) || !std::isfinite(spec.condition_target)) {
    throw std::invalid_argument("condition_target must be finite and >= 1");
  }
  const std::size_t n = spec.n;
  const std::size_t r = spec.r;
  std::mt19937_64 rng(spec.seed);

  const CMatrix v = random_unitary(n, rng);
  const CMatrix u_t = random_unitary(r, rng);
  const CMatrix w_t = random_unitary(r, rng);
  const CMatrix sigma = random_singular_values(r, spec.condition_target, rng);
  const CMatrix s = random_complex(r, n - r, rng);

  CMatrix sigma_inv(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    sigma_inv(i, i) = 1.0 / sigma(i, i).real();
  }
  const CMatrix t = u_t * sigma * conj_transpose(w_t);
  const CMatrix t_inv = w_t * sigma_inv * conj_transpose(u_t);

  const CMatrix v1 = v.leading_cols(r);
  const CMatrix v_star = conj_transpose(v);
  CMatrix top = hstack(t, s);
  Instance inst;
  inst.m = v1 * top * v_star;
  inst.known_core_inverse = v1 * t_inv * conj_transpose(v1);
  return inst;
}

CMatrix generate_index2(std::size_t n, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("index >= 2 needs n >= 2");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> block_size(2, n);
  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  const std::size_t k = block_size(rng);

  CMatrix core(n, n);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    core(i, i + 1) = magnitude(rng);
  }
  const std::size_t rest = n - k;
  if (rest > 0) {
    const CMatrix t = random_unitary(rest, rng) * random_singular_values(rest, 4.0, rng) *
                      random_unitary(rest, rng);
    core.set_block(k, k, t);
  }
  const CMatrix w = random_unitary(n, rng);
  return w * core * conj_transpose(w);
}

}  // namespace coreinv
