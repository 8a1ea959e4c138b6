#include "coreinv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coreinv/decomp.hpp"
#include "coreinv/errors.hpp"
#include "coreinv/ginv.hpp"
#include "coreinv/io.hpp"
#include "coreinv/matrix.hpp"
#include "coreinv/solve.hpp"
#include "coreinv/verify.hpp"

namespace coreinv::cli {

namespace {

struct Config {
  Tolerances tol;

  std::string input;
  std::string second_input;
  std::string output;
  std::string x_output;

  std::string kind = "core";
  std::string method;
  bool fallback_direct = false;

  bool json = false;
  double inject_perturbation = 0.0;

  std::vector<std::size_t> bench_n = {4, 8, 12};
  std::size_t bench_seeds = 10;
  std::uint64_t bench_seed_base = 1;
  double bench_condition = 100.0;
};

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return INFINITY;
  }
  return norms(a - b).max_abs;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_scalar(cplx z) {
  if (std::abs(z.imag()) < 1e-300) return format_number(z.real());
  return "(" + format_number(z.real()) + "," + format_number(z.imag()) + ")";
}

std::string format_compact(const CMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i > 0) s += ",";
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) s += ",";
      s += format_scalar(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

void emit_matrix(const CMatrix& m, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_matrix_market(out, m);
  } else {
    write_matrix(m, path);
  }
}

// ---------------------------------------------------------------------------
// inverse

int cmd_inverse(const Config& cfg, std::ostream& out, std::ostream& err) {
  const CMatrix m = read_matrix(cfg.input);
  if (cfg.kind != "core") {
    if (!cfg.method.empty()) {
      err << "error: --method only applies to --kind core\n";
      return kUsage;
    }
    const CMatrix x = cfg.kind == "mp" ? moore_penrose(m, cfg.tol) : group_inverse(m, cfg.tol);
    emit_matrix(x, cfg.output, out);
    return kSuccess;
  }

  const std::string method = cfg.method.empty() ? "decomp" : cfg.method;
  if (method != "all") {
    const auto parsed = parse_core_inverse_method(method);
    emit_matrix(core_inverse(m, *parsed, cfg.tol), cfg.output, out);
    return kSuccess;
  }

  std::vector<std::pair<std::string, CMatrix>> results;
  for (CoreInverseMethod cm : kAllCoreInverseMethods) {
    if (cm == CoreInverseMethod::Determinantal && m.rows() > cfg.tol.cramer_max_dim) {
      err << "warning: skipping determinantal method, n = " << m.rows()
          << " exceeds cramer_max_dim\n";
      continue;
    }
    results.emplace_back(std::string(to_string(cm)), core_inverse(m, cm, cfg.tol));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      worst = std::max(worst, max_abs_diff(results[a].second, results[b].second));
    }
  }
  emit_matrix(results.front().second, cfg.output, out);
  if (cfg.output.empty()) {
    err << "max pairwise disagreement: " << format_number(worst) << '\n';
  } else {
    nlohmann::json j;
    for (const auto& [name, x] : results) j["methods"].push_back(name);
    j["max_pairwise_disagreement"] = worst;
    out << j.dump() << '\n';
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const Config& cfg, std::ostream& out, std::ostream& err) {
  const CMatrix m = read_matrix(cfg.input);
  const CMatrix b = read_matrix(cfg.second_input);
  SolveMethod method = parse_solve_method(cfg.method.empty() ? "direct" : cfg.method).value();
  if (method != SolveMethod::Direct && m.rows() > cfg.tol.cramer_max_dim) {
    if (!cfg.fallback_direct) {
      err << "error: n = " << m.rows() << " exceeds cramer_max_dim = " << cfg.tol.cramer_max_dim
          << " (pass --fallback-direct to use the direct method)\n";
      return kCramerGate;
    }
    err << "warning: n exceeds cramer_max_dim, falling back to the direct method\n";
    method = SolveMethod::Direct;
  }
  const SolveReport report = solve(m, b, method, cfg.tol);
  if (!cfg.x_output.empty()) {
    write_matrix(report.x, cfg.x_output);
  }
  if (cfg.output.empty()) {
    out << to_json(report).dump(2) << '\n';
  } else {
    write_report(report, cfg.output);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// index

int cmd_index(const Config& cfg, std::ostream& out, std::ostream&) {
  const CMatrix m = read_matrix(cfg.input);
  const IndexResult idx = index_of(m, cfg.tol);
  out << "index: " << idx.k << '\n' << "rank_sequence:";
  for (std::size_t r : idx.rank_sequence) out << ' ' << r;
  out << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream&) {
  const CMatrix m = read_matrix(cfg.input);
  const CMatrix x = read_matrix(cfg.second_input);
  const VerifyReport report = check_inverse(m, x, parse_inverse_kind(cfg.kind).value(), cfg.tol);
  out << to_json(report).dump(2) << '\n';
  if (!cfg.output.empty()) {
    write_report(report, cfg.output);
  }
  return report.pass ? kSuccess : kCheckFailed;
}

// ---------------------------------------------------------------------------
// example

struct ExampleRow {
  std::string name;
  std::string computed;
  std::string expected;
  double error = 0.0;
  bool pass = false;
};

class ExampleTable {
 public:
  void matrix(std::string name, const CMatrix& computed, const CMatrix& expected) {
    add(std::move(name), format_compact(computed), format_compact(expected),
        max_abs_diff(computed, expected));
  }
  void scalar(std::string name, cplx computed, cplx expected) {
    add(std::move(name), format_scalar(computed), format_scalar(expected),
        std::abs(computed - expected));
  }
  void vector(std::string name, const std::vector<cplx>& computed,
              const std::vector<cplx>& expected) {
    const CMatrix c = CMatrix::column(computed);
    const CMatrix e = CMatrix::column(expected);
    add(std::move(name), format_compact(conj_transpose(c)), format_compact(conj_transpose(e)),
        max_abs_diff(c, e));
  }

  bool all_pass() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const ExampleRow& r) { return r.pass; });
  }

  void print(std::ostream& out) const {
    for (const ExampleRow& r : rows_) {
      char err_buf[32];
      std::snprintf(err_buf, sizeof err_buf, "%.3g", r.error);
      out << (r.pass ? "[ok]       " : "[MISMATCH] ") << r.name << ": " << r.computed
          << "  (expected " << r.expected << ", error " << err_buf << ")\n";
    }
    out << (all_pass() ? "all values match" : "some values do not match") << '\n';
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const ExampleRow& r : rows_) {
      rows.push_back({{"name", r.name},
                      {"computed", r.computed},
                      {"expected", r.expected},
                      {"abs_error", r.error},
                      {"pass", r.pass}});
    }
    return {{"checks", rows}, {"all_match", all_pass()}, {"tolerance", kTolerance}};
  }

 private:
  static constexpr double kTolerance = 1e-10;

  void add(std::string name, std::string computed, std::string expected, double error) {
    rows_.push_back({std::move(name), std::move(computed), std::move(expected), error,
                     error <= kTolerance});
  }

  std::vector<ExampleRow> rows_;
};

int cmd_example(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Tolerances& tol = cfg.tol;
  CMatrix m{{1, 2}, {0, 0}};
  m(0, 1) += cfg.inject_perturbation;
  const NullBasis l{CMatrix{{0}, {1}}};
  const CMatrix b{{1}, {1}};

  const CMatrix core_expected{{1, 0}, {0, 0}};
  const CMatrix g_expected{{1, 2, 0}, {0, 0, 1}, {0, 1, 0}};
  const CMatrix g_inv_expected{{1, 0, -2}, {0, 0, 1}, {0, 1, 0}};
  const CMatrix x_expected{{1}, {0}};

  ExampleTable table;

  const IndexResult idx = index_of(m, tol);
  table.scalar("index of M", static_cast<double>(idx.k), 1.0);
  const CoreDecomposition d = core_decomposition(m, tol);
  table.scalar("rank of M", static_cast<double>(d.r), 1.0);
  table.scalar("decomposition reassembly error", fro_norm(d.reassemble() - m), 0.0);
  const NullBasis computed_l = null_basis(m, tol);
  table.scalar("|<computed L, given L>|",
               std::abs((conj_transpose(computed_l.basis) * l.basis)(0, 0)), 1.0);

  for (CoreInverseMethod method : kAllCoreInverseMethods) {
    table.matrix("core inverse (" + std::string(to_string(method)) + ")",
                 core_inverse(m, l, method, tol), core_expected);
  }
  table.matrix("core inverse (group * M * pinv)", core_inverse_via_identity(m, tol),
               core_expected);

  const CMatrix core = core_inverse(m, CoreInverseMethod::Decomposition, tol);
  const CMatrix l_left = lu_solve(lu_factor(conj_transpose(l.basis) * l.basis, tol),
                                  conj_transpose(l.basis));
  table.matrix("(I - core*M) L (L*L)^-1", (CMatrix::identity(2) - core * m) * conj_transpose(l_left),
               CMatrix{{-2}, {1}});
  table.matrix("(L*L)^-1 L*", l_left, CMatrix{{0, 1}});

  const BorderedSystem g = bordered_matrix(m, l);
  table.matrix("G", g.g, g_expected);
  table.scalar("det(G)", det(g.g, tol), -1.0);
  table.matrix("G^-1 (block formula)", bordered_inverse(m, l, tol), g_inv_expected);
  table.matrix("G^-1 (dense LU)", inverse(g.g, tol), g_inv_expected);

  const SolveReport direct = solve_constrained(m, b, tol);
  const SolveReport bordered = solve_cramer_bordered(m, l, b, tol);
  const SolveReport condensed = solve_cramer_condensed(m, l, b, tol);
  table.vector("bordered Cramer numerators", bordered.numerators, {-1.0, 0.0});
  table.scalar("det(M M* M + L L*)", condensed.determinant.value(), 5.0);
  table.vector("condensed Cramer numerators", condensed.numerators, {5.0, 0.0});
  table.matrix("x (direct)", direct.x, x_expected);
  table.matrix("x (cramer-bordered)", bordered.x, x_expected);
  table.matrix("x (cramer-condensed)", condensed.x, x_expected);
  table.scalar("minimal residual ||Mx - b||", direct.residual_fro, 1.0);

  if (cfg.json) {
    out << table.to_json().dump(2) << '\n';
  } else {
    table.print(out);
  }
  if (!table.all_pass()) {
    err << "example: computed values differ from the reference values\n";
    return kCheckFailed;
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.bench_n.empty() || cfg.bench_seeds == 0) {
    err << "error: bench needs a non-empty --n grid and --seeds >= 1\n";
    return kUsage;
  }
  for (std::size_t n : cfg.bench_n) {
    if (n == 0) {
      err << "error: grid sizes must be positive\n";
      return kUsage;
    }
  }
  if (!(cfg.bench_condition >= 1.0)) {
    err << "error: --condition must be >= 1\n";
    return kUsage;
  }

  std::ostringstream csv;
  csv << "n,r,seed,method,seconds,max_abs_err\n";
  for (std::size_t n : cfg.bench_n) {
    const std::size_t r = n / 2;
    for (std::size_t s = 0; s < cfg.bench_seeds; ++s) {
      const std::uint64_t seed = cfg.bench_seed_base + s;
      const Instance inst = generate_index1({n, r, seed, cfg.bench_condition});
      for (CoreInverseMethod method : kAllCoreInverseMethods) {
        if (method == CoreInverseMethod::Determinantal && n > cfg.tol.cramer_max_dim) continue;
        const auto start = std::chrono::steady_clock::now();
        const CMatrix x = core_inverse(inst.m, method, cfg.tol);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        char line[160];
        std::snprintf(line, sizeof line, "%zu,%zu,%llu,%s,%.6e,%.6e\n", n, r,
                      static_cast<unsigned long long>(seed), std::string(to_string(method)).c_str(),
                      elapsed.count(), max_abs_diff(x, inst.known_core_inverse));
        csv << line;
      }
    }
  }

  if (cfg.output.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(cfg.output);
    if (!file) throw IoError("cannot open '" + cfg.output + "' for writing");
    file << csv.str();
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const IndexExceedsOne& e) {
    err << "error: " << e.what() << '\n';
    return kIndexViolation;
  } catch (const DimensionTooLargeForDeterminantal& e) {
    err << "error: " << e.what() << '\n';
    return kCramerGate;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedHeader& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Core inverse and range-constrained least squares toolkit", "coreinv"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--rank-rtol", cfg.tol.rank_rtol, "Relative rank threshold")
      ->capture_default_str();
  app.add_option("--verify-tol", cfg.tol.verify_rtol, "Relative verification tolerance")
      ->capture_default_str();
  app.add_option("--cramer-max-dim", cfg.tol.cramer_max_dim,
                 "Largest n admitted on determinant-ratio paths")
      ->capture_default_str();

  auto* inverse = app.add_subcommand("inverse", "Compute a generalized inverse");
  inverse->add_option("matrix", cfg.input, "Input matrix (.mtx or .csv)")->required();
  inverse->add_option("-o,--output", cfg.output, "Output matrix file (default: stdout)");
  inverse->add_option("--kind", cfg.kind, "Inverse kind")
      ->check(CLI::IsMember({"core", "mp", "group"}))
      ->capture_default_str();
  inverse->add_option("--method", cfg.method, "Core inverse method (default decomp)")
      ->check(CLI::IsMember({"decomp", "bordered", "closed", "determinantal", "all"}));

  auto* solve_cmd = app.add_subcommand("solve", "Minimize ||Mx - b|| over x in R(M)");
  solve_cmd->add_option("matrix", cfg.input, "Matrix M")->required();
  solve_cmd->add_option("rhs", cfg.second_input, "Right-hand side b (n x 1)")->required();
  solve_cmd->add_option("--method", cfg.method, "Solution method (default direct)")
      ->check(CLI::IsMember({"direct", "cramer-bordered", "cramer-condensed"}));
  solve_cmd->add_option("-o,--output", cfg.output, "JSON report path (default: stdout)");
  solve_cmd->add_option("--x-out", cfg.x_output, "Also write x as a matrix file");
  solve_cmd->add_flag("--fallback-direct", cfg.fallback_direct,
                      "Use the direct method when n exceeds cramer_max_dim");

  auto* index_cmd = app.add_subcommand("index", "Print the index and rank sequence");
  index_cmd->add_option("matrix", cfg.input, "Square matrix")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Check defining equations of a candidate");
  verify_cmd->add_option("matrix", cfg.input, "Matrix M")->required();
  verify_cmd->add_option("candidate", cfg.second_input, "Candidate inverse X")->required();
  verify_cmd->add_option("--kind", cfg.kind, "Inverse kind")
      ->check(CLI::IsMember({"core", "mp", "group", "onetwo"}))
      ->required();
  verify_cmd->add_option("-o,--output", cfg.output, "Also write the JSON report here");

  auto* example_cmd = app.add_subcommand("example", "Run the 2x2 worked example end to end");
  example_cmd->add_flag("--json", cfg.json, "Machine-readable output");
  example_cmd->add_option("--inject-perturbation", cfg.inject_perturbation,
                          "Perturb M(1,2) by this amount (negative control)")
      ->group("");

  auto* bench_cmd = app.add_subcommand("bench", "Time each core-inverse method on random instances");
  bench_cmd->add_option("--n", cfg.bench_n, "Dimensions")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--seeds", cfg.bench_seeds, "Seeds per dimension")->capture_default_str();
  bench_cmd->add_option("--seed-base", cfg.bench_seed_base, "First seed")->capture_default_str();
  bench_cmd->add_option("--condition", cfg.bench_condition, "Condition target of T")
      ->capture_default_str();
  bench_cmd->add_option("-o,--output", cfg.output, "CSV path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  return guarded(
      [&]() -> int {
        cfg.tol.validate();
        if (inverse->parsed()) return cmd_inverse(cfg, out, err);
        if (solve_cmd->parsed()) return cmd_solve(cfg, out, err);
        if (index_cmd->parsed()) return cmd_index(cfg, out, err);
        if (verify_cmd->parsed()) return cmd_verify(cfg, out, err);
        if (example_cmd->parsed()) return cmd_example(cfg, out, err);
        if (bench_cmd->parsed()) return cmd_bench(cfg, out, err);
        err << app.help();
        return kUsage;
      },
      err);
}

}  // namespace coreinv::cli
