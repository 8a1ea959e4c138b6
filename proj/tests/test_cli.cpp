#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coreinv/cli.hpp"
#include "coreinv/io.hpp"
#include "coreinv/verify.hpp"

using namespace coreinv;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / "coreinv_test_cli") {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string put(const std::string& name, const CMatrix& m) const {
    const fs::path p = dir_ / name;
    write_matrix(m, p);
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

CMatrix parse_mm(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

std::size_t count_lines(const std::string& s, const std::string& needle = "") {
  std::istringstream in(s);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    if (needle.empty() || line.find(needle) != std::string::npos) ++n;
  }
  return n;
}

const CMatrix kM{{1, 2}, {0, 0}};
const CMatrix kB{{1}, {1}};

}  // namespace

TEST_CASE("inverse subcommand") {
  const Workspace ws;
  const std::string m = ws.put("m.mtx", kM);

  for (const char* method : {"decomp", "bordered", "closed", "determinantal"}) {
    const Result r = run_cli({"inverse", m, "--kind", "core", "--method", method});
    CHECK(r.code == cli::kSuccess);
    CHECK(parse_mm(r.out) == CMatrix{{1, 0}, {0, 0}});
  }

  const Result all = run_cli({"inverse", m, "--method", "all"});
  CHECK(all.code == 0);
  CHECK(all.err.find("max pairwise disagreement") != std::string::npos);

  const Result all_file = run_cli({"inverse", m, "--method", "all", "-o", ws.path("x.csv")});
  CHECK(all_file.code == 0);
  CHECK(nlohmann::json::parse(all_file.out)["methods"].size() == 4);
  CHECK(read_matrix(ws.path("x.csv")) == CMatrix{{1, 0}, {0, 0}});

  const Result mp = run_cli({"inverse", ws.put("i.csv", CMatrix::identity(3)), "--kind", "mp"});
  CHECK(mp.code == 0);
  CHECK(parse_mm(mp.out) == CMatrix::identity(3));

  const Result grp = run_cli({"inverse", m, "--kind", "group"});
  CHECK(grp.code == 0);
  CHECK(norms(parse_mm(grp.out) - kM).max_abs <= 1e-12);

  const std::string nil = ws.put("nil.mtx", CMatrix{{0, 1}, {0, 0}});
  for (const char* method : {"decomp", "bordered", "closed", "determinantal", "all"}) {
    CHECK(run_cli({"inverse", nil, "--method", method}).code == cli::kIndexViolation);
  }

  CHECK(run_cli({"inverse", m, "--kind", "mp", "--method", "closed"}).code == cli::kUsage);
  CHECK(run_cli({"inverse", m, "--method", "svd"}).code == cli::kUsage);
  CHECK(run_cli({"inverse", ws.path("missing.mtx")}).code == cli::kUsage);
  CHECK(run_cli({"--cramer-max-dim", "1", "inverse", m, "--method", "determinantal"}).code ==
        cli::kCramerGate);
}

TEST_CASE("solve subcommand") {
  const Workspace ws;
  const std::string m = ws.put("m.mtx", kM);
  const std::string b = ws.put("b.mtx", kB);

  const Result cond = run_cli({"solve", m, b, "--method", "cramer-condensed"});
  REQUIRE(cond.code == 0);
  const nlohmann::json jc = nlohmann::json::parse(cond.out);
  CHECK(jc["method"] == "cramer-condensed");
  CHECK(jc["determinant"]["re"].get<double>() == doctest::Approx(5.0));
  CHECK(jc["x"][0]["re"].get<double>() == doctest::Approx(1.0));
  CHECK(jc["residual_fro"].get<double>() == doctest::Approx(1.0));

  const Result direct = run_cli({"solve", m, b, "-o", ws.path("r.json"), "--x-out",
                                 ws.path("x.mtx")});
  CHECK(direct.code == 0);
  CHECK(norms(read_matrix(ws.path("x.mtx")) - CMatrix{{1}, {0}}).max_abs <= 1e-14);

  const Result zero = run_cli({"solve", ws.put("z.mtx", CMatrix::zeros(2, 2)), b});
  CHECK(zero.code == 0);
  const nlohmann::json jz = nlohmann::json::parse(zero.out);
  CHECK(jz["x"][1]["re"].get<double>() == 0.0);
  CHECK(jz["residual_fro"].get<double>() == doctest::Approx(std::sqrt(2.0)));

  CHECK(run_cli({"--cramer-max-dim", "1", "solve", m, b, "--method", "cramer-bordered"}).code ==
        cli::kCramerGate);
  const Result fb = run_cli({"--cramer-max-dim", "1", "solve", m, b, "--method",
                             "cramer-bordered", "--fallback-direct"});
  CHECK(fb.code == 0);
  CHECK(nlohmann::json::parse(fb.out)["method"] == "direct");

  CHECK(run_cli({"solve", ws.put("nil.mtx", CMatrix{{0, 1}, {0, 0}}), b}).code ==
        cli::kIndexViolation);
  CHECK(run_cli({"solve", m, ws.put("b3.mtx", CMatrix(3, 1))}).code == cli::kUsage);
}

TEST_CASE("index subcommand") {
  const Workspace ws;
  const Result r = run_cli({"index", ws.put("m.mtx", kM)});
  CHECK(r.code == 0);
  CHECK(r.out == "index: 1\nrank_sequence: 1 1\n");

  const Result nil = run_cli({"index", ws.put("nil.mtx", CMatrix{{0, 1}, {0, 0}})});
  CHECK(nil.code == 0);
  CHECK(nil.out == "index: 2\nrank_sequence: 1 0 0\n");

  CHECK(run_cli({"index", ws.put("i.mtx", CMatrix::identity(2))}).out ==
        "index: 0\nrank_sequence: 2\n");
  CHECK(run_cli({"index", ws.put("rect.mtx", CMatrix(2, 3))}).code == cli::kUsage);
}

TEST_CASE("verify subcommand") {
  const Workspace ws;
  const std::string m = ws.put("m.mtx", kM);
  const std::string core = ws.put("core.mtx", CMatrix{{1, 0}, {0, 0}});
  const std::string pinv = ws.put("pinv.mtx", CMatrix{{0.2, 0}, {0.4, 0}});

  const Result ok = run_cli({"verify", m, core, "--kind", "core", "-o", ws.path("v.json")});
  CHECK(ok.code == cli::kSuccess);
  CHECK(nlohmann::json::parse(ok.out)["pass"] == true);
  CHECK(fs::exists(ws.path("v.json")));

  const Result bad = run_cli({"verify", m, pinv, "--kind", "core"});
  CHECK(bad.code == cli::kCheckFailed);
  CHECK(nlohmann::json::parse(bad.out)["pass"] == false);

  CHECK(run_cli({"verify", m, pinv, "--kind", "mp"}).code == 0);
  CHECK(run_cli({"verify", m, pinv, "--kind", "onetwo"}).code == 0);
  CHECK(run_cli({"verify", m, pinv}).code == cli::kUsage);
  CHECK(run_cli({"verify", m, pinv, "--kind", "drazin"}).code == cli::kUsage);
}

TEST_CASE("example subcommand") {
  const Result r = run_cli({"example"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all values match") != std::string::npos);
  CHECK(count_lines(r.out, "[MISMATCH]") == 0);

  const Result j = run_cli({"example", "--json"});
  CHECK(j.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(j.out);
  CHECK(doc["all_match"] == true);
  CHECK(doc["checks"].size() >= 15);

  const Result bumped = run_cli({"example", "--inject-perturbation", "1e-3"});
  CHECK(bumped.code == cli::kCheckFailed);
  CHECK(count_lines(bumped.out, "[MISMATCH]") > 0);
}

TEST_CASE("bench subcommand") {
  const Result r = run_cli({"bench"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 1 + 3 * 10 * 4);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,r,seed,method,seconds,max_abs_err");
  while (std::getline(in, line)) {
    if (line.rfind("8,", 0) == 0 && line.find(",decomp,") != std::string::npos) {
      CHECK(std::stod(line.substr(line.rfind(',') + 1)) <= 1e-8);
    }
  }

  const Result gated = run_cli({"--cramer-max-dim", "5", "bench", "--n", "4,6", "--seeds", "2"});
  CHECK(gated.code == 0);
  CHECK(count_lines(gated.out) == 1 + 2 * 4 + 2 * 3);
  CHECK(count_lines(gated.out, "6,3,") == 6);
  CHECK(gated.out.find("6,3,1,determinantal") == std::string::npos);

  CHECK(run_cli({"bench", "--n", "0"}).code == cli::kUsage);
  CHECK(run_cli({"bench", "--seeds", "0"}).code == cli::kUsage);
  CHECK(run_cli({"bench", "--n", "x"}).code == cli::kUsage);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"example", "--bogus"}).code == cli::kUsage);
  CHECK(run_cli({"--rank-rtol", "2", "example"}).code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kSuccess);

  const Workspace ws;
  const std::string bad = ws.path("bad.mtx");
  {
    std::ofstream f(bad);
    f << "%%MatrixMarket matrix array real general\n2 2\n1\n";
  }
  const Result r = run_cli({"index", bad});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("line") != std::string::npos);
  {
    std::ofstream f(ws.path("coord.mtx"));
    f << "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n";
  }
  CHECK(run_cli({"index", ws.path("coord.mtx")}).code == cli::kUsage);
}
