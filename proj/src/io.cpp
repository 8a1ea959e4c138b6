#include "coreinv/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coreinv/errors.hpp"

namespace coreinv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Parses a real prefix of `s` (optional leading '+'), returning chars consumed or 0.
std::size_t parse_real_prefix(std::string_view s, double& value) {
  std::size_t skip = 0;
  if (!s.empty() && s.front() == '+') {
    skip = 1;
    if (s.size() > 1 && (s[1] == '+' || s[1] == '-')) return 0;
  }
  const char* first = s.data() + skip;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    return 0;
  }
  return static_cast<std::size_t>(ptr - s.data());
}

double parse_real(std::string_view s) {
  double value = 0.0;
  s = trim(s);
  if (s.empty() || parse_real_prefix(s, value) != s.size()) {
    throw std::invalid_argument("not a real number: '" + std::string(s) + "'");
  }
  return value;
}

cplx require_finite(cplx z, std::string_view text) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("non-finite value '" + std::string(text) + "'");
  }
  return z;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_scalar(cplx z) {
  if (z.imag() == 0.0) {
    return format_real(z.real());
  }
  std::string s = format_real(z.real());
  s += std::signbit(z.imag()) ? '-' : '+';
  s += format_real(std::abs(z.imag()));
  s += 'i';
  return s;
}

bool is_real(const CMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(),
                     [](const cplx& z) { return z.imag() == 0.0; });
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

std::size_t parse_dimension(const Token& tok, std::size_t line_no) {
  std::size_t value = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("expected a non-negative integer dimension, got '" + std::string(tok.text) +
                         "'",
                     line_no, tok.column);
  }
  return value;
}

}  // namespace

MatrixFormat infer_format(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".mtx") return MatrixFormat::MatrixMarketArray;
  if (ext == ".csv") return MatrixFormat::Csv;
  throw UnsupportedHeader("cannot infer matrix format from extension '" + ext +
                          "' (expected .mtx or .csv)");
}

cplx parse_scalar(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) {
    throw std::invalid_argument("empty scalar");
  }

  if (s.front() == '(') {
    if (s.back() != ')') {
      throw std::invalid_argument("unterminated pair '" + std::string(s) + "'");
    }
    std::string_view inner = trim(s.substr(1, s.size() - 2));
    std::size_t split = inner.find(',');
    if (split == std::string_view::npos) {
      split = inner.find_first_of(" \t");
    }
    if (split == std::string_view::npos) {
      throw std::invalid_argument("pair needs two components: '" + std::string(s) + "'");
    }
    const double re = parse_real(inner.substr(0, split));
    const double im = parse_real(inner.substr(split + 1));
    return require_finite({re, im}, s);
  }

  std::string compact;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  std::string_view c = compact;

  if (c.back() != 'i') {
    return require_finite({parse_real(c), 0.0}, s);
  }
  std::string_view body = c.substr(0, c.size() - 1);  // without trailing 'i'

  // Pure imaginary: "", "+", "-", or a single real before the 'i'.
  if (body.empty() || body == "+") return {0.0, 1.0};
  if (body == "-") return {0.0, -1.0};
  double re = 0.0;
  const std::size_t used = parse_real_prefix(body, re);
  if (used == body.size()) {
    return require_finite({0.0, re}, s);
  }
  if (used == 0 || (body[used] != '+' && body[used] != '-')) {
    throw std::invalid_argument("malformed complex number '" + std::string(s) + "'");
  }
  std::string_view imag_text = body.substr(used);
  double im = 0.0;
  if (imag_text == "+") {
    im = 1.0;
  } else if (imag_text == "-") {
    im = -1.0;
  } else {
    const bool negative = imag_text.front() == '-';
    imag_text.remove_prefix(1);
    if (imag_text.empty() || imag_text.front() == '+' || imag_text.front() == '-') {
      throw std::invalid_argument("malformed complex number '" + std::string(s) + "'");
    }
    im = parse_real(imag_text);
    if (negative) im = -im;
  }
  return require_finite({re, im}, s);
}

CMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError("empty input, expected a %%MatrixMarket banner", 1, 1);
  }
  ++line_no;
  const std::vector<Token> banner = tokenize(line);
  if (banner.empty() || lower(banner[0].text) != "%%matrixmarket") {
    throw ParseError("missing %%MatrixMarket banner", line_no, 1);
  }
  if (banner.size() != 5) {
    throw ParseError("banner must read '%%MatrixMarket matrix array <field> general'", line_no,
                     1);
  }
  const std::string object = lower(banner[1].text);
  const std::string format = lower(banner[2].text);
  const std::string field = lower(banner[3].text);
  const std::string symmetry = lower(banner[4].text);
  if (object != "matrix") {
    throw UnsupportedHeader("unsupported Matrix Market object '" + object + "'");
  }
  if (format != "array") {
    throw UnsupportedHeader("only the dense 'array' format is supported, got '" + format + "'");
  }
  if (field != "real" && field != "complex" && field != "integer") {
    throw UnsupportedHeader("unsupported Matrix Market field '" + field + "'");
  }
  if (symmetry != "general") {
    throw UnsupportedHeader("only 'general' symmetry is supported, got '" + symmetry + "'");
  }
  const bool complex_field = field == "complex";
  const std::size_t per_entry = complex_field ? 2 : 1;

  std::size_t rows = 0;
  std::size_t cols = 0;
  bool have_size = false;
  std::vector<cplx> column_major;
  std::size_t expected = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.front() == '%') continue;
    const std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (!have_size) {
      if (tokens.size() != 2) {
        throw ParseError("size line must hold exactly 'rows cols'", line_no, tokens.front().column);
      }
      rows = parse_dimension(tokens[0], line_no);
      cols = parse_dimension(tokens[1], line_no);
      have_size = true;
      expected = rows * cols;
      column_major.reserve(expected);
      continue;
    }

    if (tokens.size() != per_entry) {
      throw ParseError("expected " + std::to_string(per_entry) + " value(s) per line, got " +
                           std::to_string(tokens.size()),
                       line_no, tokens.front().column);
    }
    if (column_major.size() == expected) {
      throw ParseError("more values than the declared " + std::to_string(rows) + "x" +
                           std::to_string(cols),
                       line_no, tokens.front().column);
    }
    double parts[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < per_entry; ++k) {
      try {
        parts[k] = parse_real(tokens[k].text);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no, tokens[k].column);
      }
      if (!std::isfinite(parts[k])) {
        throw ParseError("non-finite value", line_no, tokens[k].column);
      }
    }
    column_major.emplace_back(parts[0], parts[1]);
  }

  if (!have_size) {
    throw ParseError("missing size line", line_no + 1, 1);
  }
  if (column_major.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " values, found " +
                         std::to_string(column_major.size()),
                     line_no + 1, 1);
  }
  CMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      m(i, j) = column_major[j * rows + i];
    }
  }
  return m;
}

CMatrix parse_csv(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) {
    lines.pop_back();
  }

  std::vector<cplx> entries;
  std::size_t cols = 0;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view text = lines[li];
    std::vector<std::pair<std::string_view, std::size_t>> fields;
    if (!trim(text).empty()) {
      int depth = 0;
      std::size_t start = 0;
      for (std::size_t k = 0; k <= text.size(); ++k) {
        if (k < text.size()) {
          if (text[k] == '(') ++depth;
          if (text[k] == ')') --depth;
        }
        if (k == text.size() || (text[k] == ',' && depth == 0)) {
          fields.emplace_back(text.substr(start, k - start), start + 1);
          start = k + 1;
        }
      }
    }
    if (li == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw ParseError("row has " + std::to_string(fields.size()) + " entries, expected " +
                           std::to_string(cols),
                       li + 1, 1);
    }
    for (const auto& [field, column] : fields) {
      try {
        entries.push_back(parse_scalar(field));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), li + 1, column);
      }
    }
  }
  return CMatrix(lines.size(), cols, std::move(entries));
}

CMatrix read_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format) {
  const MatrixFormat fmt = format ? *format : infer_format(path);
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return fmt == MatrixFormat::MatrixMarketArray ? parse_matrix_market(in) : parse_csv(in);
}

void write_matrix_market(std::ostream& out, const CMatrix& m) {
  const bool real = is_real(m);
  out << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      out << format_real(m(i, j).real());
      if (!real) out << ' ' << format_real(m(i, j).imag());
      out << '\n';
    }
  }
}

void write_csv(std::ostream& out, const CMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_scalar(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const CMatrix& m, const std::filesystem::path& path,
                  std::optional<MatrixFormat> format) {
  const MatrixFormat fmt = format ? *format : infer_format(path);
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  if (fmt == MatrixFormat::MatrixMarketArray) {
    write_matrix_market(out, m);
  } else {
    write_csv(out, m);
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

nlohmann::json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row.push_back(to_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const SolveReport& report) {
  nlohmann::json x = nlohmann::json::array();
  for (std::size_t i = 0; i < report.x.rows(); ++i) {
    x.push_back(to_json(report.x(i, 0)));
  }
  nlohmann::json j = {
      {"x", std::move(x)},
      {"residual_fro", report.residual_fro},
      {"method", std::string(to_string(report.method))},
      {"in_range_defect", report.in_range_defect},
      {"min_residual_reference", report.min_residual_reference},
  };
  if (report.determinant) {
    j["determinant"] = to_json(*report.determinant);
    nlohmann::json nums = nlohmann::json::array();
    for (cplx z : report.numerators) nums.push_back(to_json(z));
    j["numerators"] = std::move(nums);
  }
  return j;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json residuals = nlohmann::json::object();
  for (const auto& [label, value] : report.residuals) {
    residuals[label] = value;
  }
  return {
      {"kind", std::string(to_string(report.kind))},
      {"residuals", std::move(residuals)},
      {"pass", report.pass},
      {"tolerance_used", report.tolerance_used},
      {"scale", report.scale},
      {"max_residual", report.max_residual()},
      {"worst_residual", report.worst()},
  };
}

namespace {

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

}  // namespace

void write_report(const SolveReport& report, const std::filesystem::path& path) {
  write_json(to_json(report), path);
}

void write_report(const VerifyReport& report, const std::filesystem::path& path) {
  write_json(to_json(report), path);
}

}  // namespace coreinv
