#pragma once

// Matrix files (Matrix Market dense "array" and CSV) and JSON reports.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "coreinv/matrix.hpp"
#include "coreinv/solve.hpp"
#include "coreinv/verify.hpp"

namespace coreinv {

enum class MatrixFormat { MatrixMarketArray, Csv };

// .mtx -> MatrixMarketArray, .csv -> Csv; throws UnsupportedHeader otherwise.
MatrixFormat infer_format(const std::filesystem::path& path);

// Parses "a", "a+bi", "a-bi", "bi", "i", "(re,im)" and "(re im)".
// Throws std::invalid_argument on malformed or non-finite input.
cplx parse_scalar(std::string_view text);

CMatrix parse_matrix_market(std::istream& in);
CMatrix parse_csv(std::istream& in);
CMatrix read_matrix(const std::filesystem::path& path,
                    std::optional<MatrixFormat> format = std::nullopt);

// Values use 17 significant digits so reading back is value-exact.
void write_matrix_market(std::ostream& out, const CMatrix& m);
void write_csv(std::ostream& out, const CMatrix& m);
void write_matrix(const CMatrix& m, const std::filesystem::path& path,
                  std::optional<MatrixFormat> format = std::nullopt);

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const CMatrix& m);
nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const VerifyReport& report);

void write_report(const SolveReport& report, const std::filesystem::path& path);
void write_report(const VerifyReport& report, const std::filesystem::path& path);

}  // namespace coreinv
