#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ivdae/errors.hpp"
#include "ivdae/linalg.hpp"

namespace ivdae::cli {

/// Malformed input file; line and column are 1-based (0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, long line, long column, const std::string& what);
  long line() const noexcept { return line_; }
  long column() const noexcept { return column_; }

 private:
  long line_;
  long column_;
};

/// Reads `%%MatrixMarket matrix {array|coordinate} real general` into a dense square matrix.
/// Array entries are column-major; coordinate indices are 1-based.
Matrix parse_matrix_market(const std::filesystem::path& path);
Matrix parse_matrix_market(std::istream& in, std::string_view source = "<stream>");

/// Dense array format, one entry per line, 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& m);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

/// Whitespace-separated reals ('%' and '#' start comments).
Vector parse_vector(const std::filesystem::path& path);
Vector parse_vector(std::istream& in, std::string_view source = "<stream>");

}  // namespace ivdae::cli
