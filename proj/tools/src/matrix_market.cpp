#include "ivdae/cli/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

namespace ivdae::cli {

namespace {

struct Token {
  std::string text;
  long line = 0;
  long column = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<Token> split(const std::string& text, long line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    out.push_back({text.substr(start, i - start), line, static_cast<long>(start) + 1});
  }
  return out;
}

class Reader {
 public:
  Reader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  [[noreturn]] void fail(long line, long column, const std::string& what) const {
    throw ParseError(source_, line, column, what);
  }

  // Next non-comment, non-blank line split into tokens; empty at end of input.
  std::vector<Token> next_line() {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos || text[first] == '%') continue;
      return split(text, line_);
    }
    return {};
  }

  std::string first_line() {
    std::string text;
    if (!std::getline(in_, text)) fail(1, 1, "empty file");
    ++line_;
    return text;
  }

  long line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  long line_ = 0;
};

double to_double(const Reader& r, const Token& t) {
  double v = 0.0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  const char* start = (b != e && *b == '+') ? b + 1 : b;
  auto [ptr, ec] = std::from_chars(start, e, v);
  if (ec != std::errc() || ptr != e) r.fail(t.line, t.column, "not a number: '" + t.text + "'");
  return v;
}

long to_long(const Reader& r, const Token& t, const char* what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    r.fail(t.line, t.column, std::string("expected integer ") + what + ", got '" + t.text + "'");
  }
  return v;
}

}  // namespace

ParseError::ParseError(const std::string& source, long line, long column, const std::string& what)
    : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

Matrix parse_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_matrix_market(in, path.string());
}

Matrix parse_matrix_market(std::istream& in, std::string_view source) {
  Reader r(in, source);
  const std::vector<Token> banner = split(r.first_line(), 1);
  if (banner.empty() || lower(banner[0].text) != "%%matrixmarket") {
    r.fail(1, 1, "missing %%MatrixMarket banner");
  }
  if (banner.size() != 5) r.fail(1, 1, "banner must have 5 fields: %%MatrixMarket matrix <format> real general");
  if (lower(banner[1].text) != "matrix") r.fail(1, banner[1].column, "object must be 'matrix'");
  const std::string format = lower(banner[2].text);
  if (format != "array" && format != "coordinate") {
    r.fail(1, banner[2].column, "format must be 'array' or 'coordinate', got '" + banner[2].text + "'");
  }
  if (lower(banner[3].text) != "real") r.fail(1, banner[3].column, "field must be 'real'");
  if (lower(banner[4].text) != "general") r.fail(1, banner[4].column, "symmetry must be 'general'");

  const bool dense = format == "array";
  const std::vector<Token> size = r.next_line();
  if (size.empty()) r.fail(r.line() + 1, 1, "missing size line");
  if (size.size() != (dense ? 2u : 3u)) {
    r.fail(size[0].line, 1, dense ? "size line must be 'rows cols'" : "size line must be 'rows cols nnz'");
  }
  const long rows = to_long(r, size[0], "row count");
  const long cols = to_long(r, size[1], "column count");
  if (rows < 1 || cols < 1) r.fail(size[0].line, 1, "dimensions must be positive");
  if (rows != cols) {
    r.fail(size[0].line, size[1].column,
           "matrix is not square (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }
  Matrix m = Matrix::Zero(rows, cols);

  if (dense) {
    const long expected = rows * cols;
    long count = 0;
    for (std::vector<Token> line = r.next_line(); !line.empty(); line = r.next_line()) {
      for (const Token& t : line) {
        if (count == expected) r.fail(t.line, t.column, "more than " + std::to_string(expected) + " entries");
        m(count % rows, count / rows) = to_double(r, t);
        ++count;
      }
    }
    if (count < expected) {
      r.fail(r.line() + 1, 1,
             "missing entry " + std::to_string(count + 1) + " of " + std::to_string(expected) +
                 " (row " + std::to_string(count % rows + 1) + ", column " +
                 std::to_string(count / rows + 1) + ")");
    }
  } else {
    const long nnz = to_long(r, size[2], "entry count");
    if (nnz < 0) r.fail(size[2].line, size[2].column, "negative entry count");
    std::set<std::pair<long, long>> seen;
    for (long k = 0; k < nnz; ++k) {
      const std::vector<Token> line = r.next_line();
      if (line.empty()) {
        r.fail(r.line() + 1, 1, "missing entry " + std::to_string(k + 1) + " of " + std::to_string(nnz));
      }
      if (line.size() != 3) r.fail(line[0].line, 1, "coordinate entry must be 'row col value'");
      const long i = to_long(r, line[0], "row index");
      const long j = to_long(r, line[1], "column index");
      if (i < 1 || i > rows) r.fail(line[0].line, line[0].column, "row index out of range");
      if (j < 1 || j > cols) r.fail(line[1].line, line[1].column, "column index out of range");
      if (!seen.emplace(i, j).second) r.fail(line[0].line, 1, "duplicate entry");
      m(i - 1, j - 1) = to_double(r, line[2]);
    }
    const std::vector<Token> extra = r.next_line();
    if (!extra.empty()) r.fail(extra[0].line, extra[0].column, "more than " + std::to_string(nnz) + " entries");
  }
  if (!m.allFinite()) throw ParseError(r.source(), 0, 0, "non-finite entries");
  return m;
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << m(i, j) << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_matrix_market(out, m);
}

Vector parse_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_vector(in, path.string());
}

Vector parse_vector(std::istream& in, std::string_view source) {
  Reader r(in, source);
  std::vector<double> values;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto cut = text.find_first_of("%#");
    if (cut != std::string::npos) text.resize(cut);
    for (const Token& t : split(text, line)) values.push_back(to_double(r, t));
  }
  if (values.empty()) throw ParseError(std::string(source), line, 0, "no values");
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace ivdae::cli
