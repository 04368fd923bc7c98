#include "skeweig/mmio.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "skeweig/errors.hpp"

namespace skeweig::io {

namespace {

enum class Layout { Coordinate, Array };
enum class Field { Real, Complex };
enum class Symmetry { General, SkewSymmetric };

struct Header {
  Layout layout;
  Field field;
  Symmetry symmetry;
};

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string lower_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  Header header() {
    std::string text;
    if (!std::getline(in_, text)) throw FormatError("empty input, expected a %%MatrixMarket header", 1);
    ++line_;
    const auto tok = split(text);
    if (tok.size() != 5 || tok[0] != "%%MatrixMarket")
      throw FormatError("expected '%%MatrixMarket matrix <layout> <field> <symmetry>'", line_);
    if (lower_case(tok[1]) != "matrix") throw FormatError("only 'matrix' objects are supported", line_);

    Header h{};
    const auto layout = lower_case(tok[2]);
    if (layout == "coordinate")
      h.layout = Layout::Coordinate;
    else if (layout == "array")
      h.layout = Layout::Array;
    else
      throw FormatError("unknown layout '" + layout + "'", line_);

    const auto field = lower_case(tok[3]);
    if (field == "real" || field == "double" || field == "integer")
      h.field = Field::Real;
    else if (field == "complex")
      h.field = Field::Complex;
    else
      throw FormatError("unsupported field '" + field + "'", line_);

    const auto sym = lower_case(tok[4]);
    if (sym == "general")
      h.symmetry = Symmetry::General;
    else if (sym == "skew-symmetric")
      h.symmetry = Symmetry::SkewSymmetric;
    else
      throw FormatError("unsupported symmetry '" + sym + "'", line_);
    return h;
  }

  // Next non-comment, non-blank line split into tokens; false at EOF.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, buffer_)) {
      ++line_;
      const auto first = buffer_.find_first_not_of(" \t\r");
      if (first == std::string::npos || buffer_[first] == '%') continue;
      tokens = split(buffer_);
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }

  Index parse_index(std::string_view s) const {
    Index v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw FormatError("invalid integer '" + std::string(s) + "'", line_);
    return v;
  }

  double parse_double(std::string_view s) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw FormatError("invalid number '" + std::string(s) + "'", line_);
    return v;
  }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_ = 0;
};

// Entries of a file in storage order. For array layout `row`/`col` are
// filled in from the column-major position.
struct Entry {
  Index row;
  Index col;
  double re;
  double im;
};

struct Parsed {
  Header header;
  Index rows;
  Index cols;
  std::vector<Entry> entries;
  std::size_t last_line;
};

Parsed parse(std::istream& in) {
  Reader r(in);
  Parsed p{};
  p.header = r.header();
  const bool coordinate = p.header.layout == Layout::Coordinate;
  const bool skew = p.header.symmetry == Symmetry::SkewSymmetric;
  const std::size_t values_per_entry = p.header.field == Field::Complex ? 2 : 1;

  std::vector<std::string_view> tok;
  if (!r.next(tok)) throw FormatError("missing size line", r.line() + 1);
  if (tok.size() != (coordinate ? 3u : 2u))
    throw FormatError(coordinate ? "size line must be 'rows cols entries'" : "size line must be 'rows cols'", r.line());
  p.rows = r.parse_index(tok[0]);
  p.cols = r.parse_index(tok[1]);
  if (p.rows < 0 || p.cols < 0) throw FormatError("negative dimension", r.line());
  if (skew && p.rows != p.cols) throw FormatError("skew-symmetric matrix must be square", r.line());

  std::size_t expected = 0;
  if (coordinate) {
    const Index nnz = r.parse_index(tok[2]);
    if (nnz < 0) throw FormatError("negative entry count", r.line());
    expected = static_cast<std::size_t>(nnz);
  } else {
    expected = skew ? static_cast<std::size_t>(p.rows * (p.rows - 1) / 2) : static_cast<std::size_t>(p.rows * p.cols);
  }
  p.entries.reserve(expected);

  Index arr_row = skew ? 1 : 0;
  Index arr_col = 0;
  while (p.entries.size() < expected) {
    if (!r.next(tok))
      throw FormatError("expected " + std::to_string(expected) + " entries, found " + std::to_string(p.entries.size()),
                        r.line());
    Entry e{};
    std::size_t k = 0;
    if (coordinate) {
      if (tok.size() != 2 + values_per_entry) throw FormatError("malformed coordinate entry", r.line());
      e.row = r.parse_index(tok[0]) - 1;
      e.col = r.parse_index(tok[1]) - 1;
      if (e.row < 0 || e.row >= p.rows || e.col < 0 || e.col >= p.cols)
        throw FormatError("index out of range", r.line());
      k = 2;
    } else {
      if (tok.size() != values_per_entry) throw FormatError("malformed array entry", r.line());
      e.row = arr_row;
      e.col = arr_col;
      if (++arr_row == p.rows) {
        ++arr_col;
        arr_row = skew ? arr_col + 1 : 0;
      }
    }
    e.re = r.parse_double(tok[k]);
    e.im = values_per_entry == 2 ? r.parse_double(tok[k + 1]) : 0.0;
    p.entries.push_back(e);
  }
  if (r.next(tok)) throw FormatError("unexpected trailing data", r.line());
  p.last_line = r.line();
  return p;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

DenseSkewMatrix read_skew_matrix(std::istream& in) {
  const Parsed p = parse(in);
  if (p.header.field != Field::Real) throw FormatError("skew matrix must have a real field", 1);
  if (p.rows != p.cols) throw FormatError("skew matrix must be square", 2);
  const Index n = p.rows;

  if (p.header.symmetry == Symmetry::SkewSymmetric) {
    DenseSkewMatrix a(n);
    Matrix seen(n, n);
    for (const auto& e : p.entries) {
      if (e.row == e.col) throw ValidationError("diagonal entry of a skew-symmetric matrix must be zero");
      if (e.row < e.col) throw FormatError("skew-symmetric file lists an upper-triangle entry", p.last_line);
      if (seen(e.row, e.col) != 0.0) throw FormatError("duplicate entry", p.last_line);
      seen(e.row, e.col) = 1.0;
      a.lower(e.row, e.col) = e.re;
    }
    return a;
  }

  Matrix full(n, n);
  for (const auto& e : p.entries) full(e.row, e.col) += e.re;
  return DenseSkewMatrix::from_dense(full, true);
}

DenseSkewMatrix read_skew_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_skew_matrix(in);
}

void write_skew_matrix(std::ostream& out, const DenseSkewMatrix& a) {
  const Index n = a.size();
  out << "%%MatrixMarket matrix coordinate real skew-symmetric\n";
  out << n << ' ' << n << ' ' << n * (n - 1) / 2 << '\n';
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) out << i + 1 << ' ' << j + 1 << ' ' << format_double(a.lower(i, j)) << '\n';
}

void write_skew_matrix(const std::filesystem::path& path, const DenseSkewMatrix& a) {
  auto out = open_output(path);
  write_skew_matrix(out, a);
  finish(out, path);
}

ComplexPlanes read_complex_matrix(std::istream& in) {
  const Parsed p = parse(in);
  if (p.header.symmetry != Symmetry::General) throw FormatError("complex blocks must be stored as 'general'", 1);
  ComplexPlanes m(p.rows, p.cols);
  for (const auto& e : p.entries) {
    m.re(e.row, e.col) += e.re;
    m.im(e.row, e.col) += e.im;
  }
  return m;
}

ComplexPlanes read_complex_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_complex_matrix(in);
}

void write_complex_matrix(std::ostream& out, const ComplexPlanes& m) {
  out << "%%MatrixMarket matrix array complex general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << format_double(m.re(i, j)) << ' ' << format_double(m.im(i, j)) << '\n';
}

void write_complex_matrix(const std::filesystem::path& path, const ComplexPlanes& m) {
  auto out = open_output(path);
  write_complex_matrix(out, m);
  finish(out, path);
}

std::vector<double> read_values(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 1) throw FormatError("expected one value per line", lineno);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok[0].data(), tok[0].data() + tok[0].size(), v);
    if (ec != std::errc() || ptr != tok[0].data() + tok[0].size())
      throw FormatError("invalid number '" + std::string(tok[0]) + "'", lineno);
    values.push_back(v);
  }
  return values;
}

void write_values(const std::filesystem::path& path, std::span<const double> values) {
  auto out = open_output(path);
  for (double v : values) out << format_double(v) << '\n';
  finish(out, path);
}

}  // namespace skeweig::io
