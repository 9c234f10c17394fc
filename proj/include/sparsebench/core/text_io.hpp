#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sparsebench/core/csr.hpp"

namespace sparsebench {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) detail::fail(ErrorCode::invalid_argument, "cannot format double");
  return {buf, end};
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    detail::fail(ErrorCode::parse_error, "not a number: '" + std::string(s) + "'");
  return v;
}

namespace detail {

/// Line reader that skips blank lines and `%` comments and tracks line numbers.
class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }

  std::uint64_t line_no() const noexcept { return line_no_; }

  [[noreturn]] void error(const std::string& what) const {
    throw IndexedError(ErrorCode::parse_error, line_no_, what + " on line");
  }

private:
  std::istream& in_;
  std::uint64_t line_no_ = 0;
};

template <class T>
T read_field(std::istringstream& fields, const LineReader& reader, const char* name) {
  std::string token;
  if (!(fields >> token)) reader.error(std::string("missing ") + name);
  if constexpr (std::is_floating_point_v<T>) {
    try {
      return parse_double(token);
    } catch (const Error&) {
      reader.error(std::string("bad ") + name);
    }
  } else {
    T v{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      reader.error(std::string("bad ") + name);
    return v;
  }
}

inline void expect_end(std::istringstream& fields, const LineReader& reader) {
  std::string extra;
  if (fields >> extra) reader.error("unexpected trailing field '" + extra + "'");
}

}  // namespace detail

/// Text exchange format: header `n_rows n_cols nnz`, then one `row col value`
/// line per stored entry (0-based).
inline void write_matrix(std::ostream& out, const CsrMatrix& a) {
  out << a.n_rows() << ' ' << a.n_cols() << ' ' << a.nnz() << '\n';
  for (Index i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (Index k = 0; k < cols.size(); ++k)
      out << i << ' ' << cols[k] << ' ' << format_double(vals[k]) << '\n';
  }
}

inline CsrMatrix read_matrix(std::istream& in) {
  detail::LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) reader.error("missing header");
  CooTriplets t;
  t.n_rows = detail::read_field<Index>(fields, reader, "n_rows");
  t.n_cols = detail::read_field<Index>(fields, reader, "n_cols");
  const auto nnz = detail::read_field<Index>(fields, reader, "nnz");
  detail::expect_end(fields, reader);
  t.entries.reserve(nnz);
  for (Index k = 0; k < nnz; ++k) {
    if (!reader.next(fields)) reader.error("expected " + std::to_string(nnz) + " entries, file ended");
    const auto r = detail::read_field<Index>(fields, reader, "row");
    const auto c = detail::read_field<Index>(fields, reader, "col");
    const auto v = detail::read_field<double>(fields, reader, "value");
    detail::expect_end(fields, reader);
    if (r >= t.n_rows || c >= t.n_cols)
      throw IndexedError(ErrorCode::invalid_index, reader.line_no(), "entry index out of range on line");
    t.add(r, c, v);
  }
  if (reader.next(fields)) reader.error("more entries than declared");
  return coo_to_csr(t);
}

inline void write_matrix_file(const std::string& path, const CsrMatrix& a) {
  std::ofstream out(path);
  if (!out) detail::fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  write_matrix(out, a);
  if (!out) detail::fail(ErrorCode::io_error, "write failed: " + path);
}

inline CsrMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorCode::io_error, "cannot open " + path);
  return read_matrix(in);
}

}  // namespace sparsebench
