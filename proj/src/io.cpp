#include "mwdisc/io.hpp"

#include "mwdisc/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace mwdisc {

MatrixFormat parse_format(std::string_view name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "mm" || name == "matrixmarket") return MatrixFormat::MatrixMarket;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "' (csv or mm)");
}

namespace {

std::string where(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

double to_number(std::string_view field, std::size_t line, std::size_t col) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::NonNumeric, where(line, col) + ": '" + std::string(field) + "' is not a finite number");
  }
  return v;
}

Matrix parse_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, where(1, 1) + ": empty input");
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) throw Error(ErrorCode::ParseError, where(l + 1, 1) + ": blank line");
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t col = 1;
    while (true) {
      const std::size_t comma = lines[l].find(',', start);
      const std::string_view field = lines[l].substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      row.push_back(to_number(field, l + 1, col));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::RaggedRows, where(l + 1, 1) + ": " + std::to_string(row.size()) +
                                             " fields, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t s = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > s) out.push_back(line.substr(s, i - s));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

long to_index(std::string_view field, std::size_t line, std::size_t col) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError, where(line, col) + ": '" + std::string(field) + "' is not an integer");
  }
  return v;
}

Matrix parse_mm(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, where(1, 1) + ": empty input");
  const auto head = tokens(lines[0]);
  if (head.size() != 5 || head[0] != "%%MatrixMarket" || lower(head[1]) != "matrix" ||
      lower(head[2]) != "coordinate" || (lower(head[3]) != "real" && lower(head[3]) != "integer") ||
      lower(head[4]) != "general") {
    throw Error(ErrorCode::ParseError, where(1, 1) + ": expected '%%MatrixMarket matrix coordinate real general'");
  }
  std::size_t l = 1;
  while (l < lines.size() && (trim(lines[l]).empty() || trim(lines[l]).front() == '%')) ++l;
  if (l == lines.size()) throw Error(ErrorCode::ParseError, where(l + 1, 1) + ": missing size line");
  const auto size = tokens(lines[l]);
  if (size.size() != 3) throw Error(ErrorCode::ParseError, where(l + 1, 1) + ": size line needs rows, columns, entries");
  const long m = to_index(size[0], l + 1, 1);
  const long n = to_index(size[1], l + 1, 2);
  const long nnz = to_index(size[2], l + 1, 3);
  if (m < 1 || n < 1 || nnz < 0) throw Error(ErrorCode::ParseError, where(l + 1, 1) + ": invalid dimensions");
  Matrix out = Matrix::Zero(m, n);
  long seen = 0;
  for (++l; l < lines.size(); ++l) {
    const std::string_view t = trim(lines[l]);
    if (t.empty() || t.front() == '%') continue;
    const auto f = tokens(t);
    if (f.size() != 3) throw Error(ErrorCode::ParseError, where(l + 1, 1) + ": expected 'row column value'");
    const long i = to_index(f[0], l + 1, 1);
    const long j = to_index(f[1], l + 1, 2);
    if (i < 1 || i > m) throw Error(ErrorCode::ParseError, where(l + 1, 1) + ": row index out of range");
    if (j < 1 || j > n) throw Error(ErrorCode::ParseError, where(l + 1, 2) + ": column index out of range");
    out(i - 1, j - 1) += to_number(f[2], l + 1, 3);
    ++seen;
  }
  if (seen != nnz) {
    throw Error(ErrorCode::ParseError, where(lines.size(), 1) + ": " + std::to_string(seen) +
                                           " entries, header announced " + std::to_string(nnz));
  }
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Matrix parse_matrix_text(std::string_view text, MatrixFormat format) {
  return format == MatrixFormat::Csv ? parse_csv(text) : parse_mm(text);
}

Matrix parse_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_text(ss.str(), format);
}

std::string format_matrix(const Matrix& m, MatrixFormat format) {
  std::string out;
  if (format == MatrixFormat::Csv) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) out += (j ? "," : "") + g17(m(i, j));
      out += '\n';
    }
    return out;
  }
  Index nnz = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) nnz += m(i, j) != 0.0;
  }
  out = "%%MatrixMarket matrix coordinate real general\n";
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " + std::to_string(nnz) + "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " + g17(m(i, j)) + "\n";
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move output into " + path.string());
  }
}

}  // namespace mwdisc
