#include "trieig/matrix_market.hpp"

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace trieig {
namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_value(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("Matrix Market: bad number '" + token + "'");
  }
  if (used != token.size()) throw std::runtime_error("Matrix Market: bad number '" + token + "'");
  return v;
}

}  // namespace

void write_matrix_market(std::ostream& out, const TriMatrix& m, MarketLayout layout,
                         const std::string& comment) {
  const std::size_t n = m.size();
  out << "%%MatrixMarket matrix " << (layout == MarketLayout::Array ? "array" : "coordinate")
      << " real general\n";
  out << "% shape: " << (m.shape() == Shape::Lower ? "lower" : "upper") << '\n';
  std::istringstream lines(comment);
  for (std::string line; std::getline(lines, line);) out << "% " << line << '\n';
  if (layout == MarketLayout::Array) {
    out << n << ' ' << n << '\n';
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) out << format_value(m(i, j)) << '\n';
    }
    return;
  }
  out << n << ' ' << n << ' ' << n * (n + 1) / 2 << '\n';
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (m.in_triangle(i, j)) out << i + 1 << ' ' << j + 1 << ' ' << format_value(m(i, j)) << '\n';
    }
  }
}

TriMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("Matrix Market: empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || object != "matrix" || field != "real" || symmetry != "general") {
    throw std::runtime_error("Matrix Market: unsupported header '" + line + "'");
  }
  if (format != "array" && format != "coordinate") {
    throw std::runtime_error("Matrix Market: unknown format '" + format + "'");
  }

  std::optional<Shape> shape;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != '%') break;
    if (line == "% shape: lower") shape = Shape::Lower;
    if (line == "% shape: upper") shape = Shape::Upper;
  }
  std::istringstream size_line(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows != cols) throw std::runtime_error("Matrix Market: bad size line '" + line + "'");

  const std::size_t n = rows;
  std::vector<double> dense(n * n, 0.0);
  std::string token;
  if (format == "array") {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!(in >> token)) throw std::runtime_error("Matrix Market: truncated array data");
        dense[i * n + j] = parse_value(token);
      }
    }
  } else {
    for (std::size_t e = 0; e < nnz; ++e) {
      std::size_t i = 0, j = 0;
      if (!(in >> i >> j >> token) || i < 1 || j < 1 || i > n || j > n) {
        throw std::runtime_error("Matrix Market: bad coordinate entry");
      }
      dense[(i - 1) * n + (j - 1)] = parse_value(token);
    }
  }

  if (!shape) {
    bool upper_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) upper_zero = upper_zero && dense[i * n + j] == 0.0;
    }
    shape = upper_zero ? Shape::Lower : Shape::Upper;
  }
  try {
    return TriMatrix(n, *shape, std::move(dense));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("Matrix Market: ") + e.what());
  }
}

}  // namespace trieig
