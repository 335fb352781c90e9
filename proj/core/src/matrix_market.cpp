// Copyright 2026 The lossyflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lossyflow/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lossyflow/errors.hpp"

namespace lossyflow {
namespace {

struct Header {
  std::string format;    // coordinate | array
  std::string field;     // real | integer
  std::string symmetry;  // general | symmetric
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Header read_header(std::istream& in, int& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("Matrix Market: empty input");
  line_no = 1;
  std::istringstream ss(line);
  std::string banner, object;
  Header h;
  ss >> banner >> object >> h.format >> h.field >> h.symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw InvalidInput("Matrix Market line 1: missing %%MatrixMarket matrix banner");
  h.format = lower(h.format);
  h.field = lower(h.field);
  h.symmetry = lower(h.symmetry);
  if (h.field != "real" && h.field != "integer" && h.field != "double")
    throw InvalidInput("Matrix Market line 1: unsupported field '" + h.field + "'");
  return h;
}

// Next non-comment, non-blank line.
bool next_data_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw InvalidInput("Matrix Market line " + std::to_string(line_no) + ": " + what);
}

std::vector<Triplet> read_coordinate(std::istream& in, int& line_no, int& rows, int& cols) {
  std::string line;
  if (!next_data_line(in, line, line_no)) fail(line_no, "missing size line");
  std::istringstream ss(line);
  long long nnz = 0;
  if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    fail(line_no, "malformed size line");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line, line_no)) fail(line_no, "expected " + std::to_string(nnz) + " entries");
    std::istringstream es(line);
    long long i, j;
    double v;
    if (!(es >> i >> j >> v)) fail(line_no, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols) fail(line_no, "index out of range");
    t.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
  }
  return t;
}

}  // namespace

SparseSym read_matrix_market_sym(std::istream& in) {
  int line_no = 0;
  Header h = read_header(in, line_no);
  if (h.format != "coordinate") fail(1, "expected coordinate format");
  int rows = 0, cols = 0;
  auto t = read_coordinate(in, line_no, rows, cols);
  if (rows != cols) fail(line_no, "symmetric matrix must be square");
  if (h.symmetry == "symmetric") {
    for (auto& e : t)
      if (e.row < e.col) std::swap(e.row, e.col);
    return SparseSym::from_lower(rows, t);
  }
  if (h.symmetry == "general") return SparseSym::from_full(rows, t);
  fail(1, "unsupported symmetry '" + h.symmetry + "'");
}

void write_matrix_market_sym(std::ostream& out, const SparseSym& m) {
  std::size_t lower_nnz = 0;
  for (int j = 0; j < m.n(); ++j)
    for (int p = m.col_ptr()[j]; p < m.col_ptr()[j + 1]; ++p)
      if (m.row_idx()[p] >= j) ++lower_nnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.n() << ' ' << m.n() << ' ' << lower_nnz << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j < m.n(); ++j)
    for (int p = m.col_ptr()[j]; p < m.col_ptr()[j + 1]; ++p)
      if (m.row_idx()[p] >= j) out << m.row_idx()[p] + 1 << ' ' << j + 1 << ' ' << m.values()[p] << '\n';
}

SparseMatrix read_matrix_market_general(std::istream& in) {
  int line_no = 0;
  Header h = read_header(in, line_no);
  if (h.format != "coordinate") fail(1, "expected coordinate format");
  if (h.symmetry != "general") fail(1, "expected general symmetry for a factor matrix");
  int rows = 0, cols = 0;
  auto t = read_coordinate(in, line_no, rows, cols);
  return SparseMatrix::from_triplets(rows, cols, t);
}

void write_matrix_market_general(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j < a.cols(); ++j)
    for (int p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p)
      out << a.row_idx()[p] + 1 << ' ' << j + 1 << ' ' << a.values()[p] << '\n';
}

Vec read_matrix_market_vector(std::istream& in) {
  int line_no = 0;
  Header h = read_header(in, line_no);
  if (h.format != "array") fail(1, "expected array format for a vector");
  std::string line;
  if (!next_data_line(in, line, line_no)) fail(line_no, "missing size line");
  std::istringstream ss(line);
  int rows = 0, cols = 0;
  if (!(ss >> rows >> cols) || rows < 0 || cols != 1) fail(line_no, "vector must be n x 1");
  Vec v(rows);
  for (int i = 0; i < rows; ++i) {
    if (!next_data_line(in, line, line_no)) fail(line_no, "too few vector entries");
    std::istringstream es(line);
    if (!(es >> v[i])) fail(line_no, "malformed vector entry");
  }
  return v;
}

void write_matrix_market_vector(std::ostream& out, std::span<const double> v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double x : v) out << x << '\n';
}

}  // namespace lossyflow
