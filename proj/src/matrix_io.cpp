#include "psn/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace psn {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Next line that is neither blank nor a '%' comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  return out;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DomainError("Matrix Market: empty input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw DomainError("Matrix Market: missing '%%MatrixMarket matrix' banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") throw DomainError("Matrix Market: unknown format " + format);
  if (field != "real" && field != "double" && field != "integer") {
    throw DomainError("Matrix Market: unsupported field " + field);
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") throw DomainError("Matrix Market: unsupported symmetry " + symmetry);

  std::string line;
  if (!next_data_line(in, line)) throw DomainError("Matrix Market: missing size line");
  std::istringstream size_line(line);
  long rows = 0, cols = 0, entries = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> entries;
  if (!size_line || rows <= 0 || cols <= 0 || entries < 0) throw DomainError("Matrix Market: bad size line");
  if (symmetric && rows != cols) throw DomainError("Matrix Market: symmetric matrix must be square");

  Matrix m = Matrix::Zero(rows, cols);
  if (format == "array") {
    // Column-major; symmetric files list only the lower triangle.
    for (long j = 0; j < cols; ++j) {
      for (long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line)) throw DomainError("Matrix Market: truncated array data");
        std::istringstream vs(line);
        double v = 0;
        if (!(vs >> v)) throw DomainError("Matrix Market: bad value '" + line + "'");
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
      }
    }
  } else {
    for (long k = 0; k < entries; ++k) {
      if (!next_data_line(in, line)) throw DomainError("Matrix Market: truncated coordinate data");
      std::istringstream es(line);
      long i = 0, j = 0;
      double v = 0;
      if (!(es >> i >> j >> v)) throw DomainError("Matrix Market: bad entry '" + line + "'");
      if (i < 1 || i > rows || j < 1 || j > cols) throw DomainError("Matrix Market: entry out of range");
      m(i - 1, j - 1) = v;
      if (symmetric) m(j - 1, i - 1) = v;
    }
  }
  return m;
}

Matrix read_matrix_market(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_market(in);
}

SymmetricMatrix read_symmetric_matrix_market(const std::string& path) {
  return SymmetricMatrix(read_matrix_market(path));
}

void write_matrix_market(std::ostream& out, const SymmetricMatrix& m, MatrixMarketFormat format) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const Matrix& a = m.dense();
  if (format == MatrixMarketFormat::array) {
    out << "%%MatrixMarket matrix array real symmetric\n" << n << ' ' << n << '\n';
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j; i < n; ++i) out << format_real(a(i, j)) << '\n';
    }
    return;
  }
  long nnz = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) nnz += a(i, j) != 0.0;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n" << n << ' ' << n << ' ' << nnz << '\n';
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      if (a(i, j) != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << format_real(a(i, j)) << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SymmetricMatrix& m, MatrixMarketFormat format) {
  auto out = open_out(path);
  write_matrix_market(out, m, format);
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << format_real(m(i, j)) << '\n';
  }
}

Vector read_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    std::istringstream vs(line);
    double v = 0;
    std::string rest;
    if (!(vs >> v) || (vs >> rest)) {
      throw DomainError("vector file line " + std::to_string(line_no) + ": expected one number");
    }
    values.push_back(v);
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector read_vector(const std::string& path) {
  auto in = open_in(path);
  return read_vector(in);
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_real(v(i)) << '\n';
}

void write_vector(const std::string& path, const Vector& v) {
  auto out = open_out(path);
  write_vector(out, v);
}

}  // namespace psn
