#include "polmin/matrix.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "polmin/errors.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw ValidationError("matrix data size mismatch");
}

double Matrix::frobenius_norm() const {
  return std::sqrt(vec::dot(data_, data_));
}

namespace {
void check_rows(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("topic matrix entry outside [0, 1] at row " +
                              std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("topic matrix row " + std::to_string(i) +
                            " sums to " + std::to_string(sum));
  }
}
}  // namespace

TopicMatrix::TopicMatrix(Matrix m) : m_(std::move(m)) { check_rows(m_); }

TopicMatrix TopicMatrix::renormalized(Matrix m, double renorm_tol) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j);
    if (std::abs(sum - 1.0) > renorm_tol)
      throw ValidationError("row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) +
                            ", beyond the renormalization tolerance");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= sum;
  }
  return TopicMatrix(std::move(m));
}

Matrix read_matrix_tsv(std::istream& in) {
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t c = 0;
    double v;
    while (ls >> v) {
      data.push_back(v);
      ++c;
    }
    if (!ls.eof()) throw ParseError("malformed matrix entry", lineno);
    if (rows == 0)
      cols = c;
    else if (c != cols)
      throw ParseError("ragged matrix row", lineno);
    ++rows;
  }
  if (rows == 0) throw ValidationError("empty matrix file");
  return Matrix(rows, cols, std::move(data));
}

void write_matrix_tsv(std::ostream& out, const Matrix& m) {
  out.precision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << '\t';
      out << m(i, j);
    }
    out << '\n';
  }
}

std::vector<double> read_vector(std::istream& in) {
  std::vector<double> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x;
    if (!(ls >> x)) throw ParseError("malformed vector entry", lineno);
    v.push_back(x);
  }
  return v;
}

void write_vector(std::ostream& out, std::span<const double> v) {
  out.precision(17);
  for (double x : v) out << x << '\n';
}

}  // namespace polmin
