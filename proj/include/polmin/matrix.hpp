#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace polmin {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double frobenius_norm() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// Row-stochastic user-topic (n x k) or influence-topic (k x n) matrix:
/// nonnegative entries, each row sums to 1 within 1e-9.
class TopicMatrix {
 public:
  TopicMatrix() = default;
  // validates nonnegativity and row sums
  explicit TopicMatrix(Matrix m);

  // accepts rows whose sum is within `renorm_tol` of 1 and renormalizes them
  // exactly; used by the TSV loader
  static TopicMatrix renormalized(Matrix m, double renorm_tol = 1e-6);

  const Matrix& matrix() const { return m_; }
  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  std::span<const double> row(std::size_t i) const { return m_.row(i); }

 private:
  Matrix m_;
};

// TSV: one matrix row per line, tab- or space-separated decimals
Matrix read_matrix_tsv(std::istream& in);
void write_matrix_tsv(std::ostream& out, const Matrix& m);

// one decimal per line
std::vector<double> read_vector(std::istream& in);
void write_vector(std::ostream& out, std::span<const double> v);

}  // namespace polmin
