#include "polmin/lowrank.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "polmin/errors.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

namespace {

// y += a * column j of the row-major matrix m
void axpy_col(double a, const Matrix& m, std::size_t j, std::span<double> y) {
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] += a * m(i, j);
}

std::vector<double> column(const Matrix& m, std::size_t j) {
  std::vector<double> c(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) c[i] = m(i, j);
  return c;
}

// column j of U = [X  Y^T]
std::vector<double> u_column(const LowRankModel& model, std::size_t j) {
  const std::size_t k = model.k();
  if (j < k) return column(model.X().matrix(), j);
  auto row = model.Y().row(j - k);
  return std::vector<double>(row.begin(), row.end());
}

// Solve the dense 2k x 2k system S y = b by partial-pivot elimination.
// A pivot below 1e-12 signals that the Woodbury capacitance matrix is
// numerically singular.
std::vector<double> solve_capacitance(Matrix s, std::vector<double> b) {
  const std::size_t d = s.rows();
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::abs(s(r, col)) > std::abs(s(piv, col))) piv = r;
    if (std::abs(s(piv, col)) < 1e-12)
      throw ValidationError(
          "capacitance matrix numerically singular; check spectral_condition");
    if (piv != col) {
      for (std::size_t j = 0; j < d; ++j) std::swap(s(piv, j), s(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < d; ++r) {
      double f = s(r, col) / s(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < d; ++j) s(r, j) -= f * s(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> y(d);
  for (std::size_t i = d; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < d; ++j) acc -= s(i, j) * y[j];
    y[i] = acc / s(i, i);
  }
  return y;
}

double combined_frobenius(const LowRankModel& model) {
  double fx = model.X().matrix().frobenius_norm();
  double fy = model.Y().matrix().frobenius_norm();
  return std::sqrt(fx * fx + fy * fy);
}

}  // namespace

LowRankModel::LowRankModel(Graph g, TopicMatrix x, TopicMatrix y, double c)
    : g_(std::move(g)), x_(std::move(x)), y_(std::move(y)), c_(c) {
  const std::size_t n = g_.num_vertices();
  if (!(c_ >= 0.0)) throw ValidationError("C must be nonnegative");
  if (!g_.connected()) throw ValidationError("model requires a connected graph");
  if (x_.rows() != n || y_.cols() != n)
    throw ValidationError("topic matrix dimensions do not match the graph");
  if (x_.cols() != y_.rows())
    throw ValidationError("X and Y disagree on the topic count");
  if (x_.cols() > n) throw ValidationError("k must be at most n");
  scale_ = c_ * g_.total_weight() / (2.0 * double(n));
  std::vector<double> ones(n, 1.0);
  ax_degree_ = ax_matvec(*this, ones);
}

LowRankModel LowRankModel::with_x(TopicMatrix x) const {
  return LowRankModel(g_, std::move(x), y_, c_);
}

SpdOperator LowRankModel::op() const {
  std::vector<double> shift(ax_degree_.begin(), ax_degree_.end());
  for (double& v : shift) v += 1.0;
  return SpdOperator(g_, std::move(shift));
}

double weight_identity(const TopicMatrix& x, const TopicMatrix& y) {
  // all entries of X Y and Y^T X^T are nonnegative, so the (1,1)-norm is
  // 1^T (X (Y 1)) + its transpose twin
  const std::size_t n = x.rows();
  std::vector<double> y_rowsums(y.rows());
  for (std::size_t j = 0; j < y.rows(); ++j) {
    double s = 0.0;
    for (double v : y.row(j)) s += v;
    y_rowsums[j] = s;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    total += vec::dot(x.row(i), y_rowsums);
  return 2.0 * total;
}

std::vector<double> apply_v(const LowRankModel& model,
                            std::span<const double> v) {
  const std::size_t k = model.k();
  std::vector<double> out(2 * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) out[j] = vec::dot(model.Y().row(j), v);
  // lower block: X^T v
  const Matrix& x = model.X().matrix();
  for (std::size_t i = 0; i < x.rows(); ++i)
    vec::axpy(v[i], x.row(i), std::span<double>(out).subspan(k, k));
  return out;
}

std::vector<double> apply_u(const LowRankModel& model,
                            std::span<const double> y) {
  const std::size_t k = model.k();
  const std::size_t n = model.n();
  std::vector<double> out(n, 0.0);
  const Matrix& x = model.X().matrix();
  for (std::size_t i = 0; i < n; ++i)
    out[i] = vec::dot(x.row(i), y.subspan(0, k));
  for (std::size_t j = 0; j < k; ++j)
    vec::axpy(y[k + j], model.Y().row(j), out);
  return out;
}

std::vector<double> ax_matvec(const LowRankModel& model,
                              std::span<const double> v) {
  if (v.size() != model.n()) throw ValidationError("ax_matvec: length mismatch");
  auto vv = apply_v(model, v);
  auto out = apply_u(model, vv);
  vec::scale(model.scale(), out);
  return out;
}

SpectralCondition spectral_condition(const LowRankModel& model) {
  const double cw = model.C() * model.W();
  const double two_n = 2.0 * double(model.n());
  if (cw == 0.0)
    return {0.0, std::numeric_limits<double>::infinity(), true};
  const double threshold = 0.99 * two_n / cw;

  // B = V M^-1 U, estimated through 2k high-accuracy column solves
  const std::size_t d = 2 * model.k();
  auto op = model.op();
  Matrix b(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    auto r = solve(op, u_column(model, j), 1e-10);
    auto col = apply_v(model, r);
    for (std::size_t i = 0; i < d; ++i) b(i, j) = col[i];
  }
  // power iteration on B^T B for sigma_max(B)
  std::vector<double> w(d, 1.0 / std::sqrt(double(d)));
  double sigma = 0.0;
  std::vector<double> bw(d), btbw(d);
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < d; ++i) bw[i] = vec::dot(b.row(i), w);
    std::fill(btbw.begin(), btbw.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) vec::axpy(bw[i], b.row(i), btbw);
    double lambda = vec::nrm2(btbw);
    if (lambda == 0.0) return {0.0, threshold, true};
    double next = std::sqrt(lambda);
    vec::scale(1.0 / lambda, btbw);
    w = btbw;
    if (it > 0 && std::abs(next - sigma) < 1e-9 * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return {sigma, threshold, sigma <= threshold};
}

std::vector<double> approx_opinions(const LowRankModel& model,
                                    std::span<const double> s, double eps,
                                    ApproxInfo* info,
                                    const SpectralCondition* cond) {
  const std::size_t n = model.n();
  const std::size_t k = model.k();
  if (s.size() != n) throw ValidationError("approx_opinions: length mismatch");
  if (!(eps > 0.0)) throw ValidationError("approx_opinions: eps must be > 0");
  auto op = model.op();
  const double cw = model.C() * model.W();
  if (cw == 0.0) {
    if (info) *info = ApproxInfo{eps, 0.0, 0.0, true};
    return solve(op, s, eps);
  }
  const double two_n = 2.0 * double(n);
  // Frobenius norms upper-bound the spectral norms in the error budgets
  const double unorm = combined_frobenius(model);
  const double vnorm = unorm;
  const double snorm = std::max(vec::nrm2(s), 1e-300);

  const double eps_z1 =
      eps / 4.0 * std::min(1.0, two_n / (200.0 * cw * unorm * vnorm));
  const double eps_r =
      1.0 / (2.0 * double(k)) *
      std::min(0.009 * two_n / (cw * vnorm),
               two_n / (1e5 * cw * vnorm) *
                   std::min(100.0, two_n / cw * (eps / 4.0) /
                                       (unorm * vnorm * snorm)));
  const double eps_z2 = two_n / cw * eps / 4.0;
  if (info) {
    info->eps_z1 = eps_z1;
    info->eps_r = eps_r;
    info->eps_z2 = eps_z2;
    info->verified = cond ? std::optional<bool>(cond->satisfied) : std::nullopt;
  }

  auto z1 = solve(op, s, eps_z1);
  auto y1 = apply_v(model, z1);

  // capacitance S = I - scale * V R, with R the column solves against U;
  // columns of R are consumed immediately
  const std::size_t d = 2 * k;
  Matrix cap(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    auto r = solve(op, u_column(model, j), eps_r);
    auto col = apply_v(model, r);
    for (std::size_t i = 0; i < d; ++i)
      cap(i, j) = (i == j ? 1.0 : 0.0) - model.scale() * col[i];
  }
  auto y2 = solve_capacitance(std::move(cap), std::move(y1));
  auto y3 = apply_u(model, y2);
  auto z2 = solve(op, y3, eps_z2);

  vec::axpy(model.scale(), z2, z1);
  return z1;
}

std::vector<double> exact_opinions_dense(const LowRankModel& model,
                                         std::span<const double> s,
                                         std::size_t dense_cap) {
  const std::size_t n = model.n();
  if (s.size() != n) throw ValidationError("dense opinions: length mismatch");
  if (n > dense_cap)
    throw ValidationError("dense opinion path capped at n = " +
                          std::to_string(dense_cap));
  const Graph& g = model.graph();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) += g.weighted_degree(i) + model.ax_degree()[i];
    auto nbr = g.neighbors(i);
    auto wts = g.weights(i);
    for (std::size_t j = 0; j < nbr.size(); ++j) m(i, nbr[j]) -= wts[j];
  }
  // subtract A_X = scale (X Y + (X Y)^T)
  const std::size_t k = model.k();
  Eigen::MatrixXd x(n, k), y(k, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) x(i, j) = model.X()(i, j);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) y(i, j) = model.Y()(i, j);
  Eigen::MatrixXd xy = x * y;
  m -= model.scale() * (xy + xy.transpose());

  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(s.data(), n);
  Eigen::VectorXd sol = m.ldlt().solve(rhs);
  return std::vector<double>(sol.data(), sol.data() + n);
}

double approx_objective(const LowRankModel& model, std::span<const double> s,
                        double eps) {
  auto z = approx_opinions(model, s, eps / std::sqrt(double(model.n())));
  return vec::dot(s, z);
}

Bounds::Bounds(Matrix lower, Matrix upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.rows() != upper_.rows() || lower_.cols() != upper_.cols())
    throw ValidationError("bounds shape mismatch");
  for (std::size_t i = 0; i < lower_.rows(); ++i) {
    double lsum = 0.0, usum = 0.0;
    for (std::size_t j = 0; j < lower_.cols(); ++j) {
      double l = lower_(i, j), u = upper_(i, j);
      if (!(0.0 <= l && l <= u && u <= 1.0))
        throw ValidationError("bounds must satisfy 0 <= lower <= upper <= 1");
      lsum += l;
      usum += u;
    }
    if (lsum > 1.0 + 1e-12 || usum < 1.0 - 1e-12)
      throw ValidationError("infeasible bounds at row " + std::to_string(i));
  }
}

Bounds bounds_from_theta(const TopicMatrix& x, double theta,
                         std::span<const std::size_t> frozen_topics) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ValidationError("theta must lie in [0, 1]");
  Matrix lower(x.rows(), x.cols()), upper(x.rows(), x.cols());
  std::vector<char> frozen(x.cols(), 0);
  for (std::size_t j : frozen_topics) {
    if (j >= x.cols()) throw ValidationError("frozen topic id out of range");
    frozen[j] = 1;
  }
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (frozen[j]) {
        lower(i, j) = upper(i, j) = x(i, j);
      } else {
        lower(i, j) = std::max(0.0, x(i, j) - theta);
        upper(i, j) = std::min(1.0, x(i, j) + theta);
      }
    }
  return Bounds(std::move(lower), std::move(upper));
}

}  // namespace polmin
