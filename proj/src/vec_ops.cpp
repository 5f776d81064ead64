#include "polmin/vec_ops.hpp"

#include <cmath>

namespace polmin::vec {

bool avx2_available() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {
Backend g_backend = avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend backend() { return g_backend; }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) return;
  g_backend = b;
}

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  // Neumaier-compensated accumulation: unlike plain Kahan it survives the
  // case where the running sum is cancelled away entirely
  double sum = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = x[i] * y[i];
    const double t = sum + p;
    c += std::abs(sum) >= std::abs(p) ? (sum - t) + p : (p - t) + sum;
    sum = t;
  }
  return sum + c;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void square_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

}  // namespace detail

double dot(std::span<const double> x, std::span<const double> y) {
  if (g_backend == Backend::avx2)
    return detail::dot_avx2(x.data(), y.data(), x.size());
  return detail::dot_scalar(x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (g_backend == Backend::avx2)
    detail::axpy_avx2(a, x.data(), y.data(), x.size());
  else
    detail::axpy_scalar(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) {
  if (g_backend == Backend::avx2)
    detail::scale_avx2(a, x.data(), x.size());
  else
    detail::scale_scalar(a, x.data(), x.size());
}

void square(std::span<const double> x, std::span<double> out) {
  if (g_backend == Backend::avx2)
    detail::square_avx2(x.data(), out.data(), x.size());
  else
    detail::square_scalar(x.data(), out.data(), x.size());
}

}  // namespace polmin::vec
