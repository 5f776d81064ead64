#pragma once

#include <cstddef>
#include <span>

// Vector kernels used by the solver and the low-rank matrix products.
// Each operation has a scalar reference implementation and an AVX2 variant;
// the backend is picked at runtime from CPUID and can be overridden for
// equivalence testing. axpy/scale/square are bit-identical across backends;
// dot reductions may differ by a few ulps because of lane reordering.

namespace polmin::vec {

enum class Backend { scalar, avx2 };

// Active backend. Defaults to the best the CPU supports.
Backend backend();
void set_backend(Backend b);
bool avx2_available();

// sum_i x_i * y_i, compensated accumulation
double dot(std::span<const double> x, std::span<const double> y);

double nrm2(std::span<const double> x);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

// x *= a
void scale(double a, std::span<double> x);

// out = x * x (elementwise)
void square(std::span<const double> x, std::span<double> out);

namespace detail {
double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void scale_scalar(double a, double* x, std::size_t n);
void square_scalar(const double* x, double* out, std::size_t n);

double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void scale_avx2(double a, double* x, std::size_t n);
void square_avx2(const double* x, double* out, std::size_t n);
}  // namespace detail

}  // namespace polmin::vec
