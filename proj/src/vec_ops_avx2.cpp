#include "polmin/vec_ops.hpp"

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include <cmath>

namespace polmin::vec::detail {

#if defined(__x86_64__)

double dot_avx2(const double* x, const double* y, std::size_t n) {
  // four independent Neumaier lanes, combined with a compensated reduction
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(
      static_cast<long long>(0x7fffffffffffffffULL)));
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    __m256d t = _mm256_add_pd(sum, p);
    // correction = (big - t) + small, picked per lane by |sum| >= |p|
    __m256d big_first =
        _mm256_add_pd(_mm256_sub_pd(sum, t), p);  // |sum| >= |p|
    __m256d small_first = _mm256_add_pd(_mm256_sub_pd(p, t), sum);
    __m256d mask = _mm256_cmp_pd(_mm256_and_pd(sum, absmask),
                                 _mm256_and_pd(p, absmask), _CMP_GE_OQ);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(small_first, big_first, mask));
    sum = t;
  }
  alignas(32) double lanes[4], lanes_c[4];
  _mm256_store_pd(lanes, sum);
  _mm256_store_pd(lanes_c, comp);
  double acc = 0.0, c = 0.0;
  auto add = [&](double p) {
    const double t = acc + p;
    c += std::abs(acc) >= std::abs(p) ? (acc - t) + p : (p - t) + acc;
    acc = t;
  };
  for (int l = 0; l < 4; ++l) add(lanes[l]);
  for (int l = 0; l < 4; ++l) add(lanes_c[l]);
  for (; i < n; ++i) add(x[i] * y[i]);
  return acc + c;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, xv, yv));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale_avx2(double a, double* x, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void square_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(xv, xv));
  }
  for (; i < n; ++i) out[i] = x[i] * x[i];
}

#else  // non-x86 fallback: forward to scalar so the symbols exist

double dot_avx2(const double* x, const double* y, std::size_t n) {
  return dot_scalar(x, y, n);
}
void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  axpy_scalar(a, x, y, n);
}
void scale_avx2(double a, double* x, std::size_t n) { scale_scalar(a, x, n); }
void square_avx2(const double* x, double* out, std::size_t n) {
  square_scalar(x, out, n);
}

#endif

}  // namespace polmin::vec::detail
