// Compiled with -mavx2 -mfma. Nothing in this file may run unless
// avx2_kernels() has confirmed CPU support.

#include <immintrin.h>

#include "logsparse/simd/kernels.hpp"

namespace logsparse::simd {
namespace {

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void scale_avx2(double* x, double alpha, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  for (; i < n; ++i) x[i] *= alpha;
}

void sq_accumulate_avx2(const double* v, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(x, x, _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) acc[i] += v[i] * v[i];
}

void rotate_avx2(double* x, double* y, double c, double s, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, xi), _mm256_mul_pd(vs, yi)));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, xi), _mm256_mul_pd(vc, yi)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

inline __m256i load32(const std::uint8_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

bool mono_mul_avx2(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out) {
  const __m256i va = load32(a);
  const __m256i vb = load32(b);
  const __m256i wrapped = _mm256_add_epi8(va, vb);
  const __m256i saturated = _mm256_adds_epu8(va, vb);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), wrapped);
  return _mm256_movemask_epi8(_mm256_cmpeq_epi8(wrapped, saturated)) == -1;
}

void mono_lcm_avx2(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), _mm256_max_epu8(load32(a), load32(b)));
}

inline bool divides(__m256i a, __m256i b) {
  // a <= b bytewise  <=>  max(a, b) == b
  return _mm256_movemask_epi8(_mm256_cmpeq_epi8(_mm256_max_epu8(a, b), b)) == -1;
}

bool mono_divides_avx2(const std::uint8_t* a, const std::uint8_t* b) {
  return divides(load32(a), load32(b));
}

std::size_t find_divisor_avx2(const std::uint8_t* blocks, std::size_t count,
                              const std::uint8_t* m) {
  const __m256i vm = load32(m);
  for (std::size_t k = 0; k < count; ++k)
    if (divides(load32(blocks + k * kMonoBytes), vm)) return k;
  return count;
}

constexpr KernelTable kAvx2{
    "avx2",          mul_avx2,      dot_avx2,          scale_avx2,
    sq_accumulate_avx2, rotate_avx2, mono_mul_avx2,    mono_lcm_avx2,
    mono_divides_avx2,  find_divisor_avx2,
};

}  // namespace

const KernelTable* avx2_kernels() noexcept {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

}  // namespace logsparse::simd
