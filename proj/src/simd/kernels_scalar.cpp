#include "logsparse/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string_view>

namespace logsparse::simd {
namespace {

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void scale_scalar(double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void sq_accumulate_scalar(const double* v, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += v[i] * v[i];
}

void rotate_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

bool mono_mul_scalar(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out) {
  bool ok = true;
  for (std::size_t i = 0; i < kMonoBytes; ++i) {
    const unsigned s = unsigned(a[i]) + unsigned(b[i]);
    ok &= s <= 0xFFu;
    out[i] = static_cast<std::uint8_t>(s);
  }
  return ok;
}

void mono_lcm_scalar(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out) {
  for (std::size_t i = 0; i < kMonoBytes; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

bool mono_divides_scalar(const std::uint8_t* a, const std::uint8_t* b) {
  for (std::size_t i = 0; i < kMonoBytes; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::size_t find_divisor_scalar(const std::uint8_t* blocks, std::size_t count,
                                const std::uint8_t* m) {
  for (std::size_t k = 0; k < count; ++k)
    if (mono_divides_scalar(blocks + k * kMonoBytes, m)) return k;
  return count;
}

constexpr KernelTable kScalar{
    "scalar",          mul_scalar,      dot_scalar,          scale_scalar,
    sq_accumulate_scalar, rotate_scalar, mono_mul_scalar,    mono_lcm_scalar,
    mono_divides_scalar,  find_divisor_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

#ifndef LOGSPARSE_HAVE_AVX2
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif

const KernelTable& kernels() noexcept {
  static const KernelTable& selected = [&]() -> const KernelTable& {
    if (const char* env = std::getenv("LOGSPARSE_SIMD");
        env != nullptr && std::string_view(env) == "scalar")
      return kScalar;
    if (const KernelTable* t = avx2_kernels()) return *t;
    return kScalar;
  }();
  return selected;
}

}  // namespace logsparse::simd
