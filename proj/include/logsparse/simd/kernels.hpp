#pragma once

// Data-parallel inner loops used across the library. Every kernel has a
// scalar reference implementation; an AVX2 variant is compiled separately
// and picked at runtime when the CPU supports it. Set LOGSPARSE_SIMD=scalar
// in the environment to force the reference path.

#include <cstddef>
#include <cstdint>

namespace logsparse::simd {

/// Exponent vectors handled by the monomial kernels are 32 bytes wide.
inline constexpr std::size_t kMonoBytes = 32;

struct KernelTable {
  const char* name;

  /// out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  /// sum a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// x[i] *= alpha
  void (*scale)(double* x, double alpha, std::size_t n);
  /// acc[i] += v[i] * v[i]
  void (*sq_accumulate)(const double* v, double* acc, std::size_t n);
  /// Plane rotation: (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);

  /// out = a + b bytewise. Returns false on any byte overflow (out is then unspecified).
  bool (*mono_mul)(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out);
  /// out = max(a, b) bytewise.
  void (*mono_lcm)(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out);
  /// True iff a[i] <= b[i] for every byte.
  bool (*mono_divides)(const std::uint8_t* a, const std::uint8_t* b);
  /// Index of the first 32-byte block in `blocks` dividing m, or count if none.
  std::size_t (*find_divisor)(const std::uint8_t* blocks, std::size_t count, const std::uint8_t* m);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2 table, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_kernels() noexcept;

/// The table selected for this process (resolved once).
const KernelTable& kernels() noexcept;

}  // namespace logsparse::simd
