#pragma once

#include <random>

#include "logsparse/symmat.hpp"

namespace logsparse::testing {

inline SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymMatrix m(n);
  for (auto& v : m.upper()) v = u(rng);
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) e = std::max(e, std::abs(a.data()[i] - b.data()[i]));
  return e;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) { return (a - b).max_abs(); }

}  // namespace logsparse::testing
