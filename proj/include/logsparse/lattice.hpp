#pragma once

#include <span>
#include <vector>

#include "logsparse/rational.hpp"

namespace logsparse {

using IntVector = std::vector<Integer>;

/// LLL-reduces the rows of `basis` (linearly independent) with Lovász
/// parameter delta. Exact: Gram–Schmidt data is kept over Q.
std::vector<IntVector> lll_reduce(std::vector<IntVector> basis, const Rational& delta = Rational(3, 4));

/// Short integer vectors c with |c_i| <= height and |sum c_i x_i| <= tol * max(1, max|x_i|),
/// read off an LLL-reduced basis of the lattice spanned by (e_i, round(scale * x_i)).
std::vector<std::vector<long>> integer_relations(std::span<const double> x, double scale, long height,
                                                 double tol);

}  // namespace logsparse
