#pragma once

#include "kcsim/core.hpp"

namespace kcsim {

/// Matrix exponential by scaling and squaring with diagonal Pade approximants
/// of degree 3, 5, 7, 9 or 13 chosen from the 1-norm. Throws NumericalFailure
/// if the result is not finite.
CMatrix expm(const CMatrix& A);

}  // namespace kcsim
