#pragma once

#include "ivdae/linalg.hpp"

namespace ivdae {

/// Matrix exponential by scaling and squaring with the degree-13 diagonal Pade
/// approximant. Empty input yields an empty result.
Matrix expm(const Matrix& a);

}  // namespace ivdae
