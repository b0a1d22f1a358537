#pragma once

#include "markov/matrix.hpp"

namespace markov {

/// Matrix exponential via scaling-and-squaring with a degree-13 Pade kernel.
/// Zero row sums in A give unit row sums in the result to machine precision.
Matrix expm(const Matrix& a);

/// log(I + A) = sum_{m>=1} (-1)^{m-1} A^m / m, valid for spectral radius < 1.
/// Throws NotConvergent when the spectral radius is >= 1 - 1e-9.
Matrix logm_series(const Matrix& a);

}  // namespace markov
