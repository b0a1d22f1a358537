#pragma once

#include <stdexcept>
#include <string>

namespace markov {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MARKOV_DEFINE_ERROR(Name)             \
  struct Name : Error {                       \
    using Error::Error;                       \
    Name() : Error(#Name) {}                  \
  }

MARKOV_DEFINE_ERROR(InvalidMatrix);       // non-square / non-finite input
MARKOV_DEFINE_ERROR(EigenFailure);        // QR iteration did not converge
MARKOV_DEFINE_ERROR(ExpOverflow);         // matrix exponential overflowed
MARKOV_DEFINE_ERROR(NotConvergent);       // logarithm series outside its disk
MARKOV_DEFINE_ERROR(InvalidPermutation);  // permutation input is not a bijection
MARKOV_DEFINE_ERROR(NotStochastic);       // Markov matrix expected
MARKOV_DEFINE_ERROR(DimMismatch);         // operands of different dimension
MARKOV_DEFINE_ERROR(NotEqualInput);       // equal-input structure expected
MARKOV_DEFINE_ERROR(NoEqualInputRoot);    // no equal-input n-th root exists
MARKOV_DEFINE_ERROR(NotComparableLevels); // vectors lie in different level sets
MARKOV_DEFINE_ERROR(NotLevel);            // unequal row sums
MARKOV_DEFINE_ERROR(NotMonotone);         // monotone input expected
MARKOV_DEFINE_ERROR(WrongDimension);      // operation fixed to another d
MARKOV_DEFINE_ERROR(DuplicateNode);       // repeated (or zero) interpolation node
MARKOV_DEFINE_ERROR(IllConditioned);      // linear solve beyond condition limit
MARKOV_DEFINE_ERROR(InvalidFamily);       // (P0, P) pair violates family identities
MARKOV_DEFINE_ERROR(NotCyclic);           // cyclic matrix expected

#undef MARKOV_DEFINE_ERROR

}  // namespace markov
