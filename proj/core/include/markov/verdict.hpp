#pragma once

#include <optional>
#include <string>

#include "markov/matrix.hpp"

namespace markov {

enum class EmbedStatus { Embeddable, NonEmbeddable, Undecided };

enum class EmbedMethod { kendall, equal_input, cyclic_vandermonde, d3_closed_form, series };

inline const char* to_string(EmbedStatus s) {
  switch (s) {
    case EmbedStatus::Embeddable: return "embeddable";
    case EmbedStatus::NonEmbeddable: return "non-embeddable";
    default: return "undecided";
  }
}

inline const char* to_string(EmbedMethod m) {
  switch (m) {
    case EmbedMethod::kendall: return "kendall";
    case EmbedMethod::equal_input: return "equal_input";
    case EmbedMethod::cyclic_vandermonde: return "cyclic_vandermonde";
    case EmbedMethod::d3_closed_form: return "d3_closed_form";
    default: return "series";
  }
}

/// Outcome of an embeddability decision.  When status is Embeddable the
/// generator is present, has zero row sums and non-negative off-diagonal
/// entries, and exp(generator) reproduces the input to 1e-8.
struct EmbedVerdict {
  EmbedStatus status = EmbedStatus::Undecided;
  std::optional<Matrix> generator;
  std::optional<EmbedMethod> method;
  bool unique_in_zero_row_sum_algebra = false;
  bool monotone_generator = false;
  std::string reason;
};

}  // namespace markov
