#pragma once

#include <cmath>
#include <limits>

namespace cmm {

// All probabilities are carried in natural-log space. Probability zero is the
// distinguished value kImpossible; it short-circuits every maximization and is
// never serialized as a finite number.
inline constexpr double kImpossible = -std::numeric_limits<double>::infinity();

inline bool is_possible(double log_prob) { return log_prob != kImpossible; }

inline double log_of(double prob) {
  return prob > 0.0 ? std::log(prob) : kImpossible;
}

}  // namespace cmm
