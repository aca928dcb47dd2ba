#pragma once

#include "bilinfrac/matrices.hpp"

#include <random>

namespace testing_support {

using bilinfrac::Rational;
using bilinfrac::RationalMatrix;

/// Rational in [-3, 3] with denominator at most 3.
inline Rational random_entry(std::mt19937_64& rng, double zero_bias = 0.3) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < zero_bias) return Rational(0);
  std::uniform_int_distribution<int> den(1, 3);
  const int b = den(rng);
  std::uniform_int_distribution<int> num(-3 * b, 3 * b);
  Rational r(num(rng), b);
  r.canonicalize();
  return r;
}

inline RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double zero_bias = 0.3) {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_entry(rng, zero_bias);
  return m;
}

inline RationalMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    RationalMatrix m = random_matrix(rng, n, n, 0.2);
    if (bilinfrac::determinant(m) != 0) return m;
  }
}

}  // namespace testing_support
