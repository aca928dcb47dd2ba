#pragma once

#include "bilinfrac/classifier.hpp"
#include "bilinfrac/functions.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bilinfrac {

enum class FamilyParameter { None, Delta, Epsilon, Dilation, Shift };

std::string to_string(FamilyParameter p);

/// Inputs that exhibit unboundedness: f1 (and f2 for bilinear operators), plus a dual test function h on R^m
/// when the argument runs through a pairing.
struct Witness {
  TestFunction f1;
  std::optional<TestFunction> f2;
  std::optional<TestFunction> h;
};

/// A one-parameter family of witnesses. `values` is the default sweep, ordered toward the extremal limit
/// (decreasing delta or epsilon, increasing shift).
struct WitnessFamily {
  std::string name;
  FamilyParameter parameter = FamilyParameter::None;
  std::vector<double> values;
  std::function<Witness(double)> build;
};

/// Default parameter sweeps.
std::vector<double> default_values(FamilyParameter p);

/// Counterexample families for a bilinear configuration whose verdict carries `clause`. The rank cases are built
/// in the coordinates of the joint normal form and pulled back through P1, P2 and Q, so the returned functions
/// apply to cfg as given. Throws std::invalid_argument when cfg is bounded or its verdict has a different clause.
std::vector<WitnessFamily> witness_for(const OperatorConfig& cfg, ClauseId clause);

/// Counterexample families for the radial operator f -> int f(y) / (|x| + |y|)^lambda.
std::vector<WitnessFamily> witness_for_radial(int n, int m, const Exponent& p, const Exponent& q, const Order& lambda,
                                              ClauseId clause);

}  // namespace bilinfrac
