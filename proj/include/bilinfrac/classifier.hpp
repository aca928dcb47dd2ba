#pragma once

#include "bilinfrac/exponents.hpp"
#include "bilinfrac/matrices.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bilinfrac {

/// Dimensions, matrices, exponents and order of I(f1, f2)(x) = int f1(y1) f2(y2) / (|D1 x - y1| + |D2 x - y2|)^lambda.
struct OperatorConfig {
  int n1 = 1;
  int n2 = 1;
  int m = 1;
  RationalMatrix D1;
  RationalMatrix D2;
  Exponent p1;
  Exponent p2;
  Exponent q;
  Order lambda;
};

enum class ClauseId {
  Accepted,
  DimensionMismatch,
  LambdaOutOfRange,
  RankStackDeficient,
  HomogeneityFailed,
  ExponentRangeFailed,
  QMustBeFinite,
  Case4a,
  Case4b,
  Case4c,
  Case4d,
  // Used by the linear, radial, pairing and diagonal classifiers.
  ExponentOrderFailed,
  PairingSumFailed,
  DiagonalTableFailed,
};

enum class SubReason {
  None,
  PBelowOne,
  NoIndexInOpenRange,
  P1InfiniteWithR2Deficient,
  P2InfiniteWithR1Deficient,
  PNotInOpenRange,
  StrictInequalityFailed,
  EqualityNotAccessible,
};

std::string to_string(ClauseId c);
std::string to_string(SubReason s);
ClauseId parse_clause(const std::string& name);

struct Verdict {
  bool bounded = false;
  ClauseId clause = ClauseId::Accepted;
  SubReason subreason = SubReason::None;
  std::size_t r1 = 0;
  std::size_t r2 = 0;
  Rational lambda;
  std::string detail;
};

/// Raised for inputs outside the characterization's hypotheses; these are not verdicts.
class HypothesisError : public std::invalid_argument {
 public:
  HypothesisError(ClauseId clause, const std::string& what) : std::invalid_argument(what), clause_(clause) {}
  ClauseId clause() const { return clause_; }

 private:
  ClauseId clause_;
};

/// Throws HypothesisError(DimensionMismatch) when the matrix shapes disagree with (n1, n2, m).
void check_dimensions(const OperatorConfig& cfg);

/// Exact comparison of cfg.lambda with n1/p1' + n2/p2' + m/q. Requires p1, p2 >= 1.
bool check_homogeneity(const OperatorConfig& cfg);

/// The bilinear boundedness decision. Checks run in the order: order range (throws), stacked rank,
/// p >= 1 and homogeneity, exponent range, finiteness of q, then the rank case 4a-4d.
Verdict classify_bilinear(const OperatorConfig& cfg);

/// f -> int f(y) / |D x - y|^lambda from L^p(R^n) to L^q(R^m). Throws HypothesisError unless 0 < lambda < n.
Verdict classify_linear(int n, int m, const RationalMatrix& d, const Exponent& p, const Exponent& q, const Order& lambda);

/// f -> int f(y) / (|x| + |y|)^lambda from L^p(R^n) to L^q(R^m). Throws HypothesisError unless lambda > 0.
Verdict classify_radial(int n, int m, const Exponent& p, const Exponent& q, const Order& lambda);

/// The pairing int int f1(y1) f2(y2) / (|y1| + |y2|)^(n1/p1' + n2/p2').
Verdict classify_pairing(int n1, int n2, const Exponent& p1, const Exponent& p2);

/// The diagonal case n1 = n2 = m = n, D1 = D2 = I, given by a four-row table in (p1, p2, q).
/// Throws HypothesisError when 1 <= p1, p2, 0 < lambda < 2n or 1/p1 + 1/p2 = 1/q + (2n - lambda)/n fails.
Verdict classify_diagonal(int n, const Exponent& p1, const Exponent& p2, const Exponent& q, const Order& lambda);

}  // namespace bilinfrac
