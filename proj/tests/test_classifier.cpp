#include "bilinfrac/classifier.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace bilinfrac;

namespace {

Exponent E(const char* s) { return Exponent::parse(s); }

OperatorConfig make(RationalMatrix d1, RationalMatrix d2, const char* p1, const char* p2, const char* q) {
  const int n1 = static_cast<int>(d1.rows()), n2 = static_cast<int>(d2.rows()), m = static_cast<int>(d1.cols());
  OperatorConfig c{n1, n2, m, std::move(d1), std::move(d2), E(p1), E(p2), E(q), Order{}};
  c.lambda = homogeneous_lambda(n1, n2, m, c.p1, c.p2, c.q);
  return c;
}

void expect(const OperatorConfig& c, bool bounded, ClauseId clause, SubReason sub = SubReason::None) {
  Verdict v = classify_bilinear(c);
  CHECK(v.bounded == bounded);
  CHECK(to_string(v.clause) == to_string(clause));
  CHECK(to_string(v.subreason) == to_string(sub));
  CHECK(v.bounded == (v.clause == ClauseId::Accepted));
  CHECK_FALSE(v.detail.empty());
}

ClauseId hypothesis_clause(const OperatorConfig& c) {
  try {
    classify_bilinear(c);
  } catch (const HypothesisError& e) {
    return e.clause();
  }
  return ClauseId::Accepted;
}

const RationalMatrix I1{{1}};
const RationalMatrix Z1{{0}};

}  // namespace

TEST_CASE("clause and sub-reason names round-trip") {
  for (ClauseId c : {ClauseId::Accepted, ClauseId::DimensionMismatch, ClauseId::LambdaOutOfRange,
                     ClauseId::RankStackDeficient, ClauseId::HomogeneityFailed, ClauseId::ExponentRangeFailed,
                     ClauseId::QMustBeFinite, ClauseId::Case4a, ClauseId::Case4b, ClauseId::Case4c, ClauseId::Case4d,
                     ClauseId::ExponentOrderFailed, ClauseId::PairingSumFailed, ClauseId::DiagonalTableFailed})
    CHECK(parse_clause(to_string(c)) == c);
  CHECK(to_string(ClauseId::Case4a) == "Case4a");
  CHECK(to_string(SubReason::StrictInequalityFailed) == "strict_inequality_failed");
  CHECK(to_string(SubReason::None) == "");
  CHECK_THROWS_AS(parse_clause("Case5"), std::invalid_argument);
}

TEST_CASE("bilinear examples") {
  expect(make(I1, I1, "1", "2", "2"), true, ClauseId::Accepted);
  expect(make(I1, I1, "2", "2", "2"), true, ClauseId::Accepted);
  expect(make(I1, RationalMatrix{{1}, {0}}, "2", "2", "1"), false, ClauseId::Case4a, SubReason::EqualityNotAccessible);
  CHECK(make(I1, RationalMatrix{{1}, {0}}, "2", "2", "1").lambda.value == Rational(5, 2));
  expect(make(RationalMatrix{{1, 0}}, RationalMatrix{{2, 0}}, "2", "2", "4"), false, ClauseId::RankStackDeficient);
}

TEST_CASE("hypothesis violations are errors, not verdicts") {
  OperatorConfig c = make(I1, I1, "2", "2", "2");
  c.lambda = Order{Rational(2)};
  CHECK(hypothesis_clause(c) == ClauseId::LambdaOutOfRange);
  c.lambda = Order{Rational(0)};
  CHECK(hypothesis_clause(c) == ClauseId::LambdaOutOfRange);
  OperatorConfig bad = make(I1, I1, "2", "2", "2");
  bad.D2 = RationalMatrix{{1, 0}};
  CHECK(hypothesis_clause(bad) == ClauseId::DimensionMismatch);
  CHECK_THROWS_AS(check_dimensions(bad), HypothesisError);
}

TEST_CASE("clause 2: exponent range and homogeneity") {
  OperatorConfig c = make(I1, I1, "2", "2", "2");
  c.p1 = E("1/2");
  c.lambda = Order{Rational(1)};
  expect(c, false, ClauseId::ExponentRangeFailed, SubReason::PBelowOne);
  c = make(I1, I1, "2", "2", "2");
  c.lambda = Order{Rational(3, 2) + Rational(1, 10)};
  expect(c, false, ClauseId::HomogeneityFailed);
}

TEST_CASE("clause 3: an open index and infinite exponents") {
  expect(make(I1, I1, "1", "1", "1"), false, ClauseId::ExponentRangeFailed, SubReason::NoIndexInOpenRange);
  expect(make(I1, I1, "inf", "1", "2"), false, ClauseId::ExponentRangeFailed, SubReason::NoIndexInOpenRange);
  const RationalMatrix e1{{1, 0}}, e2{{0, 1}}, w1{{1, 0}, {0, 0}}, w2{{0, 1}, {0, 0}};
  expect(make(e1, w2, "inf", "2", "4"), false, ClauseId::ExponentRangeFailed, SubReason::P1InfiniteWithR2Deficient);
  expect(make(w1, e2, "2", "inf", "4"), false, ClauseId::ExponentRangeFailed, SubReason::P2InfiniteWithR1Deficient);
}

TEST_CASE("clause 4 preamble: finiteness of q") {
  expect(make(I1, I1, "3", "3", "inf"), false, ClauseId::QMustBeFinite);
  expect(make(I1, I1, "1", "2", "inf"), false, ClauseId::QMustBeFinite);
  expect(make(I1, I1, "2", "2", "inf"), true, ClauseId::Accepted);
  expect(make(I1, I1, "3/2", "3/2", "inf"), true, ClauseId::Accepted);
}

TEST_CASE("case 4a") {
  expect(make(I1, I1, "1", "2", "1"), false, ClauseId::Case4a, SubReason::StrictInequalityFailed);
  expect(make(I1, I1, "4", "4", "4"), true, ClauseId::Accepted);
  // q < 1 is admitted when 1/p1 + 1/p2 > 1.
  expect(make(I1, I1, "5/4", "5/4", "4/5"), true, ClauseId::Accepted);
  const RationalMatrix c2{{1}, {0}};
  expect(make(c2, c2, "2", "2", "1"), true, ClauseId::Accepted);
  expect(make(c2, c2, "3", "3", "3/2"), false, ClauseId::Case4a, SubReason::EqualityNotAccessible);
  expect(make(I1, I1, "1", "2", "2"), true, ClauseId::Accepted);
}

TEST_CASE("case 4b and its mirror") {
  expect(make(Z1, I1, "2", "2", "4"), true, ClauseId::Accepted);
  expect(make(Z1, I1, "2", "2", "3/2"), false, ClauseId::Case4b, SubReason::StrictInequalityFailed);
  expect(make(Z1, I1, "2", "2", "2"), false, ClauseId::Case4b, SubReason::EqualityNotAccessible);
  const RationalMatrix c2{{1}, {0}};
  expect(make(Z1, c2, "2", "2", "2"), true, ClauseId::Accepted);
  expect(make(Z1, c2, "3", "2", "2"), false, ClauseId::Case4b, SubReason::EqualityNotAccessible);
  expect(make(Z1, I1, "2", "1", "2"), true, ClauseId::Accepted);
  expect(make(Z1, I1, "2", "1", "3/2"), false, ClauseId::Case4b, SubReason::StrictInequalityFailed);
  expect(make(I1, Z1, "2", "2", "4"), true, ClauseId::Accepted);
  expect(make(I1, Z1, "2", "2", "3/2"), false, ClauseId::Case4b, SubReason::StrictInequalityFailed);
  expect(make(c2, Z1, "2", "2", "2"), true, ClauseId::Accepted);
  expect(make(I1, Z1, "1", "2", "3/2"), false, ClauseId::Case4b, SubReason::StrictInequalityFailed);
}

TEST_CASE("case 4c") {
  const RationalMatrix d1{{1, 0}}, d2 = RationalMatrix::identity(2);
  expect(make(d1, d2, "2", "2", "2"), true, ClauseId::Accepted);
  expect(make(d1, d2, "2", "2", "3/2"), false, ClauseId::Case4c, SubReason::StrictInequalityFailed);
  expect(make(d1, d2, "1", "2", "2"), true, ClauseId::Accepted);
  expect(make(d1, d2, "1", "2", "3/2"), false, ClauseId::Case4c, SubReason::StrictInequalityFailed);
  const RationalMatrix w1{{1, 0}, {0, 0}}, w2{{1, 0}, {0, 1}, {0, 0}};
  expect(make(w1, w2, "inf", "2", "4"), true, ClauseId::Accepted);
  expect(make(w1, w2, "inf", "2", "2"), false, ClauseId::Case4c, SubReason::EqualityNotAccessible);
  expect(make(d2, d1, "2", "2", "2"), true, ClauseId::Accepted);
  expect(make(d2, d1, "2", "2", "3/2"), false, ClauseId::Case4c, SubReason::StrictInequalityFailed);
}

TEST_CASE("case 4d") {
  const RationalMatrix e1{{1, 0}}, e2{{0, 1}};
  expect(make(e1, e2, "2", "3", "3"), true, ClauseId::Accepted);
  expect(make(e1, e2, "1", "2", "2"), false, ClauseId::Case4d, SubReason::EqualityNotAccessible);
  expect(make(e1, e2, "2", "2", "4"), true, ClauseId::Accepted);
  const RationalMatrix w1{{1, 0}, {0, 0}}, w2{{0, 1}, {0, 0}};
  expect(make(w1, w2, "2", "2", "2"), true, ClauseId::Accepted);
  expect(make(w1, w2, "3", "3", "3"), false, ClauseId::Case4d, SubReason::EqualityNotAccessible);
  expect(make(w1, w2, "2", "2", "3/2"), false, ClauseId::Case4d, SubReason::StrictInequalityFailed);
  expect(make(e1, w2, "1", "2", "2"), true, ClauseId::Accepted);
  const RationalMatrix t1{{1, 0, 0}, {0, 1, 0}}, t2{{0, 1, 0}, {0, 0, 1}};
  expect(make(t1, t2, "3", "3", "3"), true, ClauseId::Accepted);
}

TEST_CASE("verdict is symmetric under swapping the two inputs") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 3), k(0, 4);
  const char* ps[] = {"1", "3/2", "2", "4", "inf"};
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const int m = size(rng);
    auto d1 = testing_support::random_matrix(rng, size(rng), m, 0.5);
    auto d2 = testing_support::random_matrix(rng, size(rng), m, 0.5);
    OperatorConfig a = make(d1, d2, ps[k(rng)], ps[k(rng)], ps[k(rng)]);
    OperatorConfig b{a.n2, a.n1, a.m, a.D2, a.D1, a.p2, a.p1, a.q, a.lambda};
    try {
      Verdict va = classify_bilinear(a), vb = classify_bilinear(b);
      CHECK(va.bounded == vb.bounded);
      ++checked;
    } catch (const HypothesisError& e) {
      CHECK_THROWS_AS(classify_bilinear(b), HypothesisError);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("verdict is invariant under invertible changes of coordinates") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> size(1, 3), k(0, 4);
  const char* ps[] = {"1", "3/2", "2", "4", "inf"};
  for (int t = 0; t < 100; ++t) {
    const int m = size(rng), n1 = size(rng), n2 = size(rng);
    OperatorConfig a = make(testing_support::random_matrix(rng, n1, m, 0.5),
                            testing_support::random_matrix(rng, n2, m, 0.5), ps[k(rng)], ps[k(rng)], ps[k(rng)]);
    OperatorConfig b = a;
    auto q = testing_support::random_invertible(rng, m);
    b.D1 = testing_support::random_invertible(rng, n1) * a.D1 * q;
    b.D2 = testing_support::random_invertible(rng, n2) * a.D2 * q;
    try {
      Verdict va = classify_bilinear(a), vb = classify_bilinear(b);
      CHECK(va.bounded == vb.bounded);
      CHECK(va.clause == vb.clause);
    } catch (const HypothesisError&) {
      CHECK_THROWS_AS(classify_bilinear(b), HypothesisError);
    }
  }
}

TEST_CASE("bounded values of 1/q form an interval") {
  const RationalMatrix e1{{1, 0}}, e2{{0, 1}};
  for (auto [d1, d2] : {std::pair{I1, I1}, std::pair{e1, e2}, std::pair{Z1, I1}}) {
    for (int a = 1; a < 16; ++a)
      for (int b = 1; b < 16; ++b) {
        int flips = 0;
        bool previous = false, first = true;
        for (int c = 0; c <= 16; ++c) {
          OperatorConfig cfg{static_cast<int>(d1.rows()), static_cast<int>(d2.rows()), static_cast<int>(d1.cols()), d1, d2,
                             Exponent::from_reciprocal(Rational(a, 16)), Exponent::from_reciprocal(Rational(b, 16)),
                             Exponent::from_reciprocal(Rational(c, 16)), Order{}};
          cfg.lambda = homogeneous_lambda(cfg.n1, cfg.n2, cfg.m, cfg.p1, cfg.p2, cfg.q);
          bool bounded = false;
          try {
            bounded = classify_bilinear(cfg).bounded;
          } catch (const HypothesisError&) {
          }
          if (!first && bounded != previous) ++flips;
          previous = bounded;
          first = false;
        }
        CHECK(flips <= 2);
      }
  }
}

TEST_CASE("linear classifier") {
  const RationalMatrix d{{1}, {0}};
  CHECK(classify_linear(2, 1, d, E("2"), E("4"), Order{Rational(5, 4)}).bounded);
  Verdict v = classify_linear(2, 1, d, E("2"), E("2"), Order{Rational(3, 2)});
  CHECK_FALSE(v.bounded);
  CHECK(v.clause == ClauseId::ExponentOrderFailed);
  v = classify_linear(2, 2, RationalMatrix::zero(2, 2), E("2"), E("4"), Order{Rational(3, 2)});
  CHECK_FALSE(v.bounded);
  CHECK(v.clause == ClauseId::RankStackDeficient);
  v = classify_linear(2, 1, d, E("2"), E("4"), Order{Rational(3, 2)});
  CHECK(v.clause == ClauseId::HomogeneityFailed);
  v = classify_linear(1, 1, I1, E("1"), E("2"), Order{Rational(1, 2)});
  CHECK(v.clause == ClauseId::ExponentRangeFailed);
  v = classify_linear(1, 1, I1, E("2"), E("inf"), Order{Rational(1, 2)});
  CHECK(v.clause == ClauseId::QMustBeFinite);
  CHECK_THROWS_AS(classify_linear(1, 1, I1, E("2"), E("4"), Order{Rational(1)}), HypothesisError);
}

TEST_CASE("radial classifier") {
  CHECK(classify_radial(1, 1, E("2"), E("2"), Order{Rational(1)}).bounded);
  Verdict v = classify_radial(1, 1, E("2"), E("3/2"), Order{Rational(7, 6)});
  CHECK_FALSE(v.bounded);
  CHECK(v.clause == ClauseId::ExponentOrderFailed);
  v = classify_radial(1, 1, E("1"), E("1"), Order{Rational(1)});
  CHECK_FALSE(v.bounded);
  CHECK(v.clause == ClauseId::ExponentRangeFailed);
  CHECK(classify_radial(1, 1, E("2"), E("2"), Order{Rational(3, 2)}).clause == ClauseId::HomogeneityFailed);
  CHECK_THROWS_AS(classify_radial(1, 1, E("2"), E("2"), Order{Rational(0)}), HypothesisError);
}

TEST_CASE("linear and radial classifiers differ exactly on p = q") {
  for (int n = 1; n <= 3; ++n)
    for (int a = 1; a < 8; ++a)
      for (int c = 1; c < 8; ++c) {
        Exponent p = Exponent::from_reciprocal(Rational(a, 8)), q = Exponent::from_reciprocal(Rational(c, 8));
        Rational l = n * (1 - p.reciprocal()) + n * q.reciprocal();
        if (l <= 0 || l >= n) continue;
        const bool lin = classify_linear(n, n, RationalMatrix::identity(n), p, q, Order{l}).bounded;
        const bool rad = classify_radial(n, n, p, q, Order{l}).bounded;
        CHECK(lin == (rad && p < q));
      }
}

TEST_CASE("pairing criterion") {
  CHECK(classify_pairing(1, 1, E("2"), E("2")).bounded);
  CHECK_FALSE(classify_pairing(1, 1, E("3"), E("3")).bounded);
  CHECK(classify_pairing(1, 1, E("3"), E("3")).clause == ClauseId::PairingSumFailed);
  CHECK_FALSE(classify_pairing(1, 1, E("1"), E("2")).bounded);
  CHECK(classify_pairing(2, 1, E("3/2"), E("2")).bounded);
}

TEST_CASE("diagonal table") {
  CHECK(classify_diagonal(1, E("1"), E("2"), E("2"), Order{Rational(1)}).bounded);
  CHECK(classify_diagonal(2, E("inf"), E("2"), E("4"), Order{Rational(7, 2)}).bounded);
  CHECK(classify_diagonal(1, E("4"), E("4"), E("4"), Order{Rational(7, 4)}).bounded);
  Verdict v = classify_diagonal(1, E("1"), E("2"), E("3/2"), Order{Rational(7, 6)});
  CHECK_FALSE(v.bounded);
  CHECK(v.clause == ClauseId::DiagonalTableFailed);
  CHECK_THROWS_AS(classify_diagonal(1, E("inf"), E("2"), E("4"), Order{Rational(9, 4)}), HypothesisError);
  CHECK_THROWS_AS(classify_diagonal(1, E("2"), E("2"), E("2"), Order{Rational(1)}), HypothesisError);
  CHECK_THROWS_AS(classify_diagonal(1, E("1/2"), E("2"), E("2"), Order{Rational(1)}), HypothesisError);
}

TEST_CASE("diagonal table agrees with the general classifier in one dimension") {
  int compared = 0;
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      for (int c = 0; c <= 8; ++c) {
        Exponent p1 = Exponent::from_reciprocal(Rational(a, 8)), p2 = Exponent::from_reciprocal(Rational(b, 8)),
                 q = Exponent::from_reciprocal(Rational(c, 8));
        Order l = homogeneous_lambda(1, 1, 1, p1, p2, q);
        if (l.value <= 0 || l.value >= 2) continue;
        OperatorConfig cfg{1, 1, 1, I1, I1, p1, p2, q, l};
        CHECK(classify_bilinear(cfg).bounded == classify_diagonal(1, p1, p2, q, l).bounded);
        ++compared;
      }
  CHECK(compared > 300);
}
