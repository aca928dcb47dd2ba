#include "bilinfrac/functions.hpp"
#include "bilinfrac/witnesses.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bilinfrac;

namespace {

Exponent E(const char* s) { return Exponent::parse(s); }

template <class T>
bool holds(const TestFunction& f) {
  return std::holds_alternative<T>(f.node().value);
}

// Strips the coordinate change added when a witness is pulled back.
TestFunction core(const TestFunction& f) {
  if (const auto* l = std::get_if<LinearMap>(&f.node().value)) return l->inner;
  return f;
}

}  // namespace

TEST_CASE("pointwise evaluation") {
  auto ball = TestFunction::indicator_ball(1);
  CHECK(ball.evaluate({0.5}) == 1.0);
  CHECK(ball.evaluate({2.0}) == 0.0);
  CHECK(TestFunction::power_log(1, 2, 0.2).evaluate({std::exp(-2.0)}) == doctest::Approx(1.7933971882).epsilon(1e-10));
  CHECK(TestFunction::power_log(1, 2, 0.2).evaluate({0.0}) == 0.0);
  CHECK(TestFunction::power_log(1, 2, 0.2).evaluate({0.6}) == 0.0);
  CHECK(dilate(ball, 2).evaluate({1.5}) == 1.0);
  CHECK(TestFunction::mollified_delta(1, 0.25).evaluate({0.1}) == doctest::Approx(2.0));
  CHECK(TestFunction::mollified_delta(2, 0.5).evaluate({0.1, 0.1}) == doctest::Approx(1.0 / (std::numbers::pi * 0.25)));
  CHECK(TestFunction::gaussian(2, 1).evaluate({1, 1}) == doctest::Approx(std::exp(-1.0)));
  CHECK(TestFunction::decay(1, 2).evaluate({1}) == doctest::Approx(0.25));
  CHECK(TestFunction::constant(3, 2.5).evaluate({7, 8, 9}) == 2.5);
  auto split = TestFunction::split_power_log(2, 1, 2, 1);
  CHECK(split.evaluate({0.1, std::exp(-2.0)}) == doctest::Approx(std::exp(1.0) / 2.0));
  CHECK(split.evaluate({0.1, 0.0}) == 0.0);
  CHECK(TestFunction::sum(ball, ball).evaluate({0.0}) == 2.0);
  CHECK_THROWS_AS(ball.evaluate({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("factories reject invalid parameters") {
  CHECK_THROWS_AS(TestFunction::indicator_ball(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::indicator_ball(0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::mollified_delta(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::power_log(1, 2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::split_power_log(2, 2, 2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::gaussian(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(dilate(TestFunction::gaussian(1), 0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::sum(TestFunction::gaussian(1), TestFunction::gaussian(2)), std::invalid_argument);
  CHECK_THROWS_AS(linear_map(TestFunction::gaussian(2), {1, 2, 2, 4}), std::invalid_argument);
}

TEST_CASE("transforms") {
  auto g = TestFunction::gaussian(2, 1);
  CHECK(holds<Gaussian>(dilate(g, 1)));
  CHECK(holds<Gaussian>(translate(g, {0, 0})));
  auto t = translate(g, {1, -2});
  CHECK(t.evaluate({1.5, 0.5}) == doctest::Approx(g.evaluate({0.5, 2.5})));
  auto masked = translate(g, {1, -2}, {true, false});
  CHECK(masked.evaluate({1.5, 0.5}) == doctest::Approx(g.evaluate({0.5, 0.5})));
  auto d = dilate(g, 3);
  CHECK(d.evaluate({1.5, 3}) == doctest::Approx(g.evaluate({0.5, 1})));
  auto l = linear_map(g, {1, 1, 0, 2});
  CHECK(l.evaluate({0.5, 0.25}) == doctest::Approx(g.evaluate({0.75, 0.5})));
}

TEST_CASE("supports and breakpoints") {
  auto ball = TestFunction::indicator_ball(2, 1, {1, 0});
  auto s = ball.support();
  REQUIRE(s);
  CHECK(s->lo == std::vector<double>{0, -1});
  CHECK(s->hi == std::vector<double>{2, 1});
  CHECK(ball.breakpoints()[0] == std::vector<double>{0, 2});
  CHECK_FALSE(TestFunction::gaussian(1).support());
  CHECK(TestFunction::constant(1, 0).is_zero());
  CHECK(TestFunction::constant(1, 0).support()->degenerate());
  auto d = dilate(TestFunction::indicator_ball(1), 2).support();
  CHECK(d->hi[0] == 2.0);
  auto pl = TestFunction::power_log(1, 2, 0.1).breakpoints();
  CHECK(pl[0] == std::vector<double>{-0.5, 0.0, 0.5});
}

TEST_CASE("analytic norms") {
  CHECK(lp_norm(TestFunction::indicator_ball(1), E("2")).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(lp_norm(TestFunction::indicator_ball(2), E("2")).value == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK(lp_norm(TestFunction::indicator_ball(2), E("inf")).value == 1.0);
  for (double delta : {0.5, 0.1, 0.01}) {
    CHECK(lp_norm(TestFunction::mollified_delta(1, delta), E("1")).value == doctest::Approx(1.0));
    CHECK(lp_norm(TestFunction::mollified_delta(3, delta), E("1")).value == doctest::Approx(1.0));
    CHECK(lp_norm(TestFunction::mollified_delta(1, delta), E("2")).value == doctest::Approx(1.0 / std::sqrt(2 * delta)));
  }
  CHECK(lp_norm(TestFunction::gaussian(1), E("2")).value == doctest::Approx(1.3313353638));
  CHECK(lp_norm(TestFunction::decay(1, 1), E("2")).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(lp_norm(TestFunction::constant(2, -3), E("inf")).value == 3.0);
  CHECK(lp_norm(TestFunction::constant(2, 0), E("2")).value == 0.0);
  CHECK(lp_norm(TestFunction::indicator_ball(1), E("2")).method == NormMethod::Analytic);
}

TEST_CASE("power-log norms") {
  auto e = lp_norm(TestFunction::power_log(1, 2, 1), E("2"));
  CHECK(e.value == doctest::Approx(std::sqrt(2.0 / std::log(2.0))).epsilon(1e-8));
  CHECK(e.abs_error < 1e-6);
  CHECK(lp_norm(TestFunction::split_power_log(2, 1, 2, 1), E("2")).value == doctest::Approx(1.4926907515).epsilon(1e-8));
  CHECK(lp_norm_outside(TestFunction::power_log(1, 2, 1), E("2"), 0.01).value == doctest::Approx(1.5655975217).epsilon(1e-8));
  CHECK(lp_norm(TestFunction::power_log(1, 2, 0.4), E("1")).value > 0.0);
  CHECK_THROWS_AS(lp_norm(TestFunction::power_log(1, 2, 0), E("2")), DivergentNormError);
  CHECK_THROWS_AS(lp_norm(TestFunction::power_log(1, 2, 0.1), E("4")), DivergentNormError);
  CHECK_THROWS_AS(lp_norm(TestFunction::power_log(1, 2, 0.1), E("inf")), DivergentNormError);
  CHECK_THROWS_AS(lp_norm(TestFunction::constant(1, 1), E("2")), DivergentNormError);
  CHECK_THROWS_AS(lp_norm(TestFunction::decay(1, 0.5), E("2")), DivergentNormError);
  CHECK_THROWS_AS(lp_norm_outside(TestFunction::gaussian(1), E("2"), 0.1), std::invalid_argument);
}

TEST_CASE("norms follow dilations, translations and linear maps") {
  const TestFunction fs[] = {TestFunction::indicator_ball(2), TestFunction::gaussian(2, 0.7),
                             TestFunction::power_log(2, 3, 0.5)};
  for (const auto& f : fs)
    for (double a : {0.5, 2.0}) {
      const double base = lp_norm(f, E("3/2")).value;
      CHECK(lp_norm(dilate(f, a), E("3/2")).value == doctest::Approx(std::pow(a, 2 / 1.5) * base).epsilon(1e-8));
      CHECK(lp_norm(translate(f, {a, -a}), E("3/2")).value == doctest::Approx(base));
      CHECK(lp_norm(linear_map(f, {a, 1, 0, 1}), E("3/2")).value == doctest::Approx(std::pow(a, -1 / 1.5) * base));
    }
}

TEST_CASE("norms of sums are computed by quadrature") {
  auto ball = TestFunction::indicator_ball(1);
  auto apart = TestFunction::sum(ball, translate(ball, {3}));
  auto e = lp_norm(apart, E("1"));
  CHECK(e.method == NormMethod::Quadrature);
  CHECK(e.value == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(lp_norm(apart, E("2")).value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(lp_norm(TestFunction::sum(ball, ball), E("inf")).value == doctest::Approx(2.0));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("witness families") {
  auto cfg_of = [](RationalMatrix d1, RationalMatrix d2, const char* p1, const char* p2, const char* q) {
    const int n1 = static_cast<int>(d1.rows()), n2 = static_cast<int>(d2.rows()), m = static_cast<int>(d1.cols());
    OperatorConfig c{n1, n2, m, std::move(d1), std::move(d2), E(p1), E(p2), E(q), Order{}};
    c.lambda = homogeneous_lambda(n1, n2, m, c.p1, c.p2, c.q);
    return c;
  };
  const RationalMatrix I1{{1}};

  SUBCASE("equality with n1 = m uses a ball and a split power-log") {
    auto cfg = cfg_of(I1, RationalMatrix{{1}, {0}}, "2", "2", "1");
    auto fams = witness_for(cfg, ClauseId::Case4a);
    REQUIRE(fams.size() == 1);
    Witness w = fams[0].build(0.1);
    CHECK(holds<IndicatorBall>(core(w.f1)));
    CHECK(holds<SplitPowerLog>(core(*w.f2)));
    CHECK(fams[0].parameter == FamilyParameter::Epsilon);
  }
  SUBCASE("two endpoint exponents use two balls") {
    auto cfg = cfg_of(I1, I1, "1", "1", "1");
    Witness w = witness_for(cfg, ClauseId::ExponentRangeFailed)[0].build(0);
    CHECK(holds<IndicatorBall>(w.f1));
    CHECK(holds<IndicatorBall>(*w.f2));
  }
  SUBCASE("the delta family for a failed strict inequality with p1 = 1") {
    auto cfg = cfg_of(I1, I1, "1", "2", "1");
    auto fam = witness_for(cfg, ClauseId::Case4a)[0];
    CHECK(fam.parameter == FamilyParameter::Delta);
    CHECK(fam.values == std::vector<double>{0.25, 0.0625, 0.015625});
    Witness w = fam.build(0.0625);
    CHECK(holds<MollifiedDelta>(core(w.f1)));
    CHECK(holds<PowerLog>(core(*w.f2)));
    CHECK(lp_norm(w.f1, E("1")).value == doctest::Approx(1.0));
  }
  SUBCASE("rank-deficient stack, homogeneity and shift families") {
    auto rank_cfg = cfg_of(RationalMatrix{{1, 0}}, RationalMatrix{{2, 0}}, "2", "2", "4");
    CHECK(witness_for(rank_cfg, ClauseId::RankStackDeficient).size() == 1);
    auto hom = cfg_of(I1, I1, "2", "2", "2");
    hom.lambda = Order{Rational(8, 5)};
    CHECK(witness_for(hom, ClauseId::HomogeneityFailed)[0].parameter == FamilyParameter::Dilation);
    auto shift = cfg_of(RationalMatrix{{1, 0}}, RationalMatrix{{0, 1}}, "2", "2", "3/2");
    shift.D1 = RationalMatrix{{1, 0}, {0, 0}};
    shift.D2 = RationalMatrix{{0, 1}, {0, 0}};
    shift.n1 = shift.n2 = 2;
    shift.lambda = homogeneous_lambda(2, 2, 2, shift.p1, shift.p2, shift.q);
    auto fam = witness_for(shift, ClauseId::Case4d)[0];
    CHECK(fam.parameter == FamilyParameter::Shift);
    CHECK(fam.values.front() < fam.values.back());
  }
  SUBCASE("infinite q pairs against a shrinking bump") {
    auto cfg = cfg_of(I1, I1, "3", "3", "inf");
    Witness w = witness_for(cfg, ClauseId::QMustBeFinite)[0].build(0.25);
    REQUIRE(w.h);
    CHECK(holds<MollifiedDelta>(*w.h));
  }
  SUBCASE("misuse is rejected") {
    CHECK_THROWS_AS(witness_for(cfg_of(I1, I1, "2", "2", "2"), ClauseId::Case4a), std::invalid_argument);
    CHECK_THROWS_AS(witness_for(cfg_of(I1, I1, "1", "2", "1"), ClauseId::Case4b), std::invalid_argument);
  }
  SUBCASE("radial operator with q < p uses a power-log family in epsilon") {
    auto fams = witness_for_radial(1, 1, E("2"), E("3/2"), Order{Rational(7, 6)}, ClauseId::ExponentOrderFailed);
    REQUIRE(fams.size() == 1);
    CHECK(fams[0].parameter == FamilyParameter::Epsilon);
    CHECK(holds<PowerLog>(fams[0].build(0.2).f1));
    CHECK(fams[0].values == std::vector<double>{0.4, 0.2, 0.1, 0.05});
  }
  CHECK(default_values(FamilyParameter::Dilation).size() == 5);
  CHECK(to_string(FamilyParameter::Delta) == "delta");
}
