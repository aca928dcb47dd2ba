#include "bilinfrac/witnesses.hpp"

#include <stdexcept>

namespace bilinfrac {

namespace {

constexpr double kEpsilon = 0.1;
constexpr double kDelta = 1.0 / 16.0;

using Builder = std::function<Witness(double)>;

TestFunction ball(int n) { return TestFunction::indicator_ball(n, 1.0); }

TestFunction one(int n) { return TestFunction::constant(n, 1.0); }

TestFunction power_log(int n, const Exponent& p, double eps) { return TestFunction::power_log(n, p.to_double(), eps); }

// The weighted block is the trailing n - lead coordinates; with no trailing block the plain power-log is used.
TestFunction split(int n, int lead, const Exponent& p, double eps) {
  if (lead >= n) return ball(n);
  if (lead == 0) return power_log(n, p, eps);
  return TestFunction::split_power_log(n, lead, p.to_double(), eps);
}

// a + a(. - t e_axis).
TestFunction pair_apart(const TestFunction& a, int axis, double t) {
  std::vector<double> z(a.dim(), 0.0);
  z[axis] = t;
  return TestFunction::sum(a, translate(a, z));
}

WitnessFamily family(std::string name, FamilyParameter p, Builder build) {
  return WitnessFamily{std::move(name), p, default_values(p), std::move(build)};
}

std::vector<double> to_doubles(const RationalMatrix& m) { return m.to_doubles(); }

bool is_identity(const RationalMatrix& m) { return m == RationalMatrix::identity(m.rows()); }

// Pulls reduced-coordinate witnesses back to the original coordinates: f_i -> f_i(P_i .), h -> h(Q^-1 .).
WitnessFamily pull_back(WitnessFamily fam, const JointNormalForm& nf) {
  Builder inner = std::move(fam.build);
  RationalMatrix q_inverse = invert(nf.Q);
  fam.build = [inner, p1 = nf.P1, p2 = nf.P2, q_inverse](double t) {
    Witness w = inner(t);
    if (!is_identity(p1)) w.f1 = linear_map(w.f1, to_doubles(p1));
    if (w.f2 && !is_identity(p2)) w.f2 = linear_map(*w.f2, to_doubles(p2));
    if (w.h && !is_identity(q_inverse)) w.h = linear_map(*w.h, to_doubles(q_inverse));
    return w;
  };
  return fam;
}

// The side whose translation along a direction the other side does not see breaks the inequality q >= p_side.
// In reduced coordinates side 1 is shifted along its first coordinate and side 2 along its coordinate r2 - 1.
WitnessFamily shift_family(const OperatorConfig& cfg, int side, std::size_t r2) {
  const int n1 = cfg.n1, n2 = cfg.n2;
  if (side == 1)
    return family("translated pair x ball", FamilyParameter::Shift,
                  [n1, n2](double t) { return Witness{pair_apart(ball(n1), 0, t), ball(n2), std::nullopt}; });
  const int axis = static_cast<int>(r2) - 1;
  return family("ball x translated pair", FamilyParameter::Shift,
                [n1, n2, axis](double t) { return Witness{ball(n1), pair_apart(ball(n2), axis, t), std::nullopt}; });
}

// f_side is a unit-mass bump of width delta, the other side a power-log of its own exponent.
WitnessFamily delta_family(const OperatorConfig& cfg, int side) {
  const int n1 = cfg.n1, n2 = cfg.n2;
  const Exponent p1 = cfg.p1, p2 = cfg.p2;
  if (side == 1)
    return family("mollified delta x power-log", FamilyParameter::Delta, [=](double t) {
      return Witness{TestFunction::mollified_delta(n1, t), power_log(n2, p2, kEpsilon), std::nullopt};
    });
  return family("power-log x mollified delta", FamilyParameter::Delta, [=](double t) {
    return Witness{power_log(n1, p1, kEpsilon), TestFunction::mollified_delta(n2, t), std::nullopt};
  });
}

std::vector<WitnessFamily> unreduced(const OperatorConfig& cfg, const Verdict& v) {
  const int n1 = cfg.n1, n2 = cfg.n2, m = cfg.m;
  const Exponent p1 = cfg.p1, p2 = cfg.p2, q = cfg.q;
  switch (v.clause) {
    case ClauseId::RankStackDeficient:
      return {family("ball x ball", FamilyParameter::None, [=](double) { return Witness{ball(n1), ball(n2), {}}; })};
    case ClauseId::HomogeneityFailed:
      return {family("dilated balls", FamilyParameter::Dilation,
                     [=](double a) { return Witness{dilate(ball(n1), a), dilate(ball(n2), a), {}}; })};
    case ClauseId::ExponentRangeFailed:
      switch (v.subreason) {
        case SubReason::PBelowOne: {
          const int side = p1.reciprocal() > 1 ? 1 : 2;
          const Exponent& pj = side == 1 ? p2 : p1;
          const int nj = side == 1 ? n2 : n1;
          const double lo = pj.is_infinite() ? 0.0 : nj / pj.to_double();
          const double hi = m * q.reciprocal().get_d() + nj - cfg.lambda.value.get_d();
          if (q.is_infinite() && pj.is_infinite())
            return {family("ball x constant", FamilyParameter::None, [=](double) {
              return side == 1 ? Witness{ball(n1), one(n2), {}} : Witness{one(n1), ball(n2), {}};
            })};
          const double alpha = hi > lo ? 0.5 * (lo + hi) : lo + 0.5;
          return {family("ball x slow decay", FamilyParameter::None, [=](double) {
            return side == 1 ? Witness{ball(n1), TestFunction::decay(n2, alpha), {}}
                             : Witness{TestFunction::decay(n1, alpha), ball(n2), {}};
          })};
        }
        case SubReason::NoIndexInOpenRange: {
          auto pick = [](int n, const Exponent& p) { return p.is_infinite() ? one(n) : ball(n); };
          return {family("endpoint pair", FamilyParameter::None,
                         [=](double) { return Witness{pick(n1, p1), pick(n2, p2), {}}; })};
        }
        case SubReason::P1InfiniteWithR2Deficient:
          return {family("constant x ball", FamilyParameter::None, [=](double) { return Witness{one(n1), ball(n2), {}}; })};
        case SubReason::P2InfiniteWithR1Deficient:
          return {family("ball x constant", FamilyParameter::None, [=](double) { return Witness{ball(n1), one(n2), {}}; })};
        default: break;
      }
      break;
    case ClauseId::QMustBeFinite: {
      auto pick = [](int n, const Exponent& p) {
        if (p.is_infinite()) return one(n);
        if (p.is_one()) return ball(n);
        return power_log(n, p, kEpsilon);
      };
      return {family("pairing against a shrinking bump", FamilyParameter::Delta, [=](double t) {
        return Witness{pick(n1, p1), pick(n2, p2), TestFunction::mollified_delta(m, t)};
      })};
    }
    default: break;
  }
  throw std::invalid_argument("no witness for clause " + to_string(v.clause));
}

// Families in the coordinates of the joint normal form.
std::vector<WitnessFamily> reduced(const OperatorConfig& cfg, const Verdict& v) {
  const int n1 = cfg.n1, n2 = cfg.n2, m = cfg.m;
  const Exponent p1 = cfg.p1, p2 = cfg.p2;
  const std::size_t r1 = v.r1, r2 = v.r2;
  const bool strict = v.subreason == SubReason::StrictInequalityFailed;
  auto side_of = [&](auto pred) { return pred(p1) ? 1 : 2; };

  switch (v.clause) {
    case ClauseId::Case4a: {
      if (strict && (p1.is_one() || p2.is_one())) return {delta_family(cfg, side_of([](auto& p) { return p.is_one(); }))};
      if (p1.is_infinite() || p2.is_infinite()) {
        const int inf_side = side_of([](auto& p) { return p.is_infinite(); });
        return {family("constant x power-log", FamilyParameter::Epsilon, [=](double e) {
          return inf_side == 1 ? Witness{one(n1), power_log(n2, p2, e), {}} : Witness{power_log(n1, p1, e), one(n2), {}};
        })};
      }
      if (strict)
        return {family("power-log x power-log", FamilyParameter::Epsilon,
                       [=](double e) { return Witness{power_log(n1, p1, e), power_log(n2, p2, e), {}}; })};
      if (n1 == m || n2 == m) {
        return {family("ball x split power-log", FamilyParameter::Epsilon, [=](double e) {
          return n1 == m ? Witness{ball(n1), split(n2, m, p2, e), {}} : Witness{split(n1, m, p1, e), ball(n2), {}};
        })};
      }
      return {family("split power-log x ball, paired with a ball", FamilyParameter::Epsilon,
                     [=](double e) { return Witness{split(n1, m, p1, e), ball(n2), ball(m)}; })};
    }
    case ClauseId::Case4b:
    case ClauseId::Case4c: {
      const int f = r1 == static_cast<std::size_t>(m) ? 1 : 2;
      const Exponent& pf = f == 1 ? p1 : p2;
      const Exponent& po = f == 1 ? p2 : p1;
      const int nf = f == 1 ? n1 : n2;
      const int no = f == 1 ? n2 : n1;
      if (strict) {
        if (pf.is_one()) return {delta_family(cfg, f)};
        return {shift_family(cfg, f, r2)};
      }
      // Equality q = p_f with p_f in (1, inf).
      return {family("endpoint witness", FamilyParameter::Epsilon, [=](double e) {
        TestFunction other = po.is_infinite() ? one(no)
                             : po.is_one()    ? TestFunction::mollified_delta(no, kDelta)
                                              : power_log(no, po, e);
        TestFunction full = nf > m ? split(nf, m, pf, e) : (po.in_open_range() ? ball(nf) : power_log(nf, pf, e));
        return f == 1 ? Witness{full, other, {}} : Witness{other, full, {}};
      })};
    }
    case ClauseId::Case4d: {
      if (strict) return {shift_family(cfg, p1 > p2 ? 1 : 2, r2)};
      if (p1.is_one() || p2.is_one()) return {delta_family(cfg, side_of([](auto& p) { return p.is_one(); }))};
      if (static_cast<std::size_t>(n1) == r1 || static_cast<std::size_t>(n2) == r2)
        return {family("ball x ball, paired with a ball", FamilyParameter::None,
                       [=](double) { return Witness{ball(n1), ball(n2), ball(m)}; })};
      return {family("split power-log x ball, paired with a ball", FamilyParameter::Epsilon, [=](double e) {
        return Witness{split(n1, static_cast<int>(r1), p1, e), ball(n2), ball(m)};
      })};
    }
    default: break;
  }
  throw std::invalid_argument("no witness for clause " + to_string(v.clause));
}

}  // namespace

std::string to_string(FamilyParameter p) {
  switch (p) {
    case FamilyParameter::None: return "none";
    case FamilyParameter::Delta: return "delta";
    case FamilyParameter::Epsilon: return "epsilon";
    case FamilyParameter::Dilation: return "dilation";
    case FamilyParameter::Shift: return "shift";
  }
  return "";
}

std::vector<double> default_values(FamilyParameter p) {
  switch (p) {
    case FamilyParameter::None: return {0.0};
    case FamilyParameter::Delta: return {1.0 / 4, 1.0 / 16, 1.0 / 64};
    case FamilyParameter::Epsilon: return {0.4, 0.2, 0.1, 0.05};
    case FamilyParameter::Dilation: return {0.25, 0.5, 1.0, 2.0, 4.0};
    case FamilyParameter::Shift: return {0.0, 2.0, 4.0, 8.0};
  }
  return {};
}

std::vector<WitnessFamily> witness_for(const OperatorConfig& cfg, ClauseId clause) {
  Verdict v = classify_bilinear(cfg);
  if (v.bounded) throw std::invalid_argument("configuration is bounded; there is no counterexample");
  if (v.clause != clause)
    throw std::invalid_argument("clause " + to_string(clause) + " does not apply; the verdict clause is " +
                                to_string(v.clause));
  switch (clause) {
    case ClauseId::Case4a:
    case ClauseId::Case4b:
    case ClauseId::Case4c:
    case ClauseId::Case4d: {
      JointNormalForm nf = joint_normal_form(cfg.D1, cfg.D2);
      std::vector<WitnessFamily> out;
      for (auto& fam : reduced(cfg, v)) out.push_back(pull_back(std::move(fam), nf));
      return out;
    }
    default: return unreduced(cfg, v);
  }
}

std::vector<WitnessFamily> witness_for_radial(int n, int m, const Exponent& p, const Exponent& q, const Order& lambda,
                                              ClauseId clause) {
  Verdict v = classify_radial(n, m, p, q, lambda);
  if (v.bounded) throw std::invalid_argument("configuration is bounded; there is no counterexample");
  if (v.clause != clause)
    throw std::invalid_argument("clause " + to_string(clause) + " does not apply; the verdict clause is " +
                                to_string(v.clause));
  switch (clause) {
    case ClauseId::ExponentRangeFailed:
      return {family(p.is_infinite() ? "constant" : "ball", FamilyParameter::None, [=](double) {
        return Witness{p.is_infinite() ? one(n) : ball(n), std::nullopt, std::nullopt};
      })};
    case ClauseId::QMustBeFinite:
      return {family("power-log paired with a shrinking bump", FamilyParameter::Delta, [=](double t) {
        return Witness{power_log(n, p, kEpsilon), std::nullopt, TestFunction::mollified_delta(m, t)};
      })};
    case ClauseId::HomogeneityFailed:
      return {family("dilated ball", FamilyParameter::Dilation,
                     [=](double a) { return Witness{dilate(ball(n), a), std::nullopt, std::nullopt}; })};
    case ClauseId::ExponentOrderFailed:
      return {family("power-log", FamilyParameter::Epsilon,
                     [=](double e) { return Witness{power_log(n, p, e), std::nullopt, std::nullopt}; })};
    default: break;
  }
  throw std::invalid_argument("no witness for clause " + to_string(clause));
}

}  // namespace bilinfrac
