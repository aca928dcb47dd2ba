#include "bilinfrac/classifier.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

namespace bilinfrac {

namespace {

constexpr std::array<std::pair<ClauseId, const char*>, 14> kClauseNames{{
    {ClauseId::Accepted, "Accepted"},
    {ClauseId::DimensionMismatch, "DimensionMismatch"},
    {ClauseId::LambdaOutOfRange, "LambdaOutOfRange"},
    {ClauseId::RankStackDeficient, "RankStackDeficient"},
    {ClauseId::HomogeneityFailed, "HomogeneityFailed"},
    {ClauseId::ExponentRangeFailed, "ExponentRangeFailed"},
    {ClauseId::QMustBeFinite, "QMustBeFinite"},
    {ClauseId::Case4a, "Case4a"},
    {ClauseId::Case4b, "Case4b"},
    {ClauseId::Case4c, "Case4c"},
    {ClauseId::Case4d, "Case4d"},
    {ClauseId::ExponentOrderFailed, "ExponentOrderFailed"},
    {ClauseId::PairingSumFailed, "PairingSumFailed"},
    {ClauseId::DiagonalTableFailed, "DiagonalTableFailed"},
}};

Verdict accept(std::string detail) {
  Verdict v;
  v.bounded = true;
  v.clause = ClauseId::Accepted;
  v.detail = std::move(detail);
  return v;
}

Verdict reject(ClauseId clause, SubReason sub, std::string detail) {
  Verdict v;
  v.bounded = false;
  v.clause = clause;
  v.subreason = sub;
  v.detail = std::move(detail);
  return v;
}

std::string inv(const Exponent& p) { return to_string(p.reciprocal()); }

// q >= p, compared through reciprocals so that infinity needs no special case.
bool at_least(const Exponent& q, const Exponent& p) { return q.reciprocal() <= p.reciprocal(); }

Verdict verdict_4a(const OperatorConfig& cfg) {
  Rational sum;
  for (const Exponent* p : {&cfg.p1, &cfg.p2})
    if (p->reciprocal() < 1) sum += p->reciprocal();
  const Rational& iq = cfg.q.reciprocal();
  if (iq > sum)
    return reject(ClauseId::Case4a, SubReason::StrictInequalityFailed,
                  "r1 = r2 = m: 1/q = " + to_string(iq) + " exceeds the sum over p_i > 1 of 1/p_i = " + to_string(sum));
  if (iq < sum) return accept("r1 = r2 = m: 1/q = " + to_string(iq) + " < " + to_string(sum));
  bool min_one = cfg.p1.is_one() || cfg.p2.is_one();
  bool both_open = cfg.p1.in_open_range() && cfg.p2.in_open_range();
  Rational total = cfg.p1.reciprocal() + cfg.p2.reciprocal();
  if (min_one) return accept("r1 = r2 = m: equality 1/q = " + to_string(sum) + " with min(p1, p2) = 1");
  if (both_open && cfg.n1 > cfg.m && cfg.n2 > cfg.m && total >= 1)
    return accept("r1 = r2 = m: equality 1/q = " + to_string(sum) + " with n1, n2 > m and 1/p1 + 1/p2 >= 1");
  return reject(ClauseId::Case4a, SubReason::EqualityNotAccessible,
                "r1 = r2 = m: equality 1/q = " + to_string(sum) +
                    " needs min(p1, p2) = 1, or 1 < p1, p2 < inf with n1 > m, n2 > m and 1/p1 + 1/p2 >= 1");
}

// f is the full-rank side, z the side with rank zero.
Verdict verdict_4b(const OperatorConfig& cfg, int f) {
  const Exponent& pf = f == 1 ? cfg.p1 : cfg.p2;
  const Exponent& pz = f == 1 ? cfg.p2 : cfg.p1;
  const int nf = f == 1 ? cfg.n1 : cfg.n2;
  const std::string sf = std::to_string(f);
  const std::string sz = std::to_string(3 - f);
  const std::string head = "r" + sf + " = m, r" + sz + " = 0: ";
  if (pf.is_one()) {
    if (at_least(cfg.q, pz)) return accept(head + "p" + sf + " = 1 and q >= p" + sz);
    return reject(ClauseId::Case4b, SubReason::StrictInequalityFailed,
                  head + "p" + sf + " = 1 requires q >= p" + sz + ", but 1/q = " + inv(cfg.q) + " > " + inv(pz));
  }
  if (!at_least(cfg.q, pf))
    return reject(ClauseId::Case4b, SubReason::StrictInequalityFailed,
                  head + "requires q >= p" + sf + ", but 1/q = " + inv(cfg.q) + " > " + inv(pf));
  if (cfg.q != pf) return accept(head + "q > p" + sf);
  bool ok = nf > cfg.m && pz.reciprocal() < 1 && pz.reciprocal() >= 1 - pf.reciprocal();
  if (ok) return accept(head + "equality q = p" + sf + " with n" + sf + " > m and 1 < p" + sz + " <= p" + sf + "'");
  return reject(ClauseId::Case4b, SubReason::EqualityNotAccessible,
                head + "equality q = p" + sf + " needs n" + sf + " > m and 1 < p" + sz + " <= p" + sf + "'");
}

// f is the full-rank side, d the side with 0 < rank < m.
Verdict verdict_4c(const OperatorConfig& cfg, int f) {
  const Exponent& pf = f == 1 ? cfg.p1 : cfg.p2;
  const Exponent& pd = f == 1 ? cfg.p2 : cfg.p1;
  const std::string sf = std::to_string(f);
  const std::string sd = std::to_string(3 - f);
  const std::string head = "r" + sf + " = m, 0 < r" + sd + " < m: ";
  if (pf.is_one() || pd.is_one()) {
    const Exponent& mx = std::max(pf, pd);
    if (at_least(cfg.q, mx)) return accept(head + "min(p1, p2) = 1 and q >= max(p1, p2)");
    return reject(ClauseId::Case4c, SubReason::StrictInequalityFailed,
                  head + "min(p1, p2) = 1 requires q >= max(p1, p2), but 1/q = " + inv(cfg.q) + " > " + inv(mx));
  }
  if (pd.is_infinite()) {
    if (cfg.q.reciprocal() < pf.reciprocal()) return accept(head + "p" + sd + " = inf and q > p" + sf);
    if (cfg.q == pf)
      return reject(ClauseId::Case4c, SubReason::EqualityNotAccessible,
                    head + "p" + sd + " = inf requires q > p" + sf + " strictly, but q = p" + sf);
    return reject(ClauseId::Case4c, SubReason::StrictInequalityFailed,
                  head + "p" + sd + " = inf requires q > p" + sf + ", but 1/q = " + inv(cfg.q) + " > " + inv(pf));
  }
  if (at_least(cfg.q, pf)) return accept(head + "1 < p1, p2 < inf and q >= p" + sf);
  return reject(ClauseId::Case4c, SubReason::StrictInequalityFailed,
                head + "requires q >= p" + sf + ", but 1/q = " + inv(cfg.q) + " > " + inv(pf));
}

Verdict verdict_4d(const OperatorConfig& cfg, std::size_t r1, std::size_t r2) {
  const std::string head = "0 < r1, r2 < m: ";
  const Exponent& mx = std::max(cfg.p1, cfg.p2);
  if (!at_least(cfg.q, mx))
    return reject(ClauseId::Case4d, SubReason::StrictInequalityFailed,
                  head + "requires q >= max(p1, p2), but 1/q = " + inv(cfg.q) + " > " + inv(mx));
  if (cfg.q != mx) return accept(head + "q > max(p1, p2)");
  const std::size_t m = static_cast<std::size_t>(cfg.m);
  const std::size_t n1 = static_cast<std::size_t>(cfg.n1);
  const std::size_t n2 = static_cast<std::size_t>(cfg.n2);
  if (cfg.p1.is_one() && (r1 + r2 > m || r2 < n2))
    return accept(head + "equality q = max(p1, p2) with p1 = 1 and (r1 + r2 > m or r2 < n2)");
  if (cfg.p2.is_one() && (r1 + r2 > m || r1 < n1))
    return accept(head + "equality q = max(p1, p2) with p2 = 1 and (r1 + r2 > m or r1 < n1)");
  if (cfg.p1.in_open_range() && cfg.p2.in_open_range() && cfg.p1 != cfg.p2)
    return accept(head + "equality q = max(p1, p2) with 1 < p1 != p2 < inf");
  if (cfg.p1 == cfg.p2 && r1 + r2 > m) return accept(head + "equality q = p1 = p2 with r1 + r2 > m");
  if (cfg.p1 == cfg.p2 && cfg.p1.in_open_range() && cfg.p1.reciprocal() >= Rational(1, 2) && r1 + r2 == m && n1 > r1 &&
      n2 > r2)
    return accept(head + "equality q = p1 = p2 <= 2 with r1 + r2 = m, n1 > r1 and n2 > r2");
  return reject(ClauseId::Case4d, SubReason::EqualityNotAccessible,
                head + "equality q = max(p1, p2) = " + to_string(mx) + " is not accessible for r1 = " +
                    std::to_string(r1) + ", r2 = " + std::to_string(r2));
}

}  // namespace

std::string to_string(ClauseId c) {
  for (const auto& [id, name] : kClauseNames)
    if (id == c) return name;
  return "Unknown";
}

ClauseId parse_clause(const std::string& name) {
  for (const auto& [id, n] : kClauseNames)
    if (name == n) return id;
  throw std::invalid_argument("unknown clause '" + name + "'");
}

std::string to_string(SubReason s) {
  switch (s) {
    case SubReason::None: return "";
    case SubReason::PBelowOne: return "p_below_one";
    case SubReason::NoIndexInOpenRange: return "no_index_in_open_range";
    case SubReason::P1InfiniteWithR2Deficient: return "p1_infinite_with_r2_deficient";
    case SubReason::P2InfiniteWithR1Deficient: return "p2_infinite_with_r1_deficient";
    case SubReason::PNotInOpenRange: return "p_not_in_open_range";
    case SubReason::StrictInequalityFailed: return "strict_inequality_failed";
    case SubReason::EqualityNotAccessible: return "equality_not_accessible";
  }
  return "";
}

void check_dimensions(const OperatorConfig& cfg) {
  auto sz = [](int v) { return static_cast<std::size_t>(v); };
  if (cfg.n1 < 1 || cfg.n2 < 1 || cfg.m < 1)
    throw HypothesisError(ClauseId::DimensionMismatch, "dimensions n1, n2, m must be positive");
  if (cfg.D1.rows() != sz(cfg.n1) || cfg.D1.cols() != sz(cfg.m))
    throw HypothesisError(ClauseId::DimensionMismatch, "D1 must be n1 x m = " + std::to_string(cfg.n1) + " x " +
                                                           std::to_string(cfg.m));
  if (cfg.D2.rows() != sz(cfg.n2) || cfg.D2.cols() != sz(cfg.m))
    throw HypothesisError(ClauseId::DimensionMismatch, "D2 must be n2 x m = " + std::to_string(cfg.n2) + " x " +
                                                           std::to_string(cfg.m));
}

bool check_homogeneity(const OperatorConfig& cfg) {
  return homogeneous_lambda(cfg.n1, cfg.n2, cfg.m, cfg.p1, cfg.p2, cfg.q) == cfg.lambda;
}

Verdict classify_bilinear(const OperatorConfig& cfg) {
  check_dimensions(cfg);
  const Rational& lambda = cfg.lambda.value;
  if (sgn(lambda) <= 0 || lambda >= cfg.n1 + cfg.n2)
    throw HypothesisError(ClauseId::LambdaOutOfRange,
                          "lambda = " + to_string(lambda) + " is outside (0, n1 + n2) = (0, " +
                              std::to_string(cfg.n1 + cfg.n2) + ")");

  Verdict v = [&]() -> Verdict {
    const std::size_t m = static_cast<std::size_t>(cfg.m);
    std::size_t stacked = rank(vstack(cfg.D1, cfg.D2));
    if (stacked != m)
      return reject(ClauseId::RankStackDeficient, SubReason::None,
                    "rank of [D1; D2] is " + std::to_string(stacked) + " < m = " + std::to_string(m));
    std::size_t r1 = rank(cfg.D1);
    std::size_t r2 = rank(cfg.D2);

    if (cfg.p1.reciprocal() > 1 || cfg.p2.reciprocal() > 1)
      return reject(ClauseId::ExponentRangeFailed, SubReason::PBelowOne,
                    "p1 = " + to_string(cfg.p1) + ", p2 = " + to_string(cfg.p2) + ": both must be >= 1");
    Order expected = homogeneous_lambda(cfg.n1, cfg.n2, cfg.m, cfg.p1, cfg.p2, cfg.q);
    if (expected != cfg.lambda)
      return reject(ClauseId::HomogeneityFailed, SubReason::None,
                    "lambda = " + to_string(lambda) + " but n1/p1' + n2/p2' + m/q = " + to_string(expected));

    if (!cfg.p1.in_open_range() && !cfg.p2.in_open_range())
      return reject(ClauseId::ExponentRangeFailed, SubReason::NoIndexInOpenRange,
                    "neither p1 = " + to_string(cfg.p1) + " nor p2 = " + to_string(cfg.p2) + " lies in (1, inf)");
    if (cfg.p1.is_infinite() && r2 < m)
      return reject(ClauseId::ExponentRangeFailed, SubReason::P1InfiniteWithR2Deficient,
                    "p1 = inf requires r2 = m, but r2 = " + std::to_string(r2));
    if (cfg.p2.is_infinite() && r1 < m)
      return reject(ClauseId::ExponentRangeFailed, SubReason::P2InfiniteWithR1Deficient,
                    "p2 = inf requires r1 = m, but r1 = " + std::to_string(r1));

    if (cfg.q.is_infinite()) {
      bool both_open = cfg.p1.in_open_range() && cfg.p2.in_open_range();
      if (!both_open || cfg.p1.reciprocal() + cfg.p2.reciprocal() < 1)
        return reject(ClauseId::QMustBeFinite, SubReason::None,
                      "q = inf needs 1 < p1, p2 < inf and 1/p1 + 1/p2 >= 1");
    }

    if (r1 == m && r2 == m) return verdict_4a(cfg);
    if (r1 == 0 && r2 == m) return verdict_4b(cfg, 2);
    if (r2 == 0 && r1 == m) return verdict_4b(cfg, 1);
    if (r2 == m) return verdict_4c(cfg, 2);
    if (r1 == m) return verdict_4c(cfg, 1);
    return verdict_4d(cfg, r1, r2);
  }();

  v.r1 = rank(cfg.D1);
  v.r2 = rank(cfg.D2);
  v.lambda = lambda;
  return v;
}

Verdict classify_linear(int n, int m, const RationalMatrix& d, const Exponent& p, const Exponent& q,
                        const Order& lambda) {
  if (n < 1 || m < 1 || d.rows() != static_cast<std::size_t>(n) || d.cols() != static_cast<std::size_t>(m))
    throw HypothesisError(ClauseId::DimensionMismatch, "D must be n x m");
  if (sgn(lambda.value) <= 0 || lambda.value >= n)
    throw HypothesisError(ClauseId::LambdaOutOfRange,
                          "lambda = " + to_string(lambda) + " is outside (0, n) = (0, " + std::to_string(n) + ")");
  Verdict v = [&]() -> Verdict {
    std::size_t r = rank(d);
    if (r != static_cast<std::size_t>(m))
      return reject(ClauseId::RankStackDeficient, SubReason::None,
                    "rank of D is " + std::to_string(r) + " < m = " + std::to_string(m));
    if (!p.in_open_range())
      return reject(ClauseId::ExponentRangeFailed, SubReason::PNotInOpenRange,
                    "p = " + to_string(p) + " must lie in (1, inf)");
    if (q.is_infinite()) return reject(ClauseId::QMustBeFinite, SubReason::None, "q must be finite");
    Rational expected = n * (1 - p.reciprocal()) + m * q.reciprocal();
    if (expected != lambda.value)
      return reject(ClauseId::HomogeneityFailed, SubReason::None,
                    "lambda = " + to_string(lambda) + " but n/p' + m/q = " + to_string(expected));
    if (q.reciprocal() >= p.reciprocal())
      return reject(ClauseId::ExponentOrderFailed, SubReason::StrictInequalityFailed,
                    "requires p < q, got p = " + to_string(p) + ", q = " + to_string(q));
    return accept("rank D = m, 1 < p < q < inf and lambda = n/p' + m/q");
  }();
  v.r1 = rank(d);
  v.lambda = lambda.value;
  return v;
}

Verdict classify_radial(int n, int m, const Exponent& p, const Exponent& q, const Order& lambda) {
  if (n < 1 || m < 1) throw HypothesisError(ClauseId::DimensionMismatch, "dimensions must be positive");
  if (sgn(lambda.value) <= 0)
    throw HypothesisError(ClauseId::LambdaOutOfRange, "lambda = " + to_string(lambda) + " must be positive");
  Verdict v = [&]() -> Verdict {
    if (!p.in_open_range())
      return reject(ClauseId::ExponentRangeFailed, SubReason::PNotInOpenRange,
                    "p = " + to_string(p) + " must lie in (1, inf)");
    if (q.is_infinite()) return reject(ClauseId::QMustBeFinite, SubReason::None, "q must be finite");
    Rational expected = n * (1 - p.reciprocal()) + m * q.reciprocal();
    if (expected != lambda.value)
      return reject(ClauseId::HomogeneityFailed, SubReason::None,
                    "lambda = " + to_string(lambda) + " but n/p' + m/q = " + to_string(expected));
    if (q.reciprocal() > p.reciprocal())
      return reject(ClauseId::ExponentOrderFailed, SubReason::StrictInequalityFailed,
                    "requires p <= q, got p = " + to_string(p) + ", q = " + to_string(q));
    return accept("1 < p <= q < inf and lambda = n/p' + m/q");
  }();
  v.lambda = lambda.value;
  return v;
}

Verdict classify_pairing(int n1, int n2, const Exponent& p1, const Exponent& p2) {
  if (n1 < 1 || n2 < 1) throw HypothesisError(ClauseId::DimensionMismatch, "dimensions must be positive");
  Verdict v = [&]() -> Verdict {
    if (!p1.in_open_range() || !p2.in_open_range())
      return reject(ClauseId::ExponentRangeFailed, SubReason::PNotInOpenRange,
                    "p1 = " + to_string(p1) + " and p2 = " + to_string(p2) + " must both lie in (1, inf)");
    Rational sum = p1.reciprocal() + p2.reciprocal();
    if (sum < 1)
      return reject(ClauseId::PairingSumFailed, SubReason::StrictInequalityFailed,
                    "1/p1 + 1/p2 = " + to_string(sum) + " < 1");
    return accept("1 < p1, p2 < inf and 1/p1 + 1/p2 = " + to_string(sum) + " >= 1");
  }();
  if (p1.reciprocal() <= 1 && p2.reciprocal() <= 1)
    v.lambda = n1 * (1 - p1.reciprocal()) + n2 * (1 - p2.reciprocal());
  return v;
}

Verdict classify_diagonal(int n, const Exponent& p1, const Exponent& p2, const Exponent& q, const Order& lambda) {
  if (n < 1) throw HypothesisError(ClauseId::DimensionMismatch, "dimension must be positive");
  if (p1.reciprocal() > 1 || p2.reciprocal() > 1)
    throw HypothesisError(ClauseId::ExponentRangeFailed, "the diagonal table needs p1, p2 >= 1");
  if (sgn(lambda.value) <= 0 || lambda.value >= 2 * n)
    throw HypothesisError(ClauseId::LambdaOutOfRange, "lambda = " + to_string(lambda) + " is outside (0, 2n)");
  Rational sum = p1.reciprocal() + p2.reciprocal();
  Rational scaling = q.reciprocal() + (2 * n - lambda.value) / n;
  if (sum != scaling)
    throw HypothesisError(ClauseId::HomogeneityFailed,
                          "scaling relation fails: 1/p1 + 1/p2 = " + to_string(sum) +
                              " but 1/q + (2n - lambda)/n = " + to_string(Rational(scaling)));
  Verdict v = [&]() -> Verdict {
    if (!p1.in_open_range() && !p2.in_open_range())
      return reject(ClauseId::ExponentRangeFailed, SubReason::NoIndexInOpenRange, "neither p1 nor p2 lies in (1, inf)");
    if (q.is_infinite() && !(p1.in_open_range() && p2.in_open_range() && sum >= 1))
      return reject(ClauseId::QMustBeFinite, SubReason::None, "q = inf only when 1 < p1, p2 < inf and 1/p1 + 1/p2 >= 1");
    const Rational& iq = q.reciprocal();
    if (p1.is_one() || p2.is_one()) {
      const Exponent& mx = std::max(p1, p2);
      if (iq <= mx.reciprocal()) return accept("min(p1, p2) = 1 and max(p1, p2) <= q < inf");
      return reject(ClauseId::DiagonalTableFailed, SubReason::StrictInequalityFailed,
                    "min(p1, p2) = 1 requires q >= max(p1, p2)");
    }
    if (p1.is_infinite() || p2.is_infinite()) {
      const Exponent& mn = std::min(p1, p2);
      if (iq < mn.reciprocal()) return accept("max(p1, p2) = inf and min(p1, p2) < q < inf");
      return reject(ClauseId::DiagonalTableFailed,
                    iq == mn.reciprocal() ? SubReason::EqualityNotAccessible : SubReason::StrictInequalityFailed,
                    "max(p1, p2) = inf requires q > min(p1, p2)");
    }
    if (iq < sum) return accept("1 < p1, p2 < inf and 1/q < 1/p1 + 1/p2");
    return reject(ClauseId::DiagonalTableFailed,
                  iq == sum ? SubReason::EqualityNotAccessible : SubReason::StrictInequalityFailed,
                  "1 < p1, p2 < inf requires 1/q < 1/p1 + 1/p2 = " + to_string(sum));
  }();
  v.r1 = v.r2 = static_cast<std::size_t>(n);
  v.lambda = lambda.value;
  return v;
}

}  // namespace bilinfrac
