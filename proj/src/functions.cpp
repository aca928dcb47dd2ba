#include "bilinfrac/functions.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace bilinfrac {

namespace {

constexpr int kMaxDim = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

TestFunction make(FunctionVariant v) {
  return TestFunction(std::make_shared<const FunctionNode>(FunctionNode{std::move(v)}));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double norm2(const double* y, int from, int to) {
  double s = 0.0;
  for (int i = from; i < to; ++i) s += y[i] * y[i];
  return std::sqrt(s);
}

// Inverse and |det| of a small dense matrix by Gaussian elimination with partial pivoting.
std::pair<std::vector<double>, double> invert_dense(const std::vector<double>& a, int n) {
  std::vector<double> m = a, inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0.0) throw std::invalid_argument("linear map is singular");
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        std::swap(m[piv * n + j], m[c * n + j]);
        std::swap(inv[piv * n + j], inv[c * n + j]);
      }
    const double p = m[c * n + c];
    det *= p;
    for (int j = 0; j < n; ++j) {
      m[c * n + j] /= p;
      inv[c * n + j] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r * n + c] == 0.0) continue;
      const double f = m[r * n + c];
      for (int j = 0; j < n; ++j) {
        m[r * n + j] -= f * m[c * n + j];
        inv[r * n + j] -= f * inv[c * n + j];
      }
    }
  }
  return {inv, std::abs(det)};
}

// The part of a power-log norm integral that depends on the radius of the weighted block,
// after u = log(1/rho): int_{log 2}^{upper} exp(-beta u) u^(-gamma) g(u) du with g(u) = (1/4 - e^(-2u))^(k/2).
struct RadialProfile {
  double beta;
  double gamma;
  int lead;

  double g(double u) const {
    if (lead == 0) return 1.0;
    return std::pow(std::max(0.0, 0.25 - std::exp(-2.0 * u)), 0.5 * lead);
  }

  double integral(double upper) const {
    const double a = std::numbers::ln2;
    auto h = [this](double u) { return std::exp(-beta * u) * std::pow(u, -gamma) * g(u); };
    if (std::isfinite(upper)) {
      if (upper <= a) return 0.0;
      return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, a, upper, 15, 1e-12);
    }
    if (beta < 0.0 || (beta == 0.0 && gamma <= 1.0)) return kInf;
    if (beta == 0.0) {
      if (lead == 0) return std::pow(a, 1.0 - gamma) / (gamma - 1.0);
      // t = u^(1 - gamma) turns the algebraic tail into a finite interval.
      const double e = gamma - 1.0;
      auto k = [this, e](double t) { return g(std::pow(t, -1.0 / e)); };
      boost::math::quadrature::tanh_sinh<double> ts;
      return ts.integrate(k, 0.0, std::pow(a, -e)) / e;
    }
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(h, a, kInf);
  }
};

bool same_exponent(double s, double p) { return std::abs(s - p) <= 1e-12 * std::max(1.0, p); }

RadialProfile power_log_profile(int weighted_dim, int lead, double p, double epsilon, double s) {
  double beta = weighted_dim * (1.0 - s / p);
  if (same_exponent(s, p)) beta = 0.0;
  return RadialProfile{beta, (1.0 + epsilon) * s / p, lead};
}

// Constant factor in front of the radial profile: surface area of the weighted sphere times the volume
// of the unit ball in the free block.
double power_log_prefactor(int weighted_dim, int lead) {
  return weighted_dim * unit_ball_volume(weighted_dim) * (lead > 0 ? unit_ball_volume(lead) : 1.0);
}

NormEstimate analytic(double v) { return NormEstimate{v, 0.0, NormMethod::Analytic}; }

NormEstimate power_norm(double integral, double prefactor, double s, const std::string& what) {
  if (!std::isfinite(integral)) throw DivergentNormError(what + " has infinite L^" + std::to_string(s) + " norm");
  NormEstimate e = analytic(std::pow(prefactor * integral, 1.0 / s));
  e.method = NormMethod::Quadrature;
  e.abs_error = e.value * 1e-10;
  return e;
}

NormEstimate numeric_norm(const TestFunction& f, double s, const QuadratureSpec& quad) {
  const int n = f.dim();
  NormEstimate e;
  Box box = Box::cube(n, quad.truncation_radius);
  if (auto sup = f.support())
    box = *sup;
  else
    e.truncated_support = true;
  if (box.degenerate()) return analytic(0.0);
  if (!std::isfinite(s)) {
    // Supremum over quasi-random samples.
    e.method = NormMethod::Sampled;
    std::array<double, kMaxDim> y{};
    static constexpr std::array<unsigned, kMaxDim> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    double best = 0.0;
    for (std::size_t k = 1; k <= quad.samples; ++k) {
      for (int i = 0; i < n; ++i) y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * radical_inverse(k, primes[i]);
      best = std::max(best, std::abs(f(y.data())));
    }
    e.value = best;
    return e;
  }
  Integrand g = [&f, s](const double* y) { return std::pow(std::abs(f(y)), s); };
  CubatureControl control{quad.target_rel_err, 0.0, quad.evaluations_for(n)};
  CubatureResult r = adaptive_cubature(g, split_at({box}, f.breakpoints()), control);
  e.method = NormMethod::Quadrature;
  e.value = std::pow(std::max(0.0, r.value), 1.0 / s);
  e.abs_error = r.value > 0 ? e.value * r.abs_error / (s * r.value) : r.abs_error;
  e.tolerance_not_met = !r.converged;
  return e;
}

}  // namespace

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::Analytic: return "analytic";
    case NormMethod::Quadrature: return "quadrature";
    case NormMethod::Sampled: return "sampled";
  }
  return "";
}

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

TestFunction::TestFunction(std::shared_ptr<const FunctionNode> node) : node_(std::move(node)) {}

TestFunction TestFunction::indicator_ball(int dim, double radius, std::vector<double> center) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  require(radius > 0, "radius must be positive");
  if (center.empty()) center.assign(dim, 0.0);
  require(static_cast<int>(center.size()) == dim, "center has the wrong dimension");
  return make(IndicatorBall{dim, radius, std::move(center)});
}

TestFunction TestFunction::mollified_delta(int dim, double width) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  require(width > 0, "width must be positive");
  return make(MollifiedDelta{dim, width});
}

TestFunction TestFunction::power_log(int dim, double p, double epsilon) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  require(p > 0 && std::isfinite(p), "p must be positive and finite");
  require(epsilon >= 0, "epsilon must be non-negative");
  return make(PowerLog{dim, p, epsilon});
}

TestFunction TestFunction::split_power_log(int dim, int lead, double p, double epsilon) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  require(lead >= 0 && lead < dim, "the weighted block must be non-empty");
  require(p > 0 && std::isfinite(p), "p must be positive and finite");
  require(epsilon >= 0, "epsilon must be non-negative");
  return make(SplitPowerLog{dim, lead, p, epsilon});
}

TestFunction TestFunction::constant(int dim, double value) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  return make(Constant{dim, value});
}

TestFunction TestFunction::gaussian(int dim, double scale) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  require(scale > 0, "scale must be positive");
  return make(Gaussian{dim, scale});
}

TestFunction TestFunction::decay(int dim, double alpha) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 16]");
  require(alpha > 0, "alpha must be positive");
  return make(Decay{dim, alpha});
}

TestFunction TestFunction::sum(const TestFunction& a, const TestFunction& b) {
  require(a.dim() == b.dim(), "summands must have the same dimension");
  return make(Sum{a, b});
}

TestFunction dilate(const TestFunction& f, double a) {
  require(a > 0 && std::isfinite(a), "dilation factor must be positive");
  if (a == 1.0) return f;
  return make(Dilated{f, a});
}

TestFunction translate(const TestFunction& f, const std::vector<double>& z, const std::vector<bool>& mask) {
  require(static_cast<int>(z.size()) == f.dim(), "shift has the wrong dimension");
  require(mask.empty() || static_cast<int>(mask.size()) == f.dim(), "mask has the wrong dimension");
  std::vector<double> shift = z;
  bool any = false;
  for (int i = 0; i < f.dim(); ++i) {
    if (!mask.empty() && !mask[i]) shift[i] = 0.0;
    any = any || shift[i] != 0.0;
  }
  if (!any) return f;
  return make(Translated{f, std::move(shift)});
}

TestFunction linear_map(const TestFunction& f, const std::vector<double>& matrix) {
  const int n = f.dim();
  require(static_cast<int>(matrix.size()) == n * n, "linear map has the wrong size");
  auto [inv, det] = invert_dense(matrix, n);
  return make(LinearMap{f, matrix, std::move(inv), det});
}

int TestFunction::dim() const {
  require(static_cast<bool>(node_), "empty test function");
  return std::visit(Overloaded{
                        [](const Sum& s) { return s.first.dim(); },
                        [](const Dilated& d) { return d.inner.dim(); },
                        [](const Translated& t) { return t.inner.dim(); },
                        [](const LinearMap& l) { return l.inner.dim(); },
                        [](const auto& leaf) { return leaf.dim; },
                    },
                    node_->value);
}

double TestFunction::evaluate(const std::vector<double>& y) const {
  require(static_cast<int>(y.size()) == dim(), "point has dimension " + std::to_string(y.size()) +
                                                   ", function has dimension " + std::to_string(dim()));
  return (*this)(y.data());
}

double TestFunction::operator()(const double* y) const {
  return std::visit(
      Overloaded{
          [y](const IndicatorBall& b) {
            double s = 0.0;
            for (int i = 0; i < b.dim; ++i) s += (y[i] - b.center[i]) * (y[i] - b.center[i]);
            return s <= b.radius * b.radius ? 1.0 : 0.0;
          },
          [y](const MollifiedDelta& m) {
            if (norm2(y, 0, m.dim) > m.width) return 0.0;
            return 1.0 / (unit_ball_volume(m.dim) * std::pow(m.width, m.dim));
          },
          [y](const PowerLog& f) {
            const double r = norm2(y, 0, f.dim);
            if (r == 0.0 || r > 0.5) return 0.0;
            return std::pow(r, -f.dim / f.p) * std::pow(std::log(1.0 / r), -(1.0 + f.epsilon) / f.p);
          },
          [y](const SplitPowerLog& f) {
            if (norm2(y, 0, f.dim) > 0.5) return 0.0;
            const double r = norm2(y, f.lead, f.dim);
            if (r == 0.0) return 0.0;
            return std::pow(r, -(f.dim - f.lead) / f.p) * std::pow(std::log(1.0 / r), -(1.0 + f.epsilon) / f.p);
          },
          [](const Constant& c) { return c.value; },
          [y](const Gaussian& g) {
            const double r = norm2(y, 0, g.dim);
            return std::exp(-r * r / (2.0 * g.scale * g.scale));
          },
          [y](const Decay& d) { return std::pow(1.0 + norm2(y, 0, d.dim), -d.alpha); },
          [y](const Sum& s) { return s.first(y) + s.second(y); },
          [y](const Dilated& d) {
            std::array<double, kMaxDim> z{};
            const int n = d.inner.dim();
            for (int i = 0; i < n; ++i) z[i] = y[i] / d.a;
            return d.inner(z.data());
          },
          [y](const Translated& t) {
            std::array<double, kMaxDim> z{};
            const int n = t.inner.dim();
            for (int i = 0; i < n; ++i) z[i] = y[i] - t.shift[i];
            return t.inner(z.data());
          },
          [y](const LinearMap& l) {
            std::array<double, kMaxDim> z{};
            const int n = l.inner.dim();
            for (int i = 0; i < n; ++i) {
              double s = 0.0;
              for (int j = 0; j < n; ++j) s += l.matrix[i * n + j] * y[j];
              z[i] = s;
            }
            return l.inner(z.data());
          },
      },
      node_->value);
}

bool TestFunction::is_zero() const {
  return std::visit(Overloaded{
                        [](const Constant& c) { return c.value == 0.0; },
                        [](const Sum& s) { return s.first.is_zero() && s.second.is_zero(); },
                        [](const Dilated& d) { return d.inner.is_zero(); },
                        [](const Translated& t) { return t.inner.is_zero(); },
                        [](const LinearMap& l) { return l.inner.is_zero(); },
                        [](const auto&) { return false; },
                    },
                    node_->value);
}

std::optional<Box> TestFunction::support() const {
  const int n = dim();
  if (is_zero()) return Box{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  return std::visit(
      Overloaded{
          [](const IndicatorBall& b) -> std::optional<Box> {
            Box out = Box::cube(b.dim, b.radius);
            for (int i = 0; i < b.dim; ++i) {
              out.lo[i] += b.center[i];
              out.hi[i] += b.center[i];
            }
            return out;
          },
          [](const MollifiedDelta& m) -> std::optional<Box> { return Box::cube(m.dim, m.width); },
          [](const PowerLog& f) -> std::optional<Box> { return Box::cube(f.dim, 0.5); },
          [](const SplitPowerLog& f) -> std::optional<Box> { return Box::cube(f.dim, 0.5); },
          [](const Constant&) -> std::optional<Box> { return std::nullopt; },
          [](const Gaussian&) -> std::optional<Box> { return std::nullopt; },
          [](const Decay&) -> std::optional<Box> { return std::nullopt; },
          [](const Sum& s) -> std::optional<Box> {
            if (s.first.is_zero()) return s.second.support();
            if (s.second.is_zero()) return s.first.support();
            auto a = s.first.support();
            auto b = s.second.support();
            if (!a || !b) return std::nullopt;
            return hull(*a, *b);
          },
          [](const Dilated& d) -> std::optional<Box> {
            auto b = d.inner.support();
            if (!b) return std::nullopt;
            for (int i = 0; i < b->dim(); ++i) {
              b->lo[i] *= d.a;
              b->hi[i] *= d.a;
            }
            return b;
          },
          [](const Translated& t) -> std::optional<Box> {
            auto b = t.inner.support();
            if (!b) return std::nullopt;
            for (int i = 0; i < b->dim(); ++i) {
              b->lo[i] += t.shift[i];
              b->hi[i] += t.shift[i];
            }
            return b;
          },
          [](const LinearMap& l) -> std::optional<Box> {
            auto b = l.inner.support();
            if (!b) return std::nullopt;
            const int n = b->dim();
            Box out{std::vector<double>(n, kInf), std::vector<double>(n, -kInf)};
            for (unsigned mask = 0; mask < (1u << n); ++mask)
              for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += l.inverse[i * n + j] * ((mask >> j) & 1u ? b->hi[j] : b->lo[j]);
                out.lo[i] = std::min(out.lo[i], s);
                out.hi[i] = std::max(out.hi[i], s);
              }
            return out;
          },
      },
      node_->value);
}

std::vector<std::vector<double>> TestFunction::breakpoints() const {
  const int n = dim();
  std::vector<std::vector<double>> out(n);
  std::visit(Overloaded{
                 [&](const IndicatorBall& b) {
                   for (int i = 0; i < n; ++i) out[i] = {b.center[i] - b.radius, b.center[i] + b.radius};
                 },
                 [&](const MollifiedDelta& m) {
                   for (int i = 0; i < n; ++i) out[i] = {-m.width, m.width};
                 },
                 [&](const PowerLog&) {
                   for (int i = 0; i < n; ++i) out[i] = {-0.5, 0.0, 0.5};
                 },
                 [&](const SplitPowerLog& f) {
                   for (int i = 0; i < n; ++i) out[i] = i < f.lead ? std::vector<double>{-0.5, 0.5} : std::vector<double>{-0.5, 0.0, 0.5};
                 },
                 [&](const Sum& s) {
                   auto a = s.first.breakpoints();
                   auto b = s.second.breakpoints();
                   for (int i = 0; i < n; ++i) {
                     out[i] = a[i];
                     out[i].insert(out[i].end(), b[i].begin(), b[i].end());
                   }
                 },
                 [&](const Dilated& d) {
                   out = d.inner.breakpoints();
                   for (auto& axis : out)
                     for (double& c : axis) c *= d.a;
                 },
                 [&](const Translated& t) {
                   out = t.inner.breakpoints();
                   for (int i = 0; i < n; ++i)
                     for (double& c : out[i]) c += t.shift[i];
                 },
                 [&](const auto&) {},
             },
             node_->value);
  return out;
}

NormEstimate lp_norm(const TestFunction& f, const Exponent& p, const QuadratureSpec& quad) {
  const double s = p.to_double();
  const bool sup = p.is_infinite();
  if (f.is_zero()) return analytic(0.0);
  return std::visit(
      Overloaded{
          [&](const IndicatorBall& b) {
            return analytic(sup ? 1.0 : std::pow(unit_ball_volume(b.dim) * std::pow(b.radius, b.dim), 1.0 / s));
          },
          [&](const MollifiedDelta& m) {
            const double v = unit_ball_volume(m.dim) * std::pow(m.width, m.dim);
            return analytic(sup ? 1.0 / v : std::pow(v, 1.0 / s - 1.0));
          },
          [&](const PowerLog& g) {
            if (sup) throw DivergentNormError("power-log function is unbounded");
            RadialProfile prof = power_log_profile(g.dim, 0, g.p, g.epsilon, s);
            return power_norm(prof.integral(kInf), power_log_prefactor(g.dim, 0), s, "power-log function");
          },
          [&](const SplitPowerLog& g) {
            if (sup) throw DivergentNormError("split power-log function is unbounded");
            const int w = g.dim - g.lead;
            RadialProfile prof = power_log_profile(w, g.lead, g.p, g.epsilon, s);
            return power_norm(prof.integral(kInf), power_log_prefactor(w, g.lead), s, "split power-log function");
          },
          [&](const Constant& c) {
            if (sup) return analytic(std::abs(c.value));
            throw DivergentNormError("nonzero constant has infinite L^p norm for finite p");
          },
          [&](const Gaussian& g) {
            if (sup) return analytic(1.0);
            return analytic(std::pow(2.0 * std::numbers::pi * g.scale * g.scale / s, 0.5 * g.dim / s));
          },
          [&](const Decay& d) {
            if (sup) return analytic(1.0);
            if (d.alpha * s <= d.dim) throw DivergentNormError("decay exponent too small for this L^p norm");
            const double area = d.dim * unit_ball_volume(d.dim);
            return analytic(std::pow(area * std::beta(static_cast<double>(d.dim), d.alpha * s - d.dim), 1.0 / s));
          },
          [&](const Sum&) { return numeric_norm(f, s, quad); },
          [&](const Dilated& d) {
            NormEstimate e = lp_norm(d.inner, p, quad);
            const double factor = sup ? 1.0 : std::pow(d.a, d.inner.dim() / s);
            e.value *= factor;
            e.abs_error *= factor;
            return e;
          },
          [&](const Translated& t) { return lp_norm(t.inner, p, quad); },
          [&](const LinearMap& l) {
            NormEstimate e = lp_norm(l.inner, p, quad);
            const double factor = sup ? 1.0 : std::pow(l.abs_det, -1.0 / s);
            e.value *= factor;
            e.abs_error *= factor;
            return e;
          },
      },
      f.node().value);
}

NormEstimate lp_norm_outside(const TestFunction& f, const Exponent& p, double r0) {
  require(!p.is_infinite(), "lp_norm_outside needs a finite exponent");
  require(r0 > 0 && r0 < 0.5, "cutoff radius must lie in (0, 1/2)");
  const double s = p.to_double();
  const double upper = std::log(1.0 / r0);
  if (const auto* g = std::get_if<PowerLog>(&f.node().value)) {
    RadialProfile prof = power_log_profile(g->dim, 0, g->p, g->epsilon, s);
    return power_norm(prof.integral(upper), power_log_prefactor(g->dim, 0), s, "power-log function");
  }
  if (const auto* g = std::get_if<SplitPowerLog>(&f.node().value)) {
    const int w = g->dim - g->lead;
    RadialProfile prof = power_log_profile(w, g->lead, g->p, g->epsilon, s);
    return power_norm(prof.integral(upper), power_log_prefactor(w, g->lead), s, "split power-log function");
  }
  throw std::invalid_argument("lp_norm_outside applies to power-log functions only");
}

}  // namespace bilinfrac
