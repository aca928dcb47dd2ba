#include "bilinfrac/operator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace bilinfrac {

namespace {

std::vector<double> apply(const RationalMatrix& d, const std::vector<double>& x) {
  std::vector<double> out(d.rows(), 0.0);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) out[i] += d(i, j).get_d() * x[j];
  return out;
}

// Integration box: the truncation cube cut down to the supports, and whether a support was cut.
std::pair<Box, bool> integration_box(const std::vector<const TestFunction*>& fs, double radius) {
  Box box{{}, {}};
  bool truncated = false;
  for (const TestFunction* f : fs) {
    Box cube = Box::cube(f->dim(), radius);
    Box part = cube;
    if (auto sup = f->support()) {
      if (auto cut = intersect(cube, *sup)) {
        part = *cut;
        truncated = truncated || cut->lo != sup->lo || cut->hi != sup->hi;
      } else {
        part = Box{cube.lo, cube.lo};
        truncated = true;
      }
    } else {
      truncated = true;
    }
    box.lo.insert(box.lo.end(), part.lo.begin(), part.lo.end());
    box.hi.insert(box.hi.end(), part.hi.begin(), part.hi.end());
  }
  return {box, truncated};
}

std::vector<std::vector<double>> joined_breakpoints(const std::vector<const TestFunction*>& fs) {
  std::vector<std::vector<double>> out;
  for (const TestFunction* f : fs) {
    auto b = f->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

NormEstimate integrate(const Integrand& g, const std::vector<const TestFunction*>& fs, const std::vector<double>& s,
                       double lambda_at_s, const QuadratureSpec& quad) {
  quad.validate();
  for (const TestFunction* f : fs)
    if (f->is_zero()) return NormEstimate{0.0, 0.0, NormMethod::Analytic};
  auto [box, truncated] = integration_box(fs, quad.truncation_radius);
  const int d = box.dim();
  NormEstimate e;
  e.method = NormMethod::Quadrature;
  e.truncated_support = truncated;
  if (box.degenerate()) return e;
  CubatureResult r;
  if (quad.scheme == Scheme::AdaptiveDyadic) {
    CubatureControl control{quad.target_rel_err, 0.0, quad.evaluations_for(d)};
    r = singular_cubature(g, box, s, std::exp2(lambda_at_s - d), quad.depth_for(d), joined_breakpoints(fs), control);
  } else {
    const double gamma = d / (d - std::max(0.0, lambda_at_s));
    r = qmc_cubature(g, box, s, gamma, quad.samples, quad.qmc_shifts, quad.seed);
  }
  e.value = r.value;
  e.abs_error = r.abs_error;
  e.tolerance_not_met = !r.converged;
  return e;
}

void require_positive_order(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 64u));
  if (workers == 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&]() {
      for (std::size_t k = next++; k < count && !failed; k = next++) {
        try {
          body(k);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void GridSpec::validate() const {
  if (!(half_width > 0)) throw std::invalid_argument("grid half-width must be positive");
  if (points_per_axis < 3 || points_per_axis % 2 == 0)
    throw std::invalid_argument("points per axis must be odd and at least 3");
}

std::size_t GridSpec::size(int m) const {
  std::size_t n = 1;
  for (int i = 0; i < m; ++i) n *= static_cast<std::size_t>(points_per_axis);
  return n;
}

std::vector<double> GridSpec::point(std::size_t k, int m) const {
  std::vector<double> x(m);
  const double h = spacing();
  const int mid = points_per_axis / 2;
  for (int i = m - 1; i >= 0; --i) {
    const int idx = static_cast<int>(k % points_per_axis);
    k /= points_per_axis;
    // Symmetric construction keeps the centre point exactly zero.
    x[i] = (idx - mid) * h;
  }
  return x;
}

NormEstimate eval_bilinear(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                           const std::vector<double>& x, const QuadratureSpec& quad) {
  check_dimensions(cfg);
  if (f1.dim() != cfg.n1 || f2.dim() != cfg.n2)
    throw std::invalid_argument("input functions must live on R^n1 and R^n2");
  if (static_cast<int>(x.size()) != cfg.m) throw std::invalid_argument("x must lie in R^m");
  const double lambda = cfg.lambda.value.get_d();
  const int d = cfg.n1 + cfg.n2;
  require_positive_order(lambda);
  if (cfg.lambda.value >= d)
    throw NonIntegrableError("lambda = " + to_string(cfg.lambda) + " >= n1 + n2; the kernel is not locally integrable");

  std::vector<double> s = apply(cfg.D1, x);
  std::vector<double> s2 = apply(cfg.D2, x);
  s.insert(s.end(), s2.begin(), s2.end());
  const int n1 = cfg.n1;
  Integrand g = [&f1, &f2, &s, n1, d, lambda](const double* y) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n1; ++i) a += (s[i] - y[i]) * (s[i] - y[i]);
    for (int i = n1; i < d; ++i) b += (s[i] - y[i]) * (s[i] - y[i]);
    const double k = std::sqrt(a) + std::sqrt(b);
    if (k == 0.0) return 0.0;
    const double v = f1(y) * f2(y + n1);
    return v == 0.0 ? 0.0 : v * std::pow(k, -lambda);
  };
  return integrate(g, {&f1, &f2}, s, lambda, quad);
}

NormEstimate eval_linear(int n, int m, const RationalMatrix& d, const Order& lambda, const TestFunction& f,
                         const std::vector<double>& x, const QuadratureSpec& quad) {
  if (d.rows() != static_cast<std::size_t>(n) || d.cols() != static_cast<std::size_t>(m) || f.dim() != n ||
      static_cast<int>(x.size()) != m)
    throw std::invalid_argument("dimension mismatch in the linear operator");
  const double lam = lambda.value.get_d();
  require_positive_order(lam);
  if (lambda.value >= n) throw NonIntegrableError("lambda >= n; the kernel is not locally integrable");
  std::vector<double> s = apply(d, x);
  Integrand g = [&f, &s, n, lam](const double* y) {
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += (s[i] - y[i]) * (s[i] - y[i]);
    if (a == 0.0) return 0.0;
    const double v = f(y);
    return v == 0.0 ? 0.0 : v * std::pow(a, -0.5 * lam);
  };
  return integrate(g, {&f}, s, lam, quad);
}

NormEstimate eval_radial(int n, int m, const Order& lambda, const TestFunction& f, const std::vector<double>& x,
                         const QuadratureSpec& quad) {
  if (f.dim() != n || static_cast<int>(x.size()) != m) throw std::invalid_argument("dimension mismatch in the radial operator");
  const double lam = lambda.value.get_d();
  require_positive_order(lam);
  double xs = 0.0;
  for (double v : x) xs += v * v;
  const double rx = std::sqrt(xs);
  if (rx == 0.0 && lambda.value >= n)
    throw NonIntegrableError("x = 0 with lambda >= n; the kernel is not locally integrable");
  Integrand g = [&f, n, lam, rx](const double* y) {
    const double k = rx + std::sqrt(std::inner_product(y, y + n, y, 0.0));
    if (k == 0.0) return 0.0;
    const double v = f(y);
    return v == 0.0 ? 0.0 : v * std::pow(k, -lam);
  };
  // Away from x = 0 the kernel is bounded near y = 0, so shells shrink like their volume.
  return integrate(g, {&f}, std::vector<double>(n, 0.0), rx == 0.0 ? lam : 0.0, quad);
}

NormEstimate lq_norm_of_samples(const std::vector<double>& values, const std::vector<double>& errors,
                                const Exponent& q, double cell_measure) {
  NormEstimate e;
  e.method = NormMethod::Quadrature;
  if (values.empty()) return e;
  if (q.is_infinite()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
      if (std::abs(values[k]) > std::abs(values[best])) best = k;
    e.value = std::abs(values[best]);
    e.abs_error = errors.empty() ? 0.0 : errors[best];
    return e;
  }
  const double qd = q.to_double();
  double sum = 0.0, slope = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = std::abs(values[k]);
    if (v == 0.0) continue;
    sum += std::pow(v, qd) * cell_measure;
    if (!errors.empty()) slope += std::pow(v, qd - 1.0) * errors[k] * cell_measure;
  }
  if (sum == 0.0) return e;
  e.value = std::pow(sum, 1.0 / qd);
  e.abs_error = std::pow(sum, 1.0 / qd - 1.0) * slope;
  return e;
}

std::vector<NormEstimate> eval_on_grid(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                                       const GridSpec& grid, const QuadratureSpec& quad) {
  grid.validate();
  const std::size_t count = grid.size(cfg.m);
  std::vector<NormEstimate> out(count);
  parallel_for(count, [&](std::size_t k) {
    QuadratureSpec local = quad;
    local.seed = quad.seed ^ static_cast<std::uint64_t>(k);
    out[k] = eval_bilinear(cfg, f1, f2, grid.point(k, cfg.m), local);
  });
  return out;
}

NormEstimate lq_norm_on_grid(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                             const GridSpec& grid, const QuadratureSpec& quad) {
  std::vector<NormEstimate> pts = eval_on_grid(cfg, f1, f2, grid, quad);
  std::vector<double> values(pts.size()), errors(pts.size());
  bool truncated = false, loose = false;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    values[k] = pts[k].value;
    errors[k] = pts[k].abs_error;
    truncated = truncated || pts[k].truncated_support;
    loose = loose || pts[k].tolerance_not_met;
  }
  NormEstimate e = lq_norm_of_samples(values, errors, cfg.q, std::pow(grid.spacing(), cfg.m));
  e.truncated_support = truncated;
  e.tolerance_not_met = loose;
  return e;
}

Rational predicted_dilation_slope(const OperatorConfig& cfg) {
  Rational s = cfg.n1 + cfg.n2 - cfg.lambda.value + cfg.m * cfg.q.reciprocal() - cfg.n1 * cfg.p1.reciprocal() -
               cfg.n2 * cfg.p2.reciprocal();
  s.canonicalize();
  return s;
}

ProbeReport dilation_slope(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                           const std::vector<double>& dilations, const GridSpec& grid, const QuadratureSpec& quad) {
  if (dilations.size() < 3) throw std::invalid_argument("a dilation probe needs at least three dilations");
  if (cfg.q.is_infinite()) throw std::invalid_argument("a dilation probe needs q < inf");
  ProbeReport rep;
  rep.predicted_slope = predicted_dilation_slope(cfg).get_d();
  for (double a : dilations) {
    if (!(a > 0)) throw std::invalid_argument("dilations must be positive");
    GridSpec g = grid;
    g.half_width *= a;
    QuadratureSpec qs = quad;
    qs.truncation_radius *= a;
    TestFunction g1 = dilate(f1, a), g2 = dilate(f2, a);
    NormEstimate top = lq_norm_on_grid(cfg, g1, g2, g, qs);
    NormEstimate b1 = lp_norm(g1, cfg.p1, qs), b2 = lp_norm(g2, cfg.p2, qs);
    const double bottom = b1.value * b2.value;
    const double ratio = top.value / bottom;
    const double rel = (top.value > 0 ? top.abs_error / top.value : 0.0) + (b1.value > 0 ? b1.abs_error / b1.value : 0.0) +
                       (b2.value > 0 ? b2.abs_error / b2.value : 0.0);
    rep.dilations.push_back(a);
    rep.ratios.push_back(ratio);
    rep.ratio_errors.push_back(ratio * rel);
    rep.warning = rep.warning || top.tolerance_not_met || !(ratio > 0);
  }
  const std::size_t n = rep.dilations.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(rep.dilations[k]);
    my += std::log(rep.ratios[k]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(rep.dilations[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(rep.ratios[k]) - my);
  }
  if (sxx == 0) throw std::invalid_argument("dilations must not all be equal");
  rep.slope = sxy / sxx;
  double ssr = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double fit = my + rep.slope * (std::log(rep.dilations[k]) - mx);
    ssr += std::pow(std::log(rep.ratios[k]) - fit, 2);
  }
  rep.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return rep;
}

CovarianceReport translation_covariance_defect(const OperatorConfig& cfg, const TestFunction& f1,
                                               const TestFunction& f2, const std::vector<Rational>& z,
                                               const GridSpec& grid, const QuadratureSpec& quad, ShiftMode mode) {
  check_dimensions(cfg);
  if (static_cast<int>(z.size()) != cfg.m) throw std::invalid_argument("shift must lie in R^m");
  RationalMatrix zc(z.size(), 1);
  for (std::size_t i = 0; i < z.size(); ++i) zc(i, 0) = z[i];
  RationalMatrix s1 = cfg.D1 * zc, s2 = cfg.D2 * zc;
  if (mode == ShiftMode::SecondOnly && !s1.is_zero())
    throw PreconditionError("shifting f2 alone is covariant only when D1 z = 0");
  if (mode == ShiftMode::FirstOnly && !s2.is_zero())
    throw PreconditionError("shifting f1 alone is covariant only when D2 z = 0");
  auto column = [](const RationalMatrix& c) {
    std::vector<double> v(c.rows());
    for (std::size_t i = 0; i < c.rows(); ++i) v[i] = c(i, 0).get_d();
    return v;
  };
  TestFunction g1 = mode == ShiftMode::SecondOnly ? f1 : translate(f1, column(s1));
  TestFunction g2 = mode == ShiftMode::FirstOnly ? f2 : translate(f2, column(s2));
  std::vector<double> zd(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zd[i] = z[i].get_d();

  grid.validate();
  const std::size_t count = grid.size(cfg.m);
  std::vector<double> defect(count), error(count);
  parallel_for(count, [&](std::size_t k) {
    QuadratureSpec local = quad;
    local.seed = quad.seed ^ static_cast<std::uint64_t>(k);
    std::vector<double> x = grid.point(k, cfg.m), xs = x;
    for (int i = 0; i < cfg.m; ++i) xs[i] -= zd[i];
    NormEstimate a = eval_bilinear(cfg, g1, g2, x, local);
    NormEstimate b = eval_bilinear(cfg, f1, f2, xs, local);
    defect[k] = std::abs(a.value - b.value);
    error[k] = a.abs_error + b.abs_error;
  });
  CovarianceReport rep;
  for (std::size_t k = 0; k < count; ++k) {
    rep.defect = std::max(rep.defect, defect[k]);
    rep.combined_error = std::max(rep.combined_error, error[k]);
  }
  return rep;
}

BlowupReport blowup_probe(const OperatorConfig& cfg, const WitnessFamily& family, const std::vector<double>& values,
                          const GridSpec& grid, const QuadratureSpec& quad) {
  BlowupReport rep;
  for (double t : values) {
    Witness w = family.build(t);
    if (!w.f2) throw std::invalid_argument("bilinear probe needs two input functions");
    NormEstimate n1 = lp_norm(w.f1, cfg.p1, quad), n2 = lp_norm(*w.f2, cfg.p2, quad);
    double ratio = 0.0, rel = 0.0;
    bool loose = false;
    if (w.h) {
      if (cfg.q.reciprocal() > 1) throw std::invalid_argument("a pairing probe needs q >= 1");
      std::vector<NormEstimate> pts = eval_on_grid(cfg, w.f1, *w.f2, grid, quad);
      const double cell = std::pow(grid.spacing(), cfg.m);
      double pairing = 0.0, err = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double hv = w.h->evaluate(grid.point(k, cfg.m));
        pairing += pts[k].value * hv * cell;
        err += pts[k].abs_error * std::abs(hv) * cell;
        loose = loose || pts[k].tolerance_not_met;
      }
      NormEstimate nh = lp_norm(*w.h, conjugate(cfg.q), quad);
      ratio = std::abs(pairing) / (n1.value * n2.value * nh.value);
      rel = pairing != 0 ? err / std::abs(pairing) : 0.0;
    } else {
      NormEstimate top = lq_norm_on_grid(cfg, w.f1, *w.f2, grid, quad);
      ratio = top.value / (n1.value * n2.value);
      rel = top.value > 0 ? top.abs_error / top.value : 0.0;
      loose = top.tolerance_not_met;
    }
    rel += (n1.value > 0 ? n1.abs_error / n1.value : 0.0) + (n2.value > 0 ? n2.abs_error / n2.value : 0.0);
    rep.parameters.push_back(t);
    rep.ratios.push_back(ratio);
    rep.ratio_errors.push_back(ratio * rel);
    rep.warning = rep.warning || loose;
  }
  rep.strictly_increasing = rep.ratios.size() >= 2;
  for (std::size_t k = 1; k < rep.ratios.size(); ++k)
    if (!(rep.ratios[k] > rep.ratios[k - 1])) rep.strictly_increasing = false;
  return rep;
}

}  // namespace bilinfrac
