#include "bilinfrac/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace bilinfrac {

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

bool Box::degenerate() const {
  for (int i = 0; i < dim(); ++i)
    if (!(hi[i] > lo[i])) return true;
  return false;
}

bool Box::contains(const std::vector<double>& point) const {
  for (int i = 0; i < dim(); ++i)
    if (point[i] < lo[i] || point[i] > hi[i]) return false;
  return true;
}

Box Box::cube(int dim, double half_width) {
  return Box{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)};
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  Box out = a;
  for (int i = 0; i < a.dim(); ++i) {
    out.lo[i] = std::max(a.lo[i], b.lo[i]);
    out.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (!(out.hi[i] > out.lo[i])) return std::nullopt;
  }
  return out;
}

Box hull(const Box& a, const Box& b) {
  Box out = a;
  for (int i = 0; i < a.dim(); ++i) {
    out.lo[i] = std::min(a.lo[i], b.lo[i]);
    out.hi[i] = std::max(a.hi[i], b.hi[i]);
  }
  return out;
}

std::string to_string(Scheme s) { return s == Scheme::AdaptiveDyadic ? "adaptive-dyadic" : "quasi-random"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "adaptive-dyadic" || s == "adaptive") return Scheme::AdaptiveDyadic;
  if (s == "quasi-random" || s == "qmc") return Scheme::QuasiRandom;
  throw std::invalid_argument("unknown quadrature scheme '" + s + "'");
}

void QuadratureSpec::validate() const {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 1 (0 selects the default)");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(truncation_radius > 0)) throw std::invalid_argument("truncation_radius must be positive");
  if (!(target_rel_err > 0)) throw std::invalid_argument("target_rel_err must be positive");
  if (qmc_shifts < 2) throw std::invalid_argument("qmc_shifts must be >= 2");
}

int QuadratureSpec::depth_for(int dim) const {
  if (max_depth > 0) return max_depth;
  switch (dim) {
    case 1: return 30;
    case 2: return 14;
    case 3: return 11;
    default: return 9;
  }
}

std::size_t QuadratureSpec::evaluations_for(int dim) const {
  if (max_evaluations > 0) return max_evaluations;
  switch (dim) {
    case 1: return 20000;
    case 2: return 60000;
    case 3: return 200000;
    default: return 400000;
  }
}

std::vector<Box> split_at(std::vector<Box> boxes, const std::vector<std::vector<double>>& breakpoints) {
  for (std::size_t axis = 0; axis < breakpoints.size(); ++axis) {
    std::vector<Box> next;
    for (auto& b : boxes) {
      std::vector<double> cuts;
      for (double c : breakpoints[axis])
        if (c > b.lo[axis] && c < b.hi[axis]) cuts.push_back(c);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      double lo = b.lo[axis];
      for (double c : cuts) {
        Box piece = b;
        piece.lo[axis] = lo;
        piece.hi[axis] = c;
        next.push_back(std::move(piece));
        lo = c;
      }
      b.lo[axis] = lo;
      next.push_back(std::move(b));
    }
    boxes = std::move(next);
  }
  return boxes;
}

namespace {

struct Region {
  Box box;
  double value = 0.0;
  double error = 0.0;
  int split_axis = 0;
  int tag = 0;
};

struct ByError {
  bool operator()(const Region& a, const Region& b) const { return a.error < b.error; }
};

constexpr int kMaxDim = 16;

// Degree 7 rule with embedded degree 5 rule on [c - h, c + h].
class GenzMalik {
 public:
  explicit GenzMalik(int d) : d_(d) {
    if (d < 2 || d > kMaxDim) throw std::invalid_argument("Genz-Malik rule needs 2 <= d <= 16");
    const double dd = d;
    w1_ = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    w3_ = (1820.0 - 400.0 * dd) / 19683.0;
    w5_ = 6859.0 / 19683.0 / std::ldexp(1.0, d);
    e1_ = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    e3_ = (265.0 - 100.0 * dd) / 1458.0;
  }

  std::size_t points() const { return (std::size_t{1} << d_) + 2 * d_ * d_ + 2 * d_ + 1; }

  void apply(const Integrand& f, Region& r) const {
    const int d = d_;
    std::array<double, kMaxDim> c{}, h{}, x{};
    double vol = 1.0;
    for (int i = 0; i < d; ++i) {
      c[i] = 0.5 * (r.box.lo[i] + r.box.hi[i]);
      h[i] = 0.5 * (r.box.hi[i] - r.box.lo[i]);
      vol *= 2.0 * h[i];
    }
    x = c;
    const double f0 = f(x.data());
    double sum2 = 0, sum3 = 0, sum4 = 0, sum5 = 0;
    double best = -1.0;
    int axis = 0;
    for (int i = 0; i < d; ++i) {
      x[i] = c[i] + kL2 * h[i];
      double p2 = f(x.data());
      x[i] = c[i] - kL2 * h[i];
      double m2 = f(x.data());
      x[i] = c[i] + kL4 * h[i];
      double p3 = f(x.data());
      x[i] = c[i] - kL4 * h[i];
      double m3 = f(x.data());
      x[i] = c[i];
      sum2 += p2 + m2;
      sum3 += p3 + m3;
      double diff = std::abs(p2 + m2 - 2 * f0 - kRatio * (p3 + m3 - 2 * f0));
      // Ties go to the widest axis so that flat integrands are still bisected sensibly.
      if (diff > best * (1 + 1e-12) || (diff >= best * (1 - 1e-12) && h[i] > h[axis])) {
        best = diff;
        axis = i;
      }
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int si = -1; si <= 1; si += 2)
          for (int sj = -1; sj <= 1; sj += 2) {
            x[i] = c[i] + si * kL4 * h[i];
            x[j] = c[j] + sj * kL4 * h[j];
            sum4 += f(x.data());
            x[i] = c[i];
            x[j] = c[j];
          }
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      for (int i = 0; i < d; ++i) x[i] = c[i] + ((mask >> i) & 1u ? kL5 : -kL5) * h[i];
      sum5 += f(x.data());
    }
    double r7 = vol * (w1_ * f0 + kW2 * sum2 + w3_ * sum3 + kW4 * sum4 + w5_ * sum5);
    double r5 = vol * (e1_ * f0 + kE2 * sum2 + e3_ * sum3 + kE4 * sum4);
    r.value = r7;
    r.error = std::abs(r7 - r5);
    r.split_axis = axis;
  }

 private:
  static constexpr double kL2 = 0.35856858280031809199;  // sqrt(9/70)
  static constexpr double kL4 = 0.94868329805051379960;  // sqrt(9/10)
  static constexpr double kL5 = 0.68824720161168529772;  // sqrt(9/19)
  static constexpr double kRatio = 1.0 / 7.0;            // (kL2 / kL4)^2
  static constexpr double kW2 = 980.0 / 6561.0;
  static constexpr double kW4 = 200.0 / 19683.0;
  static constexpr double kE2 = 245.0 / 486.0;
  static constexpr double kE4 = 25.0 / 729.0;
  int d_;
  double w1_, w3_, w5_, e1_, e3_;
};

void apply_kronrod(const Integrand& f, Region& r) {
  auto g = [&f](double t) { return f(&t); };
  double err = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, r.box.lo[0], r.box.hi[0], 0, 0.0, &err);
  r.error = err;
  r.split_axis = 0;
}

struct AdaptiveOutcome {
  CubatureResult result;
  std::vector<Region> regions;
};

// Region errors are scaled by weights[tag] (1 when absent) before ranking and summing.
AdaptiveOutcome run_adaptive(const Integrand& f, std::vector<Region> seeds, const CubatureControl& control,
                             const std::vector<double>& weights = {}) {
  AdaptiveOutcome out;
  if (seeds.empty()) return out;
  const int d = seeds.front().box.dim();
  std::optional<GenzMalik> gm;
  if (d >= 2) gm.emplace(d);
  const std::size_t per_rule = d == 1 ? 15 : gm->points();
  auto apply = [&](Region& r) {
    if (d == 1)
      apply_kronrod(f, r);
    else
      gm->apply(f, r);
    if (static_cast<std::size_t>(r.tag) < weights.size()) r.error *= weights[r.tag];
    out.result.evaluations += per_rule;
  };

  std::priority_queue<Region, std::vector<Region>, ByError> heap;
  double total = 0.0, error = 0.0;
  for (auto& r : seeds) {
    apply(r);
    total += r.value;
    error += r.error;
    heap.push(std::move(r));
  }

  auto satisfied = [&]() { return error <= std::max(control.abs_tol, control.rel_tol * std::abs(total)); };
  while (!heap.empty() && !satisfied()) {
    if (out.result.evaluations + 2 * per_rule > control.max_evaluations) break;
    Region top = heap.top();
    const int axis = top.split_axis;
    const double mid = 0.5 * (top.box.lo[axis] + top.box.hi[axis]);
    if (!(mid > top.box.lo[axis] && mid < top.box.hi[axis])) {
      // Cannot be split further in floating point; retire it with its error.
      heap.pop();
      out.regions.push_back(std::move(top));
      continue;
    }
    heap.pop();
    Region left = top, right = top;
    left.box.hi[axis] = mid;
    right.box.lo[axis] = mid;
    apply(left);
    apply(right);
    total += left.value + right.value - top.value;
    error += left.error + right.error - top.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  while (!heap.empty()) {
    out.regions.push_back(heap.top());
    heap.pop();
  }
  // Recompute the sums from scratch to avoid drift from the running updates.
  std::sort(out.regions.begin(), out.regions.end(), [](const Region& a, const Region& b) {
    if (a.tag != b.tag) return a.tag < b.tag;
    return a.box.lo < b.box.lo;
  });
  out.result.value = 0.0;
  out.result.abs_error = 0.0;
  for (const auto& r : out.regions) {
    out.result.value += r.value;
    out.result.abs_error += r.error;
  }
  out.result.converged =
      out.result.abs_error <= std::max(control.abs_tol, control.rel_tol * std::abs(out.result.value));
  return out;
}

}  // namespace

CubatureResult adaptive_cubature(const Integrand& f, const std::vector<Box>& boxes, const CubatureControl& control) {
  std::vector<Region> seeds;
  for (const auto& b : boxes)
    if (!b.degenerate()) seeds.push_back(Region{b});
  return run_adaptive(f, std::move(seeds), control).result;
}

CubatureResult singular_cubature(const Integrand& f, const Box& box, const std::vector<double>& s, double ring_ratio,
                                 int rings, const std::vector<std::vector<double>>& breakpoints,
                                 const CubatureControl& control, RingReport* report) {
  const int d = box.dim();
  if (rings < 1) throw std::invalid_argument("at least one ring is required");
  if (box.degenerate()) return {};
  if (!box.contains(s)) return adaptive_cubature(f, split_at({box}, breakpoints), control);

  double reach = 0.0;
  for (int i = 0; i < d; ++i) reach = std::max({reach, s[i] - box.lo[i], box.hi[i] - s[i]});

  std::vector<Region> seeds;
  std::size_t shells = 1;
  for (int i = 0; i < d; ++i) shells *= 3;
  for (int k = 0; k < rings; ++k) {
    const double outer = std::ldexp(reach, -k);
    const double inner = 0.5 * outer;
    for (std::size_t code = 0; code < shells; ++code) {
      Box cell{std::vector<double>(d), std::vector<double>(d)};
      std::size_t rest = code;
      bool centre = true;
      for (int i = 0; i < d; ++i) {
        int digit = static_cast<int>(rest % 3);
        rest /= 3;
        if (digit != 1) centre = false;
        cell.lo[i] = digit == 0 ? s[i] - outer : digit == 1 ? s[i] - inner : s[i] + inner;
        cell.hi[i] = digit == 0 ? s[i] - inner : digit == 1 ? s[i] + inner : s[i] + outer;
      }
      if (centre) continue;
      auto clipped = intersect(cell, box);
      if (!clipped) continue;
      for (auto& piece : split_at({*clipped}, breakpoints)) seeds.push_back(Region{std::move(piece), 0, 0, 0, k});
    }
  }

  // Sensitivity of the extrapolated core to the last two shells, so their errors count as propagated.
  std::vector<double> weights(rings, 1.0);
  {
    const double rho = std::min(ring_ratio, 0.9);
    const double g = 1.0 / ((1.0 - rho) * (1.0 - rho));
    weights[rings - 1] += rho / (1.0 - rho) + rho * g;
    if (rings >= 2) weights[rings - 2] += rho * rho * g;
  }
  // Half of the tolerance is left for the core extrapolation.
  CubatureControl shells_control = control;
  shells_control.rel_tol *= 0.5;
  shells_control.abs_tol *= 0.5;
  AdaptiveOutcome outcome = run_adaptive(f, std::move(seeds), shells_control, weights);
  std::vector<double> ring_values(rings, 0.0);
  for (const auto& r : outcome.regions) ring_values[r.tag] += r.value;

  const double last = ring_values.back();
  const double before = rings >= 2 ? ring_values[rings - 2] : 0.0;
  double empirical = before != 0.0 ? last / before : ring_ratio;
  double tail = 0.0, tail_error = 0.0;
  if (last != 0.0) {
    double rho = (std::isfinite(empirical) && empirical >= 0.0 && empirical < 1.0) ? empirical : ring_ratio;
    rho = std::min(rho, 0.9);
    const double expected = std::min(ring_ratio, 0.9);
    tail = last * rho / (1.0 - rho);
    tail_error = std::abs(tail - last * expected / (1.0 - expected));
  }

  CubatureResult result = outcome.result;
  result.value += tail;
  result.abs_error += tail_error;
  result.converged = result.abs_error <= std::max(control.abs_tol, control.rel_tol * std::abs(result.value));
  if (report) *report = RingReport{std::move(ring_values), tail, tail_error, empirical};
  return result;
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, scale = inv, value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return value;
}

CubatureResult qmc_cubature(const Integrand& f, const Box& box, const std::optional<std::vector<double>>& s,
                            double gamma, std::size_t samples, int shifts, std::uint64_t seed) {
  static constexpr std::array<unsigned, kMaxDim> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  const int d = box.dim();
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("quasi-random scheme supports 1 <= d <= 16");
  if (shifts < 2) throw std::invalid_argument("at least two random shifts are required");
  if (box.degenerate()) return {};

  struct Cell {
    std::vector<double> origin;
    std::vector<double> extent;  // signed
    bool radial;
  };
  std::vector<Cell> cells;
  if (s && box.contains(*s)) {
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      Cell c{*s, std::vector<double>(d), true};
      bool empty = false;
      for (int i = 0; i < d; ++i) {
        c.extent[i] = (mask >> i) & 1u ? box.hi[i] - (*s)[i] : box.lo[i] - (*s)[i];
        if (c.extent[i] == 0.0) empty = true;
      }
      if (!empty) cells.push_back(std::move(c));
    }
  } else {
    Cell c{box.lo, std::vector<double>(d), false};
    for (int i = 0; i < d; ++i) c.extent[i] = box.hi[i] - box.lo[i];
    cells.push_back(std::move(c));
  }

  const std::size_t per_cell = std::max<std::size_t>(1, samples / cells.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> estimates(shifts, 0.0);
  std::array<double, kMaxDim> u{}, y{};
  std::size_t evaluations = 0;
  for (int r = 0; r < shifts; ++r) {
    std::array<double, kMaxDim> shift{};
    for (int i = 0; i < d; ++i) shift[i] = unit(rng);
    double total = 0.0;
    for (const auto& cell : cells) {
      double volume = 1.0;
      for (int i = 0; i < d; ++i) volume *= std::abs(cell.extent[i]);
      double sum = 0.0;
      for (std::size_t k = 1; k <= per_cell; ++k) {
        double rho = 0.0;
        for (int i = 0; i < d; ++i) {
          double v = radical_inverse(k, kPrimes[i]) + shift[i];
          u[i] = v - std::floor(v);
          rho = std::max(rho, u[i]);
        }
        double jac = 1.0;
        if (cell.radial) {
          if (rho == 0.0) continue;
          const double stretch = std::pow(rho, gamma - 1.0);
          for (int i = 0; i < d; ++i) u[i] *= stretch;
          jac = gamma * std::pow(stretch, d);
        }
        for (int i = 0; i < d; ++i) y[i] = cell.origin[i] + cell.extent[i] * u[i];
        sum += f(y.data()) * jac;
        ++evaluations;
      }
      total += volume * sum / static_cast<double>(per_cell);
    }
    estimates[r] = total;
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= shifts;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= (shifts - 1);
  CubatureResult out;
  out.value = mean;
  out.abs_error = 3.0 * std::sqrt(var / shifts);
  out.evaluations = evaluations;
  out.converged = true;
  return out;
}

}  // namespace bilinfrac
