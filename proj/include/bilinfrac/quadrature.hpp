#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bilinfrac {

/// Axis-aligned box [lo, hi].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  /// True when some side has non-positive length.
  bool degenerate() const;
  bool contains(const std::vector<double>& point) const;

  static Box cube(int dim, double half_width);
};

std::optional<Box> intersect(const Box& a, const Box& b);
Box hull(const Box& a, const Box& b);

/// Integrand over R^d; receives a pointer to d coordinates.
using Integrand = std::function<double(const double*)>;

enum class Scheme { AdaptiveDyadic, QuasiRandom };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

/// Numeric integration settings. Zero in max_depth or max_evaluations selects a default for the dimension.
struct QuadratureSpec {
  Scheme scheme = Scheme::AdaptiveDyadic;
  int max_depth = 0;
  std::size_t samples = 1 << 14;
  double truncation_radius = 8.0;
  double target_rel_err = 1e-4;
  std::uint64_t seed = 0;
  std::size_t max_evaluations = 0;
  int qmc_shifts = 8;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  int depth_for(int dim) const;
  std::size_t evaluations_for(int dim) const;
};

struct CubatureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct CubatureControl {
  double rel_tol = 1e-4;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 100000;
};

/// Splits every box at the interior breakpoints of each axis.
std::vector<Box> split_at(std::vector<Box> boxes, const std::vector<std::vector<double>>& breakpoints);

/// Globally adaptive cubature: the region with the largest error estimate is bisected until the total error
/// meets the tolerance or the evaluation budget runs out. Uses 15-point Gauss-Kronrod panels for d = 1 and
/// the degree 7/5 Genz-Malik rule for d >= 2, splitting along the axis with the largest fourth difference.
CubatureResult adaptive_cubature(const Integrand& f, const std::vector<Box>& boxes, const CubatureControl& control);

/// Detail of a dyadic ring decomposition around a singular point.
struct RingReport {
  std::vector<double> ring_values;
  double tail = 0.0;
  double tail_error = 0.0;
  double empirical_ratio = 0.0;
};

/// Integral over `box` of an integrand singular at `s`. The box is cut into `rings` dyadic cubic shells
/// (in the max norm) around s; the untouched core is extrapolated geometrically from the last two shells,
/// falling back to `ring_ratio` (the ratio expected from the singularity's homogeneity) when the empirical
/// ratio is not in [0, 1). Cells of all shells are refined together by adaptive_cubature.
CubatureResult singular_cubature(const Integrand& f, const Box& box, const std::vector<double>& s, double ring_ratio,
                                 int rings, const std::vector<std::vector<double>>& breakpoints,
                                 const CubatureControl& control, RingReport* report = nullptr);

/// Randomized quasi-Monte Carlo: Halton points with independent Cranley-Patterson shifts. When `s` lies in the
/// box, each orthant cell with corner s is sampled through u -> |u|_inf^(gamma - 1) u, whose Jacobian cancels a
/// singularity of order d (1 - 1/gamma). The error is three standard errors over the shifts.
CubatureResult qmc_cubature(const Integrand& f, const Box& box, const std::optional<std::vector<double>>& s,
                            double gamma, std::size_t samples, int shifts, std::uint64_t seed);

/// Radical inverse of `index` in base `base`.
double radical_inverse(std::uint64_t index, unsigned base);

}  // namespace bilinfrac
