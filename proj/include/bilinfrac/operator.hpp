#pragma once

#include "bilinfrac/classifier.hpp"
#include "bilinfrac/functions.hpp"
#include "bilinfrac/quadrature.hpp"
#include "bilinfrac/witnesses.hpp"

#include <stdexcept>
#include <vector>

namespace bilinfrac {

class NonIntegrableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Uniform grid of points_per_axis points per axis on [-half_width, half_width]^m.
struct GridSpec {
  double half_width = 4.0;
  int points_per_axis = 65;

  /// Throws std::invalid_argument unless half_width > 0 and points_per_axis is odd and >= 3.
  void validate() const;
  double spacing() const { return 2.0 * half_width / (points_per_axis - 1); }
  std::size_t size(int m) const;
  /// Coordinates of the point with flat index k (first axis varies slowest).
  std::vector<double> point(std::size_t k, int m) const;
};

/// I(f1, f2)(x) = int f1(y1) f2(y2) / (|D1 x - y1| + |D2 x - y2|)^lambda dy1 dy2.
/// Throws NonIntegrableError when lambda >= n1 + n2.
NormEstimate eval_bilinear(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                           const std::vector<double>& x, const QuadratureSpec& quad);

/// int f(y) / |D x - y|^lambda dy over R^n. Throws NonIntegrableError when lambda >= n.
NormEstimate eval_linear(int n, int m, const RationalMatrix& d, const Order& lambda, const TestFunction& f,
                         const std::vector<double>& x, const QuadratureSpec& quad);

/// int f(y) / (|x| + |y|)^lambda dy over R^n. Throws NonIntegrableError at x = 0 when lambda >= n.
NormEstimate eval_radial(int n, int m, const Order& lambda, const TestFunction& f, const std::vector<double>& x,
                         const QuadratureSpec& quad);

/// (sum_k |v_k|^q cell)^(1/q), or max_k |v_k| for q = inf, with first-order error propagation.
NormEstimate lq_norm_of_samples(const std::vector<double>& values, const std::vector<double>& errors,
                                const Exponent& q, double cell_measure);

/// Values of I(f1, f2) at every grid point, computed concurrently with per-point seeds seed ^ k.
std::vector<NormEstimate> eval_on_grid(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                                       const GridSpec& grid, const QuadratureSpec& quad);

/// Rectangle-rule L^q(R^m) (quasi-)norm of I(f1, f2) over the grid, with q = cfg.q.
NormEstimate lq_norm_on_grid(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                             const GridSpec& grid, const QuadratureSpec& quad);

struct ProbeReport {
  std::vector<double> dilations;
  std::vector<double> ratios;
  std::vector<double> ratio_errors;
  double slope = 0.0;
  double slope_stderr = 0.0;
  /// (n1 + n2 - lambda + m/q) - n1/p1 - n2/p2.
  double predicted_slope = 0.0;
  bool warning = false;
};

/// ||I(f1(./a), f2(./a))||_q / (||f1(./a)||_p1 ||f2(./a)||_p2) for each a, with the log-log least-squares slope.
/// The grid window and the truncation box are scaled by a together with the inputs. Needs at least three
/// dilations and q < inf.
ProbeReport dilation_slope(const OperatorConfig& cfg, const TestFunction& f1, const TestFunction& f2,
                           const std::vector<double>& dilations, const GridSpec& grid, const QuadratureSpec& quad);

/// (n1 + n2 - lambda + m/q) - n1/p1 - n2/p2, exactly.
Rational predicted_dilation_slope(const OperatorConfig& cfg);

enum class ShiftMode {
  /// f1 -> f1(. - D1 z) and f2 -> f2(. - D2 z); covariant for every z.
  Both,
  /// Only f2 is shifted; requires D1 z = 0.
  SecondOnly,
  /// Only f1 is shifted; requires D2 z = 0.
  FirstOnly,
};

struct CovarianceReport {
  /// max over the grid of |I(f1_z, f2_z)(x) - I(f1, f2)(x - z)|.
  double defect = 0.0;
  /// max over the grid of the sum of the two reported quadrature errors.
  double combined_error = 0.0;
};

/// Throws PreconditionError when the shift mode's covariance condition fails for z.
CovarianceReport translation_covariance_defect(const OperatorConfig& cfg, const TestFunction& f1,
                                               const TestFunction& f2, const std::vector<Rational>& z,
                                               const GridSpec& grid, const QuadratureSpec& quad,
                                               ShiftMode mode = ShiftMode::Both);

struct BlowupReport {
  std::vector<double> parameters;
  std::vector<double> ratios;
  std::vector<double> ratio_errors;
  bool strictly_increasing = false;
  bool warning = false;
};

/// For each parameter value, ||I(f1, f2)||_q / (||f1||_p1 ||f2||_p2); when the witness carries a dual function h,
/// |<I(f1, f2), h>| / (||f1||_p1 ||f2||_p2 ||h||_q') instead. Values are used in the given order.
BlowupReport blowup_probe(const OperatorConfig& cfg, const WitnessFamily& family, const std::vector<double>& values,
                          const GridSpec& grid, const QuadratureSpec& quad);

}  // namespace bilinfrac
