#pragma once

#include "bilinfrac/exponents.hpp"
#include "bilinfrac/quadrature.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bilinfrac {

class DivergentNormError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class NormMethod { Analytic, Quadrature, Sampled };

std::string to_string(NormMethod m);

/// A non-negative number with an error bar.
struct NormEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  NormMethod method = NormMethod::Analytic;
  /// The integration box cut off part of a function's support.
  bool truncated_support = false;
  /// The quadrature stopped before reaching its target accuracy.
  bool tolerance_not_met = false;
};

struct FunctionNode;

/// Immutable descriptor of an evaluable function on R^n. Copies share structure.
class TestFunction {
 public:
  TestFunction() = default;
  explicit TestFunction(std::shared_ptr<const FunctionNode> node);

  /// chi(|y - center| <= radius). An empty center means the origin.
  static TestFunction indicator_ball(int dim, double radius = 1.0, std::vector<double> center = {});
  /// chi(|y| <= width) / |B(0, width)|, a bump of unit mass.
  static TestFunction mollified_delta(int dim, double width);
  /// chi(|y| <= 1/2) |y|^(-n/p) (log 1/|y|)^(-(1 + eps)/p); zero at the origin.
  static TestFunction power_log(int dim, double p, double epsilon);
  /// chi(|y| <= 1/2) |w|^(-(n - k)/p) (log 1/|w|)^(-(1 + eps)/p) with w the last n - k coordinates.
  static TestFunction split_power_log(int dim, int lead, double p, double epsilon);
  static TestFunction constant(int dim, double value);
  /// exp(-|y|^2 / (2 scale^2)).
  static TestFunction gaussian(int dim, double scale = 1.0);
  /// (1 + |y|)^(-alpha).
  static TestFunction decay(int dim, double alpha);
  static TestFunction sum(const TestFunction& a, const TestFunction& b);

  int dim() const;
  /// Throws std::invalid_argument when y has the wrong length.
  double evaluate(const std::vector<double>& y) const;
  /// Unchecked evaluation at dim() coordinates.
  double operator()(const double* y) const;

  /// Bounding box of the support, or nullopt when the support is unbounded.
  std::optional<Box> support() const;
  /// Per axis, coordinates where the function has a kink, jump or singular hyperplane.
  std::vector<std::vector<double>> breakpoints() const;
  /// True for the zero function (a constant with value 0).
  bool is_zero() const;

  const FunctionNode& node() const { return *node_; }

 private:
  std::shared_ptr<const FunctionNode> node_;
};

struct IndicatorBall {
  int dim;
  double radius;
  std::vector<double> center;
};
struct MollifiedDelta {
  int dim;
  double width;
};
struct PowerLog {
  int dim;
  double p;
  double epsilon;
};
struct SplitPowerLog {
  int dim;
  int lead;
  double p;
  double epsilon;
};
struct Constant {
  int dim;
  double value;
};
struct Gaussian {
  int dim;
  double scale;
};
struct Decay {
  int dim;
  double alpha;
};
struct Sum {
  TestFunction first;
  TestFunction second;
};
/// f(y / a).
struct Dilated {
  TestFunction inner;
  double a;
};
/// f(y - shift).
struct Translated {
  TestFunction inner;
  std::vector<double> shift;
};
/// f(A y) with A invertible, row-major.
struct LinearMap {
  TestFunction inner;
  std::vector<double> matrix;
  std::vector<double> inverse;
  double abs_det;
};

using FunctionVariant = std::variant<IndicatorBall, MollifiedDelta, PowerLog, SplitPowerLog, Constant, Gaussian, Decay,
                                     Sum, Dilated, Translated, LinearMap>;

struct FunctionNode {
  FunctionVariant value;
};

/// f(. / a). Throws std::invalid_argument unless a > 0.
TestFunction dilate(const TestFunction& f, double a);
/// f(. - z) with the coordinates outside `mask` left unshifted. An empty mask shifts every coordinate.
TestFunction translate(const TestFunction& f, const std::vector<double>& z, const std::vector<bool>& mask = {});
/// f(A .). Throws SingularMatrixError-like std::invalid_argument for singular A.
TestFunction linear_map(const TestFunction& f, const std::vector<double>& matrix);

/// The L^p (quasi-)norm, analytic where a closed form exists and by quadrature otherwise.
/// Throws DivergentNormError when the norm is infinite.
NormEstimate lp_norm(const TestFunction& f, const Exponent& p, const QuadratureSpec& quad = {});

/// (int_{|w| >= r0} |f|^p)^(1/p) for the power-log families, where w is the weighted block. The value grows
/// without bound as r0 -> 0 exactly when the full norm diverges.
NormEstimate lp_norm_outside(const TestFunction& f, const Exponent& p, double r0);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace bilinfrac
