#pragma once

#include "bilinfrac/classifier.hpp"
#include "bilinfrac/functions.hpp"
#include "bilinfrac/operator.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilinfrac {

using Json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { Classify, Reduce, Probe, Sweep, Norm };
enum class OperatorKind { Bilinear, Linear, Radial };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);
std::string to_string(OperatorKind k);
OperatorKind parse_operator_kind(const std::string& s);

/// Everything a command needs. The linear and radial operators reuse n1, D1 and p1 for n, D and p.
struct RunConfig {
  Mode mode = Mode::Classify;
  OperatorKind kind = OperatorKind::Bilinear;
  int n1 = 1;
  int n2 = 1;
  int m = 1;
  RationalMatrix D1;
  RationalMatrix D2;
  Exponent p1;
  Exponent p2;
  Exponent q;
  /// Empty means "auto": the value forced by the scaling relation.
  std::optional<Order> lambda;
  std::optional<TestFunction> f1;
  std::optional<TestFunction> f2;
  /// Evaluation point for norm mode; empty means the L^q norm over the grid.
  std::optional<std::vector<double>> x;
  std::vector<double> dilations;
  /// Witness family name for probe mode, or "all".
  std::optional<std::string> witness;
  std::vector<double> witness_values;
  int divisor = 8;
  QuadratureSpec quad;
  GridSpec grid;
  std::optional<std::string> output;
  std::optional<std::string> csv;

  /// The order used by the commands, resolving "auto". Throws ConfigError when "auto" meets p < 1.
  Order resolved_lambda() const;
  /// The bilinear configuration with lambda resolved.
  OperatorConfig operator_config() const;
};

/// Throws ConfigError on malformed or incomplete input.
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::string& path);

/// Integers or strings such as "3/2".
Rational rational_from_json(const Json& j);
/// Strings such as "3/2" or "inf", or integers.
Exponent exponent_from_json(const Json& j);
RationalMatrix matrix_from_json(const Json& j, std::size_t cols_if_empty = 0);
/// Tagged descriptor; `dim` falls back to default_dim when absent.
TestFunction function_from_json(const Json& j, int default_dim);

Json to_json(const RationalMatrix& m);
Json to_json(const TestFunction& f);
Json to_json(const Verdict& v);
Json to_json(const NormEstimate& e);
Json to_json(const ProbeReport& r);
Json to_json(const BlowupReport& r);
Json to_json(const QuadratureSpec& q);
Json to_json(const GridSpec& g);

}  // namespace bilinfrac
