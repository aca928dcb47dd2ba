#include "bilinfrac/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bilinfrac {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    try {
      return parse_rational(s).get_d();
    } catch (const std::invalid_argument&) {
    }
  }
  throw ConfigError(std::string("expected a number for ") + what);
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), key) : fallback;
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string("expected an integer for ") + what);
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("expected an array for ") + what);
  std::vector<double> out;
  for (const Json& v : j) out.push_back(number(v, what));
  return out;
}

template <class T>
T wrap(const char* what, T (*f)(const std::string&), const std::string& s) {
  try {
    return f(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

QuadratureSpec parse_quadrature(const Json& j) {
  QuadratureSpec q;
  if (j.contains("scheme")) q.scheme = wrap("scheme", parse_scheme, j.at("scheme").get<std::string>());
  if (j.contains("max_depth")) q.max_depth = integer(j.at("max_depth"), "max_depth");
  if (j.contains("samples")) q.samples = integer(j.at("samples"), "samples");
  q.truncation_radius = number_or(j, "truncation_radius", q.truncation_radius);
  q.target_rel_err = number_or(j, "target_rel_err", q.target_rel_err);
  if (j.contains("seed")) q.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("max_evaluations")) q.max_evaluations = integer(j.at("max_evaluations"), "max_evaluations");
  if (j.contains("qmc_shifts")) q.qmc_shifts = integer(j.at("qmc_shifts"), "qmc_shifts");
  return q;
}

GridSpec parse_grid(const Json& j) {
  GridSpec g;
  g.half_width = number_or(j, "half_width", g.half_width);
  if (j.contains("points_per_axis")) g.points_per_axis = integer(j.at("points_per_axis"), "points_per_axis");
  return g;
}

Order scaling_lambda(int n, int m, const Exponent& p, const Exponent& q) {
  Rational l = n * (1 - p.reciprocal()) + m * q.reciprocal();
  l.canonicalize();
  return Order{l};
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Classify: return "classify";
    case Mode::Reduce: return "reduce";
    case Mode::Probe: return "probe";
    case Mode::Sweep: return "sweep";
    case Mode::Norm: return "norm";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::Classify, Mode::Reduce, Mode::Probe, Mode::Sweep, Mode::Norm})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown mode '" + s + "'");
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Bilinear: return "bilinear";
    case OperatorKind::Linear: return "linear";
    case OperatorKind::Radial: return "radial";
  }
  return "?";
}

OperatorKind parse_operator_kind(const std::string& s) {
  for (OperatorKind k : {OperatorKind::Bilinear, OperatorKind::Linear, OperatorKind::Radial})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown operator '" + s + "'");
}

Order RunConfig::resolved_lambda() const {
  if (lambda) return *lambda;
  if (p1.reciprocal() > 1 || (kind == OperatorKind::Bilinear && p2.reciprocal() > 1))
    throw ConfigError("lambda \"auto\" needs p >= 1");
  if (kind == OperatorKind::Bilinear) return homogeneous_lambda(n1, n2, m, p1, p2, q);
  return scaling_lambda(n1, m, p1, q);
}

OperatorConfig RunConfig::operator_config() const {
  return OperatorConfig{n1, n2, m, D1, D2, p1, p2, q, resolved_lambda()};
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("rationals must be integers or strings such as \"3/2\"");
}

Exponent exponent_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Exponent::from_value(Rational(j.get<long>()));
    if (j.is_string()) return Exponent::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad exponent: ") + e.what());
  }
  throw ConfigError("exponents must be integers or strings such as \"3/2\" or \"inf\"");
}

RationalMatrix matrix_from_json(const Json& j, std::size_t cols_if_empty) {
  if (!j.is_array()) throw ConfigError("matrices are nested arrays of rows");
  std::vector<std::vector<Rational>> rows;
  for (const Json& row : j) {
    if (!row.is_array()) throw ConfigError("matrices are nested arrays of rows");
    std::vector<Rational> r;
    for (const Json& v : row) r.push_back(rational_from_json(v));
    rows.push_back(std::move(r));
  }
  try {
    return RationalMatrix::from_rows(rows, cols_if_empty);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

TestFunction function_from_json(const Json& j, int default_dim) {
  if (!j.is_object()) throw ConfigError("function descriptors are objects with a \"type\" field");
  const std::string type = require(j, "type").get<std::string>();
  const int dim = j.contains("dim") ? integer(j.at("dim"), "dim") : default_dim;
  try {
    if (type == "indicator_ball") {
      std::vector<double> center = j.contains("center") ? numbers(j.at("center"), "center") : std::vector<double>{};
      return TestFunction::indicator_ball(dim, number_or(j, "radius", 1.0), center);
    }
    if (type == "mollified_delta") return TestFunction::mollified_delta(dim, number(require(j, "width"), "width"));
    if (type == "power_log")
      return TestFunction::power_log(dim, number(require(j, "p"), "p"), number_or(j, "epsilon", 0.1));
    if (type == "split_power_log")
      return TestFunction::split_power_log(dim, integer(require(j, "lead"), "lead"), number(require(j, "p"), "p"),
                                           number_or(j, "epsilon", 0.1));
    if (type == "constant") return TestFunction::constant(dim, number(require(j, "value"), "value"));
    if (type == "gaussian") return TestFunction::gaussian(dim, number_or(j, "scale", 1.0));
    if (type == "decay") return TestFunction::decay(dim, number(require(j, "alpha"), "alpha"));
    if (type == "zero") return TestFunction::constant(dim, 0.0);
    if (type == "sum")
      return TestFunction::sum(function_from_json(require(j, "first"), dim), function_from_json(require(j, "second"), dim));
    if (type == "dilated") return dilate(function_from_json(require(j, "inner"), dim), number(require(j, "a"), "a"));
    if (type == "translated")
      return translate(function_from_json(require(j, "inner"), dim), numbers(require(j, "shift"), "shift"));
    if (type == "linear_map")
      return linear_map(function_from_json(require(j, "inner"), dim), numbers(require(j, "matrix"), "matrix"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(type + ": " + e.what());
  }
  throw ConfigError("unknown function type '" + type + "'");
}

RunConfig parse_run_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("the configuration must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("operator")) c.kind = parse_operator_kind(j.at("operator").get<std::string>());
    const bool bilinear = c.kind == OperatorKind::Bilinear;
    c.n1 = integer(require(j, bilinear ? "n1" : "n"), bilinear ? "n1" : "n");
    if (bilinear) c.n2 = integer(require(j, "n2"), "n2");
    c.m = integer(require(j, "m"), "m");
    if (c.n1 < 1 || c.n2 < 1 || c.m < 1) throw ConfigError("dimensions must be positive");
    if (bilinear) {
      c.D1 = j.contains("D1") ? matrix_from_json(j.at("D1"), c.m) : RationalMatrix::identity(c.m);
      c.D2 = j.contains("D2") ? matrix_from_json(j.at("D2"), c.m) : RationalMatrix::identity(c.m);
    } else if (c.kind == OperatorKind::Linear) {
      c.D1 = j.contains("D") ? matrix_from_json(j.at("D"), c.m) : RationalMatrix::identity(c.m);
    }
    const char* p1_key = bilinear ? "p1" : "p";
    if (j.contains(p1_key)) c.p1 = exponent_from_json(j.at(p1_key));
    if (bilinear && j.contains("p2")) c.p2 = exponent_from_json(j.at("p2"));
    if (j.contains("q")) c.q = exponent_from_json(j.at("q"));
    if (j.contains("lambda") && !(j.at("lambda").is_string() && j.at("lambda").get<std::string>() == "auto"))
      c.lambda = Order{rational_from_json(j.at("lambda"))};
    if (j.contains("f1")) c.f1 = function_from_json(j.at("f1"), c.n1);
    if (j.contains("f")) c.f1 = function_from_json(j.at("f"), c.n1);
    if (j.contains("f2")) c.f2 = function_from_json(j.at("f2"), c.n2);
    if (j.contains("x")) c.x = numbers(j.at("x"), "x");
    if (j.contains("dilations")) c.dilations = numbers(j.at("dilations"), "dilations");
    if (j.contains("witness")) c.witness = j.at("witness").get<std::string>();
    if (j.contains("witness_values")) c.witness_values = numbers(j.at("witness_values"), "witness_values");
    if (j.contains("divisor")) c.divisor = integer(j.at("divisor"), "divisor");
    if (j.contains("quadrature")) c.quad = parse_quadrature(j.at("quadrature"));
    if (j.contains("grid")) c.grid = parse_grid(j.at("grid"));
    if (j.contains("seed")) c.quad.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("csv")) c.csv = j.at("csv").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
  if (c.mode == Mode::Sweep && (c.divisor < 2 || c.divisor > 64))
    throw ConfigError("sweep divisor must lie in [2, 64]");
  if (!c.lambda) c.resolved_lambda();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(j);
}

Json to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const TestFunction& f) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IndicatorBall>) {
          Json j{{"type", "indicator_ball"}, {"dim", v.dim}, {"radius", v.radius}};
          if (!v.center.empty()) j["center"] = v.center;
          return j;
        } else if constexpr (std::is_same_v<T, MollifiedDelta>) {
          return Json{{"type", "mollified_delta"}, {"dim", v.dim}, {"width", v.width}};
        } else if constexpr (std::is_same_v<T, PowerLog>) {
          return Json{{"type", "power_log"}, {"dim", v.dim}, {"p", v.p}, {"epsilon", v.epsilon}};
        } else if constexpr (std::is_same_v<T, SplitPowerLog>) {
          return Json{{"type", "split_power_log"}, {"dim", v.dim}, {"lead", v.lead}, {"p", v.p}, {"epsilon", v.epsilon}};
        } else if constexpr (std::is_same_v<T, Constant>) {
          return Json{{"type", "constant"}, {"dim", v.dim}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return Json{{"type", "gaussian"}, {"dim", v.dim}, {"scale", v.scale}};
        } else if constexpr (std::is_same_v<T, Decay>) {
          return Json{{"type", "decay"}, {"dim", v.dim}, {"alpha", v.alpha}};
        } else if constexpr (std::is_same_v<T, Sum>) {
          return Json{{"type", "sum"}, {"first", to_json(v.first)}, {"second", to_json(v.second)}};
        } else if constexpr (std::is_same_v<T, Dilated>) {
          return Json{{"type", "dilated"}, {"inner", to_json(v.inner)}, {"a", v.a}};
        } else if constexpr (std::is_same_v<T, Translated>) {
          return Json{{"type", "translated"}, {"inner", to_json(v.inner)}, {"shift", v.shift}};
        } else {
          return Json{{"type", "linear_map"}, {"inner", to_json(v.inner)}, {"matrix", v.matrix}};
        }
      },
      f.node().value);
}

Json to_json(const Verdict& v) {
  return Json{{"bounded", v.bounded},     {"clause", to_string(v.clause)}, {"subreason", to_string(v.subreason)},
              {"r1", v.r1},               {"r2", v.r2},                    {"lambda", to_string(v.lambda)},
              {"detail", v.detail}};
}

Json to_json(const NormEstimate& e) {
  return Json{{"value", e.value},
              {"abs_error", e.abs_error},
              {"method", to_string(e.method)},
              {"truncated_support", e.truncated_support},
              {"tolerance_not_met", e.tolerance_not_met}};
}

Json to_json(const ProbeReport& r) {
  return Json{{"dilations", r.dilations},
              {"ratios", r.ratios},
              {"ratio_errors", r.ratio_errors},
              {"slope", r.slope},
              {"slope_stderr", r.slope_stderr},
              {"predicted_slope", r.predicted_slope},
              {"warning", r.warning}};
}

Json to_json(const BlowupReport& r) {
  return Json{{"parameters", r.parameters},
              {"ratios", r.ratios},
              {"ratio_errors", r.ratio_errors},
              {"strictly_increasing", r.strictly_increasing},
              {"warning", r.warning}};
}

Json to_json(const QuadratureSpec& q) {
  return Json{{"scheme", to_string(q.scheme)},
              {"max_depth", q.max_depth},
              {"samples", q.samples},
              {"truncation_radius", q.truncation_radius},
              {"target_rel_err", q.target_rel_err},
              {"seed", q.seed},
              {"max_evaluations", q.max_evaluations},
              {"qmc_shifts", q.qmc_shifts}};
}

Json to_json(const GridSpec& g) { return Json{{"half_width", g.half_width}, {"points_per_axis", g.points_per_axis}}; }

}  // namespace bilinfrac
