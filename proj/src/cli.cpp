#include "bilinfrac/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace bilinfrac {

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

CommandResult failure(const std::string& message, Json body = Json::object()) {
  body["error"] = message;
  return CommandResult{2, dump(body), message};
}

Verdict classify(const RunConfig& c) {
  const Order lambda = c.resolved_lambda();
  switch (c.kind) {
    case OperatorKind::Linear: return classify_linear(c.n1, c.m, c.D1, c.p1, c.q, lambda);
    case OperatorKind::Radial: return classify_radial(c.n1, c.m, c.p1, c.q, lambda);
    case OperatorKind::Bilinear: break;
  }
  return classify_bilinear(c.operator_config());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

Json single_form_json(const RationalMatrix& d) {
  SingleNormalForm nf = single_normal_form(d);
  return Json{{"r", nf.r}, {"P", to_json(nf.P)}, {"Q", to_json(nf.Q)}, {"verified", verify(nf, d)}};
}

}  // namespace

CommandResult cmd_classify(const RunConfig& c) {
  Verdict v = classify(c);
  Json j{{"mode", "classify"}, {"operator", to_string(c.kind)}};
  j.update(to_json(v));
  return CommandResult{v.bounded ? 0 : 1, dump(j), {}};
}

CommandResult cmd_reduce(const RunConfig& c) {
  if (c.kind != OperatorKind::Bilinear) {
    Json j{{"mode", "reduce"}, {"single", {{"D", single_form_json(c.D1)}}}};
    return CommandResult{0, dump(j), {}};
  }
  check_dimensions(OperatorConfig{c.n1, c.n2, c.m, c.D1, c.D2, c.p1, c.p2, c.q, Order{Rational(1)}});
  const std::size_t stacked = rank(vstack(c.D1, c.D2));
  Json j{{"mode", "reduce"},
         {"r1", rank(c.D1)},
         {"r2", rank(c.D2)},
         {"stacked_rank", stacked},
         {"single", {{"D1", single_form_json(c.D1)}, {"D2", single_form_json(c.D2)}}}};
  if (stacked < static_cast<std::size_t>(c.m)) {
    j["joint"] = "unavailable";
  } else {
    JointNormalForm nf = joint_normal_form(c.D1, c.D2);
    JointReconstruction rec = verify(nf, c.D1, c.D2);
    auto w = nf.block_widths();
    j["joint"] = Json{{"P1", to_json(nf.P1)},
                      {"P2", to_json(nf.P2)},
                      {"Q", to_json(nf.Q)},
                      {"blocks", {w[0], w[1], w[2]}},
                      {"reconstruction",
                       {{"first", rec.first}, {"second", rec.second}, {"invertible", rec.invertible}}}};
  }
  return CommandResult{0, dump(j), {}};
}

CommandResult cmd_probe(const RunConfig& c) {
  if (c.kind != OperatorKind::Bilinear) throw ConfigError("probe mode supports the bilinear operator only");
  const OperatorConfig cfg = c.operator_config();
  Json j{{"mode", "probe"}, {"lambda", to_string(cfg.lambda)}};
  std::optional<Verdict> verdict;
  try {
    verdict = classify_bilinear(cfg);
    j["verdict"] = to_json(*verdict);
  } catch (const HypothesisError& e) {
    j["verdict"] = Json{{"error", e.what()}, {"clause", to_string(e.clause())}};
  }
  bool warning = false;
  bool ran = false;
  std::ostringstream csv;
  csv << "a,ratio,err\n";
  csv.precision(17);
  if (c.f1 && c.f2) {
    std::vector<double> a = c.dilations.empty() ? std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0} : c.dilations;
    ProbeReport r = dilation_slope(cfg, *c.f1, *c.f2, a, c.grid, c.quad);
    j["dilation"] = to_json(r);
    warning = warning || r.warning;
    for (std::size_t k = 0; k < r.ratios.size(); ++k) csv << r.dilations[k] << ',' << r.ratios[k] << ',' << r.ratio_errors[k] << '\n';
    ran = true;
  }
  if (c.witness) {
    if (!verdict || verdict->bounded) throw ConfigError("witness probes need a configuration classified unbounded");
    Json blowup = Json::array();
    for (const WitnessFamily& fam : witness_for(cfg, verdict->clause)) {
      if (*c.witness != "all" && *c.witness != fam.name) continue;
      std::vector<double> values = c.witness_values.empty() ? fam.values : c.witness_values;
      BlowupReport r = blowup_probe(cfg, fam, values, c.grid, c.quad);
      Json entry{{"family", fam.name}, {"parameter", to_string(fam.parameter)}};
      entry.update(to_json(r));
      blowup.push_back(std::move(entry));
      warning = warning || r.warning;
      if (!ran)
        for (std::size_t k = 0; k < r.ratios.size(); ++k)
          csv << r.parameters[k] << ',' << r.ratios[k] << ',' << r.ratio_errors[k] << '\n';
      ran = true;
    }
    if (blowup.empty()) throw ConfigError("no witness family named '" + *c.witness + "'");
    j["blowup"] = std::move(blowup);
  }
  if (!ran) throw ConfigError("probe mode needs f1 and f2, a witness, or both");
  j["warning"] = warning;
  if (c.csv) write_text(*c.csv, csv.str());
  return CommandResult{0, dump(j), {}};
}

CommandResult cmd_sweep(const RunConfig& c) {
  if (c.kind != OperatorKind::Bilinear) throw ConfigError("sweep mode supports the bilinear operator only");
  if (c.divisor < 2 || c.divisor > 64) throw ConfigError("sweep divisor must lie in [2, 64]");
  std::ostringstream out;
  out << "inv_p1,inv_p2,inv_q,bounded,clause\n";
  const int d = c.divisor;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; b <= d; ++b)
      for (int e = 0; e <= d; ++e) {
        Rational ra(a, d), rb(b, d), re(e, d);
        ra.canonicalize();
        rb.canonicalize();
        re.canonicalize();
        Exponent p1 = Exponent::from_reciprocal(ra), p2 = Exponent::from_reciprocal(rb), q = Exponent::from_reciprocal(re);
        out << to_string(ra) << ',' << to_string(rb) << ',' << to_string(re) << ',';
        try {
          Verdict v = classify_bilinear(
              OperatorConfig{c.n1, c.n2, c.m, c.D1, c.D2, p1, p2, q, homogeneous_lambda(c.n1, c.n2, c.m, p1, p2, q)});
          out << (v.bounded ? "true" : "false") << ',' << to_string(v.clause) << '\n';
        } catch (const HypothesisError& err) {
          out << "n/a," << to_string(err.clause()) << '\n';
        }
      }
  return CommandResult{0, out.str(), {}};
}

CommandResult cmd_norm(const RunConfig& c) {
  Json j{{"mode", "norm"}, {"operator", to_string(c.kind)}};
  const Order lambda = c.resolved_lambda();
  j["lambda"] = to_string(lambda);
  if (!c.f1) throw ConfigError("norm mode needs an input function");
  NormEstimate e;
  switch (c.kind) {
    case OperatorKind::Bilinear: {
      if (!c.f2) throw ConfigError("the bilinear operator needs f2");
      const OperatorConfig cfg = c.operator_config();
      if (c.x) {
        j["x"] = *c.x;
        e = eval_bilinear(cfg, *c.f1, *c.f2, *c.x, c.quad);
      } else {
        j["q"] = to_string(c.q);
        j["grid"] = to_json(c.grid);
        e = lq_norm_on_grid(cfg, *c.f1, *c.f2, c.grid, c.quad);
      }
      break;
    }
    case OperatorKind::Linear:
    case OperatorKind::Radial: {
      if (!c.x) throw ConfigError("the linear and radial operators need an evaluation point x");
      j["x"] = *c.x;
      e = c.kind == OperatorKind::Linear ? eval_linear(c.n1, c.m, c.D1, lambda, *c.f1, *c.x, c.quad)
                                         : eval_radial(c.n1, c.m, lambda, *c.f1, *c.x, c.quad);
      break;
    }
  }
  j.update(to_json(e));
  return CommandResult{0, dump(j), {}};
}

CommandResult run_command(const RunConfig& c) {
  try {
    switch (c.mode) {
      case Mode::Classify: return cmd_classify(c);
      case Mode::Reduce: return cmd_reduce(c);
      case Mode::Probe: return cmd_probe(c);
      case Mode::Sweep: return cmd_sweep(c);
      case Mode::Norm: return cmd_norm(c);
    }
  } catch (const HypothesisError& e) {
    return failure(e.what(), Json{{"clause", to_string(e.clause())}});
  } catch (const std::exception& e) {
    return failure(e.what());
  }
  return failure("unknown mode");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundedness classifier and numerical lab for bilinear fractional integrals"};
  std::string config_path, mode, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> depth, grid;
  std::optional<std::size_t> samples;
  std::optional<double> trunc;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--mode", mode, "classify | reduce | probe | sweep | norm");
  app.add_option("--out", out_path, "write the result here instead of standard output");
  app.add_option("--seed", seed, "quadrature seed");
  app.add_option("--depth", depth, "adaptive refinement depth");
  app.add_option("--samples", samples, "quasi-random samples");
  app.add_option("--grid", grid, "grid points per axis");
  app.add_option("--trunc", trunc, "integration half-width");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help, diag;
    const int code = app.exit(e, help, diag);
    out << help.str();
    err << diag.str();
    return code == 0 ? 0 : 2;
  }
  CommandResult result;
  std::optional<std::string> target;
  try {
    RunConfig c = load_run_config(config_path);
    if (!mode.empty()) c.mode = parse_mode(mode);
    if (seed) c.quad.seed = *seed;
    if (depth) c.quad.max_depth = *depth;
    if (samples) c.quad.samples = *samples;
    if (grid) c.grid.points_per_axis = *grid;
    if (trunc) c.quad.truncation_radius = *trunc;
    target = out_path.empty() ? c.output : std::optional<std::string>(out_path);
    result = run_command(c);
  } catch (const std::exception& e) {
    result = failure(e.what());
  }
  if (!result.diagnostic.empty()) err << "error: " << result.diagnostic << '\n';
  if (target) {
    try {
      write_text(*target, result.output);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
  } else {
    out << result.output;
  }
  return result.exit_code;
}

}  // namespace bilinfrac
