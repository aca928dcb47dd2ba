#include "bilinfrac/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

using namespace bilinfrac;

namespace {

CommandResult run(const Json& j) { return run_command(parse_run_config(j)); }

Json body(const CommandResult& r) { return Json::parse(r.output); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("bilinfrac_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

int cli(std::vector<std::string> args, std::string& out, std::string& err) {
  args.insert(args.begin(), "bilinfrac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}

Json rows(const std::vector<std::vector<std::string>>& m) {
  Json j = Json::array();
  for (const auto& r : m) j.push_back(Json(r));
  return j;
}

Json base(const char* p1, const char* p2, const char* q) {
  return Json{{"mode", "classify"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", p1}, {"p2", p2}, {"q", q}};
}

}  // namespace

TEST_CASE("classify exit codes") {
  auto bounded = run(base("2", "2", "2"));
  CHECK(bounded.exit_code == 0);
  auto j = body(bounded);
  CHECK(j["bounded"] == true);
  CHECK(j["lambda"] == "3/2");
  CHECK(j["operator"] == "bilinear");

  auto unbounded = run(base("1", "2", "1"));
  CHECK(unbounded.exit_code == 1);
  CHECK(body(unbounded)["bounded"] == false);

  auto bad = base("2", "2", "2");
  bad["lambda"] = "3";
  auto out_of_range = run(bad);
  CHECK(out_of_range.exit_code == 2);
  CHECK(body(out_of_range).contains("clause"));
  CHECK_FALSE(out_of_range.diagnostic.empty());

  auto mismatch = base("2", "2", "2");
  mismatch["lambda"] = "1";
  auto inhomogeneous = run(mismatch);
  CHECK(inhomogeneous.exit_code == 1);
  CHECK(body(inhomogeneous)["bounded"] == false);

  CHECK_THROWS_AS(parse_run_config(base("1/2", "2", "2")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(Json{{"n1", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(Json::array()), ConfigError);
}

TEST_CASE("classify for the linear and radial operators") {
  Json lin{{"mode", "classify"}, {"operator", "linear"}, {"n", 1}, {"m", 1}, {"p", "2"}, {"q", "4"}};
  auto r = run(lin);
  CHECK(r.exit_code == 0);
  CHECK(body(r)["operator"] == "linear");
  Json rad{{"mode", "classify"}, {"operator", "radial"}, {"n", 1}, {"m", 1}, {"p", "1"}, {"q", "2"}};
  CHECK(run(rad).exit_code == 1);
}

TEST_CASE("sweep") {
  auto cfg = base("2", "2", "2");
  cfg["mode"] = "sweep";
  auto eight = run(cfg);
  REQUIRE(eight.exit_code == 0);
  auto rows = lines(eight.output);
  REQUIRE(rows.size() == 1 + 729);
  CHECK(rows[0] == "inv_p1,inv_p2,inv_q,bounded,clause");
  CHECK(rows[1].rfind("0,0,0,", 0) == 0);
  CHECK(rows[2].rfind("0,0,1/8,", 0) == 0);
  CHECK(rows.back().rfind("1,1,1,", 0) == 0);

  std::map<std::string, std::string> by_point;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    auto f = fields(rows[k]);
    REQUIRE(f.size() == 5);
    by_point[f[0] + "," + f[1] + "," + f[2]] = f[3] + "," + f[4];
  }
  CHECK(by_point.at("1/2,1/2,1/2").rfind("true,", 0) == 0);

  cfg["divisor"] = 2;
  CHECK(lines(run(cfg).output).size() == 1 + 27);

  cfg["divisor"] = 16;
  auto sixteen = lines(run(cfg).output);
  int shared = 0;
  for (std::size_t k = 1; k < sixteen.size(); ++k) {
    auto f = fields(sixteen[k]);
    auto key = f[0] + "," + f[1] + "," + f[2];
    if (auto it = by_point.find(key); it != by_point.end()) {
      CHECK(it->second == f[3] + "," + f[4]);
      ++shared;
    }
  }
  CHECK(shared == 729);

  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(1, rows.size() - 1);
  for (int t = 0; t < 50; ++t) {
    auto f = fields(rows[pick(rng)]);
    auto one = base("2", "2", "2");
    auto as_exponent = [](const std::string& inv) { return to_string(Exponent::from_reciprocal(parse_rational(inv))); };
    one["p1"] = as_exponent(f[0]);
    one["p2"] = as_exponent(f[1]);
    one["q"] = as_exponent(f[2]);
    const auto p1 = Exponent::from_reciprocal(parse_rational(f[0]));
    const auto p2 = Exponent::from_reciprocal(parse_rational(f[1]));
    const auto q = Exponent::from_reciprocal(parse_rational(f[2]));
    one["lambda"] = to_string(homogeneous_lambda(1, 1, 1, p1, p2, q));
    auto direct = run(one);
    if (f[3] == "n/a") {
      CHECK(direct.exit_code == 2);
      CHECK(body(direct)["clause"] == f[4]);
    } else {
      CHECK(direct.exit_code == (f[3] == "true" ? 0 : 1));
      CHECK(body(direct)["clause"] == f[4]);
    }
  }

  cfg["divisor"] = 1;
  CHECK_THROWS_AS(parse_run_config(cfg), ConfigError);
  auto c = parse_run_config(base("2", "2", "2"));
  c.mode = Mode::Sweep;
  c.divisor = 65;
  CHECK(run_command(c).exit_code == 2);
}

TEST_CASE("reduce") {
  Json cfg{{"mode", "reduce"}, {"n1", 1}, {"n2", 1}, {"m", 2},
           {"D1", rows({{"1", "0"}})}, {"D2", rows({{"0", "1"}})}, {"p1", "2"}, {"p2", "2"}, {"q", "2"}, {"lambda", "1"}};
  auto r = run(cfg);
  REQUIRE(r.exit_code == 0);
  auto j = body(r);
  CHECK(j["r1"] == 1);
  CHECK(j["r2"] == 1);
  CHECK(j["stacked_rank"] == 2);
  CHECK(j["single"]["D1"]["verified"] == true);
  CHECK(j["joint"]["reconstruction"]["first"] == true);
  CHECK(j["joint"]["reconstruction"]["second"] == true);
  CHECK(j["joint"]["reconstruction"]["invertible"] == true);

  cfg["D2"] = rows({{"2", "0"}});
  auto deficient = body(run(cfg));
  CHECK(deficient["stacked_rank"] == 1);
  CHECK(deficient["joint"] == "unavailable");

  cfg["D2"] = rows({{"1"}, {"0"}});
  CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("norm") {
  Json cfg{{"mode", "norm"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", "2"}, {"p2", "2"}, {"q", "2"}, {"lambda", "1/2"},
           {"f1", {{"type", "indicator_ball"}}}, {"f2", {{"type", "indicator_ball"}}}, {"x", {0.0}}};
  auto j = body(run(cfg));
  CHECK(j["value"].get<double>() == doctest::Approx(32.0 / 3.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-3));

  cfg["f1"] = Json{{"type", "zero"}};
  CHECK(body(run(cfg))["value"].get<double>() == 0.0);

  Json lin{{"mode", "norm"}, {"operator", "linear"}, {"n", 1}, {"m", 1}, {"p", "2"}, {"lambda", "1/2"},
           {"f", {{"type", "indicator_ball"}}}, {"x", {0.0}}};
  CHECK(body(run(lin))["value"].get<double>() == doctest::Approx(4.0).epsilon(1e-3));
  lin.erase("x");
  CHECK(run(lin).exit_code == 2);

  Json rad{{"mode", "norm"}, {"operator", "radial"}, {"n", 1}, {"m", 1}, {"p", "2"}, {"lambda", "1"},
           {"f", {{"type", "indicator_ball"}}}, {"x", {1.0}}};
  CHECK(body(run(rad))["value"].get<double>() == doctest::Approx(2 * std::log(2.0)).epsilon(1e-3));

  Json grid{{"mode", "norm"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", "2"}, {"p2", "2"}, {"q", "inf"}, {"lambda", "1/2"},
            {"f1", {{"type", "zero"}}}, {"f2", {{"type", "gaussian"}}}, {"grid", {{"half_width", 2}, {"points_per_axis", 9}}}};
  CHECK(body(run(grid))["value"].get<double>() == 0.0);
}

TEST_CASE("probe") {
  Json cfg{{"mode", "probe"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", "2"}, {"p2", "2"}, {"q", "2"},
           {"f1", {{"type", "gaussian"}}}, {"f2", {{"type", "gaussian"}}}, {"grid", {{"points_per_axis", 129}}}};
  auto r = run(cfg);
  REQUIRE(r.exit_code == 0);
  auto j = body(r);
  CHECK(std::abs(j["dilation"]["slope"].get<double>()) < 0.05);
  CHECK(j["verdict"]["bounded"] == true);

  Json w{{"mode", "probe"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", "1"}, {"p2", "2"}, {"q", "1"},
         {"witness", "all"}, {"grid", {{"points_per_axis", 513}}}};
  auto blow = body(run(w));
  REQUIRE(blow["blowup"].size() >= 1);
  CHECK(blow["blowup"][0]["strictly_increasing"] == true);

  w["witness"] = "no_such_family";
  CHECK(run(w).exit_code == 2);
  Json bounded_witness = cfg;
  bounded_witness["witness"] = "all";
  CHECK(run(bounded_witness).exit_code == 2);
  cfg.erase("f1");
  CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("probe writes a CSV of ratios") {
  const auto csv = (std::filesystem::temp_directory_path() / "bilinfrac_test_probe.csv").string();
  Json cfg{{"mode", "probe"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", "2"}, {"p2", "2"}, {"q", "2"},
           {"f1", {{"type", "gaussian"}}}, {"f2", {{"type", "gaussian"}}}, {"grid", {{"points_per_axis", 65}}},
           {"dilations", {0.5, 1, 2}}, {"csv", csv}};
  REQUIRE(run(cfg).exit_code == 0);
  std::ifstream in(csv);
  std::stringstream s;
  s << in.rdbuf();
  auto rows = lines(s.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "a,ratio,err");
  CHECK(fields(rows[2])[0] == "1");
}

TEST_CASE("output is deterministic") {
  Json cfg{{"mode", "norm"}, {"n1", 1}, {"n2", 1}, {"m", 1}, {"p1", "2"}, {"p2", "2"}, {"q", "2"},
           {"f1", {{"type", "gaussian"}}}, {"f2", {{"type", "indicator_ball"}}}, {"grid", {{"points_per_axis", 65}}},
           {"quadrature", {{"scheme", "quasi-random"}, {"samples", 4096}}}, {"seed", 11}};
  auto a = run(cfg), b = run(cfg);
  CHECK(a.output == b.output);
  cfg["quadrature"]["scheme"] = "adaptive-dyadic";
  CHECK(run(cfg).output == run(cfg).output);
}

TEST_CASE("command line") {
  const auto path = write_temp("classify.json", base("2", "2", "2").dump());
  std::string out, err;
  CHECK(cli({"--config", path}, out, err) == 0);
  CHECK(Json::parse(out)["bounded"] == true);

  CHECK(cli({"--config", path, "--mode", "sweep"}, out, err) == 0);
  CHECK(lines(out).size() == 1 + 729);

  const auto target = (std::filesystem::temp_directory_path() / "bilinfrac_test_out.json").string();
  std::filesystem::remove(target);
  CHECK(cli({"--config", path, "--out", target}, out, err) == 0);
  CHECK(out.empty());
  CHECK(std::filesystem::exists(target));

  CHECK(cli({"--config", "/nonexistent/config.json"}, out, err) == 2);
  CHECK(err.rfind("error: ", 0) == 0);
  CHECK(cli({}, out, err) == 2);
  CHECK(cli({"--config", path, "--mode", "bogus"}, out, err) == 2);
  CHECK(cli({"--help"}, out, err) == 0);

  auto norm = base("2", "2", "2");
  norm["mode"] = "norm";
  norm["lambda"] = "1/2";
  norm["f1"] = Json{{"type", "indicator_ball"}};
  norm["f2"] = Json{{"type", "indicator_ball"}};
  norm["x"] = Json{0.0};
  const auto npath = write_temp("norm.json", norm.dump());
  CHECK(cli({"--config", npath, "--trunc", "0.5"}, out, err) == 0);
  const double truncated = Json::parse(out)["value"].get<double>();
  CHECK(cli({"--config", npath}, out, err) == 0);
  CHECK(truncated < Json::parse(out)["value"].get<double>());
}
