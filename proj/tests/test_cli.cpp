#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace knead;
using namespace knead::cli;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(KNEAD_FIXTURES) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "knead");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("knead_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

const char* tent_text = R"(
interval: [0, 1]
cuts: ["1/2"]
branches:
  - {slope: 2, intercept: 0}
  - {slope: -2, intercept: 2}
)";

}  // namespace

TEST_CASE("shipped fixtures parse") {
  for (const char* name : {"tent.yaml", "extended_tent.yaml", "golden_mean.yaml",
                           "discontinuous_32.yaml", "zero_weight.yaml"}) {
    const auto cfg = parse_config(fixture(name));
    CHECK(cfg.arithmetic == Arithmetic::exact);
    CHECK(cfg.N == 64);
    CHECK(cfg.N_id == 12);
    CHECK(cfg.caps.max_depth == 24);
    CHECK(cfg.tol == 1e-12);
    CHECK_NOTHROW(make_system<Rational>(cfg));
    CHECK_NOTHROW(make_system<double>(cfg));
  }
  const auto tent = make_system<Rational>(parse_config(fixture("tent.yaml")));
  CHECK(tent.branch_count() == 2);

  const auto ac = make_system<Rational>(parse_config(fixture("extended_tent.yaml")));
  CHECK(ac.branch_count() == 3);
  CHECK(ac.weight(2) == Rational(5));
  const auto ac100 = make_system<Rational>(parse_config(fixture("extended_tent.yaml"), {"M=100"}));
  CHECK(ac100.weight(2) == Rational(100));

  const auto disc = make_system<Rational>(parse_config(fixture("discontinuous_32.yaml")));
  CHECK(disc.image_lo(0) == Rational(1, 4));
  CHECK(!disc.continuous());
}

TEST_CASE("defaults and exact entries") {
  const auto cfg = parse_config_text(tent_text);
  CHECK(cfg.arithmetic == Arithmetic::float64);
  const auto sys = make_system<Rational>(cfg);
  CHECK(sys.cut(1) == Rational(1, 2));
}

TEST_CASE("configuration errors name the field") {
  auto field_of = [](const std::string& text, std::vector<std::string> overrides = {}) {
    try {
      const auto cfg = parse_config_text(text, overrides);
      make_system<Rational>(cfg);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"(
interval: [0, 1]
cuts: ["3/4", "1/2"]
branches: [{slope: 1, intercept: 0}, {slope: 1, intercept: 0}, {slope: 1, intercept: 0}]
)") == "cuts");
  CHECK(field_of("interval: [0, 1]\ncuts: [\"1/2\"]\n") == "branches");
  CHECK(field_of(std::string(tent_text) + "arithmetic: quad\n") == "arithmetic");
  CHECK(field_of(std::string(tent_text) + "N: 8\nN_id: 12\n") == "N_id");
  CHECK(field_of(R"(
interval: [0, 1]
cuts: ["1/2"]
branches: [{slope: two, intercept: 0}, {slope: -2, intercept: 2}]
)") == "branches[0].slope");
  CHECK(field_of(R"(
interval: [0, 1]
cuts: ["1/2"]
branches: [{slope: 2}, {slope: -2, intercept: 2}]
)") == "branches[0]");
  CHECK(field_of(tent_text, {"oops"}) == "param");

  const auto cfg = parse_config_text(
      "interval: [0, 1]\ncuts: [\"3/4\", \"1/2\"]\nbranches: [{slope: 1, intercept: 0}, "
      "{slope: 1, intercept: 0}, {slope: 1, intercept: 0}]\n");
  CHECK_THROWS_WITH_AS(make_system<Rational>(cfg), doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("check passes on the tent map") {
  const auto r = invoke({"check", fixture("tent.yaml")});
  CHECK(r.code == 0);
  CHECK(r.out.find("MKI") != std::string::npos);
  CHECK(r.out.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("pressure on extended tent with M = 100 reports the spurious zero") {
  const auto r = invoke({"pressure", fixture("extended_tent.yaml"), "--param", "M=100", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::stod(j["info"]["t*"].get<std::string>()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::stod(j["info"]["pressure"].get<std::string>()) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(std::stod(j["info"]["det B first zero"].get<std::string>()) ==
        doctest::Approx(2.0 / 101).epsilon(1e-9));
  REQUIRE(j["warnings"].size() >= 1);
  CHECK(j["ok"] == true);
}

TEST_CASE("exit status follows the verdict") {
  const auto dir = scratch("weak");
  fs::create_directories(dir);
  const auto path = dir / "weak.yaml";
  std::ofstream(path) << "interval: [0, 1]\ncuts: [\"1/2\"]\nbranches:\n"
                         "  - {slope: 2, intercept: 0, weight: \"1/10\"}\n"
                         "  - {slope: -2, intercept: 2, weight: \"1/10\"}\n";
  const auto weak = invoke({"pressure", path.string()});
  CHECK(weak.code == 1);
  CHECK(weak.out.find("verdict: FAIL") != std::string::npos);

  const auto range = invoke({"semiconj", fixture("tent.yaml"), "--t", "0.7", "--json"});
  CHECK(range.code == 2);
  CHECK(nlohmann::json::parse(range.out)["message"].get<std::string>().find("out of range") !=
        std::string::npos);
  CHECK(invoke({"model", fixture("tent.yaml")}).code == 2);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const auto a = invoke({"semiconj", fixture("extended_tent.yaml"), "--t", "0.2", "--seed", "9"});
  const auto b = invoke({"semiconj", fixture("extended_tent.yaml"), "--t", "0.2", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("emit-plots writes the three schemas twice") {
  const auto dir = scratch("plots");
  const auto r = invoke({"emit-plots", fixture("discontinuous_32.yaml"), "--t", "0.1", "--out",
                         dir.string()});
  CHECK(r.code == 0);
  for (const char* sub : {"subcritical", "critical"}) {
    CHECK(first_line(dir / sub / "graph.csv") == "# knead-csv v1 graph");
    CHECK(first_line(dir / sub / "phi.csv") == "# knead-csv v1 phi");
    CHECK(first_line(dir / sub / "model.csv") == "# knead-csv v1 model");
  }
  CHECK(r.out.find("partially defined") != std::string::npos);
}

TEST_CASE("table outputs") {
  const auto dir = scratch("tables");
  CHECK(invoke({"kneading", fixture("tent.yaml"), "--N", "16", "--out", dir.string()}).code == 0);
  CHECK(first_line(dir / "det.csv") == "# knead-csv v1 det");
  CHECK(fs::exists(dir / "theta_1_1.csv"));
  CHECK(invoke({"zeta", fixture("tent.yaml"), "--out", dir.string()}).code == 0);
  CHECK(first_line(dir / "nn.csv") == "# knead-csv v1 nn");
  CHECK(invoke({"cylinders", fixture("extended_tent.yaml"), "--depth", "3", "--out", dir.string()})
            .code == 0);
  CHECK(first_line(dir / "cylinders.csv") == "# knead-csv v1 cylinders");
  CHECK(invoke({"pressure", fixture("tent.yaml"), "--out", dir.string()}).code == 0);
  CHECK(first_line(dir / "scan.csv") == "# knead-csv v1 scan");
}
