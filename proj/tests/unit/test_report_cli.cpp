#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "isopar/report.hpp"

using namespace isopar;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "isoparametric-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("residual summary keeps max, mean and NaN") {
    ResidualSummary s;
    s.add("a", 1.0);
    s.add("a", 3.0);
    s.add("b", 0.5);
    CHECK(s.max("a") == 3.0);
    CHECK(s.to_json()["a"]["mean"] == 2.0);
    s.add("b", std::numeric_limits<double>::quiet_NaN());
    s.add("b", 0.1);
    CHECK(std::isnan(s.max("b")));
    CHECK(s.max("missing") == 0.0);
  }

  TEST_CASE("run report schema") {
    const auto model = make_model(family_g3(AlgebraKind::Real));
    SphereSampler rng;
    RunReport r;
    r.family = "g3-r";
    const LevelPoint pt = project_to_level(model, rng.point(5), 0.0);
    r.points.push_back(spectrum(pt));
    r.focal.push_back(focal_map(pt, 2));
    r.residual_summary.add_all(r.points[0].residuals);
    const auto j = r.to_json();
    CHECK(j["schema_version"] == kReportSchemaVersion);
    for (const char* key : {"family", "seed", "points", "focal", "residual_summary"}) {
      CAPTURE(key);
      CHECK(j.contains(key));
    }
    CHECK(j["points"][0]["clusters"].size() == 3);
    CHECK(j["focal"][0]["rank_observed"] == 2);

    const std::string csv = eigenvalue_csv(r.points);
    CHECK(csv.rfind("sample,index,eigenvalue,theta,cluster,cluster_theta,cluster_multiplicity\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }

  TEST_CASE("family metadata includes the polynomial") {
    const auto j = family_json(family_g2(1, 2));
    CHECK(j["c_expected"] == "2");
    CHECK(poly_from_json(j["polynomial"]) == family_g2(1, 2).F);
    CHECK_FALSE(family_json(family_g2(1, 2), false).contains("polynomial"));
  }
}

TEST_SUITE("cli") {
  TEST_CASE("verify g3-octonion") {
    const auto r = run_cli({"verify", "--family", "g3-octonion"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verification"]["grad_norm_identity_zero"] == true);
    CHECK(j["verification"]["laplacian_identity_zero"] == true);
    CHECK(j["passed"] == true);
  }

  TEST_CASE("unknown family is a usage error listing the catalog") {
    const auto r = run_cli({"verify", "--family", "nonsense"});
    CHECK(r.code == 2);
    CHECK(r.err.find("g2-1-2") != std::string::npos);
    CHECK(r.out.empty());
  }

  TEST_CASE("usage errors") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"bogus"}).code == 2);
    CHECK(run_cli({"verify"}).code == 2);
    CHECK(run_cli({"spectrum", "-f", "g3-r", "--level", "1.5"}).code == 2);
    CHECK(run_cli({"spectrum", "-f", "g3-r", "--samples", "0"}).code == 2);
    CHECK(run_cli({"spectrum", "-f", "g3-r", "--json", "--csv"}).code == 2);
    CHECK(run_cli({"catalog", "--help"}).code == 0);
  }

  TEST_CASE("spectrum g2-1-2 at level 0") {
    const auto r = run_cli({"spectrum", "--family", "g2-1-2", "--level", "0", "--samples", "50"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& c = j["resolved_clusters"];
    REQUIRE(c.size() == 2);
    CHECK(c[0]["theta"].get<double>() == doctest::Approx(std::numbers::pi / 4));
    CHECK(c[0]["multiplicity"] == 1);
    CHECK(c[1]["theta"].get<double>() == doctest::Approx(3 * std::numbers::pi / 4));
    CHECK(c[1]["multiplicity"] == 2);
    CHECK(j["points"].size() == 50);
  }

  TEST_CASE("negative levels parse") {
    CHECK(run_cli({"spectrum", "-f", "g3-c", "--level", "-0.5", "-n", "3"}).code == 0);
  }

  TEST_CASE("a failed check exits 1") {
    const auto r = run_cli({"spectrum", "-f", "g3-r", "-n", "3", "--tol-spectral", "1e-300"});
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.out)["passed"] == false);
  }

  TEST_CASE("reports are byte-identical for identical configs") {
    for (const char* command : {"spectrum", "focal", "identity", "flow"}) {
      CAPTURE(command);
      const auto a = run_cli({command, "-f", "g3-h", "-n", "4", "--seed", "99"});
      const auto b = run_cli({command, "-f", "g3-h", "-n", "4", "--seed", "99"});
      CHECK(a.code == 0);
      CHECK(a.out == b.out);
    }
    CHECK(run_cli({"spectrum", "-f", "g3-h", "-n", "4", "--seed", "1"}).out !=
          run_cli({"spectrum", "-f", "g3-h", "-n", "4", "--seed", "2"}).out);
  }

  TEST_CASE("ISOPAR_SEED replaces the default seed") {
    ::setenv("ISOPAR_SEED", "4242", 1);
    const auto env = nlohmann::json::parse(run_cli({"spectrum", "-f", "g2-1-1", "-n", "2"}).out);
    const auto flag = nlohmann::json::parse(run_cli({"spectrum", "-f", "g2-1-1", "-n", "2", "--seed", "7"}).out);
    ::setenv("ISOPAR_SEED", "not-a-number", 1);
    const int bad = run_cli({"catalog"}).code;
    ::unsetenv("ISOPAR_SEED");
    CHECK(env["seed"] == 4242);
    CHECK(flag["seed"] == 7);
    CHECK(bad == 2);
    CHECK(nlohmann::json::parse(run_cli({"spectrum", "-f", "g2-1-1", "-n", "2"}).out)["seed"] == kDefaultSeed);
  }

  TEST_CASE("formats and output file") {
    const auto catalog = run_cli({"catalog", "--json"});
    CHECK(catalog.code == 0);
    CHECK(nlohmann::json::parse(catalog.out)["families"].size() == 9);
    const auto csv = run_cli({"spectrum", "-f", "g3-r", "-n", "2", "--csv"});
    CHECK(csv.out.rfind("sample,index,eigenvalue", 0) == 0);
    const auto text = run_cli({"identity", "-f", "g1-2", "-n", "2", "--text"});
    CHECK(text.out.find("result: PASS") != std::string::npos);
    const auto checks = run_cli({"flow", "-f", "g2-2-2", "-n", "2", "--csv"});
    CHECK(checks.out.rfind("check,value,tolerance,passed", 0) == 0);

    const auto path = std::filesystem::temp_directory_path() / "isopar_cli_report.json";
    const auto r = run_cli({"focal", "-f", "g2-1-2", "-n", "2", "-o", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    CHECK(nlohmann::json::parse(in)["command"] == "focal");
    std::filesystem::remove(path);
  }
}
