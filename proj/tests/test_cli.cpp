#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "period_balance/cli.hpp"
#include "period_balance/period.hpp"

using namespace period_balance;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int code = run_cli(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  const auto d = std::filesystem::temp_directory_path() / "period_balance_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("help and usage errors") {
  const Run h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"period", "duffing", "--bogus"}).code == 2);
  CHECK(run({"period", "duffing", "--format", "xml"}).code == 2);
  const Run bad = run({"period", "bogus"});
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("error: parse: ", 0) == 0);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);
  CHECK(run({"period", "duffing", "--grid", "1:2"}).code == 2);
  CHECK(run({"period", "duffing", "--grid", "2:1:3:log"}).code == 3);
}

TEST_CASE("grid parsing") {
  const GridSpec g = parse_grid("1:100:3:log");
  const auto pts = g.points();
  REQUIRE(pts.size() == 3);
  CHECK(pts[1] == doctest::Approx(10).epsilon(1e-14));
  CHECK(pts.back() == 100);
  CHECK(parse_grid("0.5:2:4:linear").points()[1] == doctest::Approx(1).epsilon(1e-14));
  CHECK_THROWS(parse_grid("1:2:3:cubic"));
  CHECK_THROWS(parse_grid("1:2:1:log"));
  CHECK_THROWS(parse_grid("0:2:3:log"));
}

TEST_CASE("period table") {
  const Run r = run({"period", "duffing", "--grid", "0.5:4:4:linear"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["potential"] == "poly:m=2");
  REQUIRE(j["records"].size() == 4);
  for (const auto& rec : j["records"]) {
    CHECK(rec["T"].get<double>() == doctest::Approx(duffing_period(rec["A"].get<double>())).epsilon(1e-15));
  }
  const Run q = run({"period", "quintic:k=-1", "--grid", "0.5:4:4:linear", "--format", "csv"});
  REQUIRE(q.code == 0);
  CHECK(q.out.rfind("A,T,method,tol\n", 0) == 0);
  CHECK(std::count(q.out.begin(), q.out.end(), '\n') == 5);
  // Outside the period annulus.
  const Run a = run({"period", "gen:3=-1", "--grid", "0.5:2:3:linear"});
  CHECK(a.code == 3);
  CHECK(a.err.rfind("error: annulus: ", 0) == 0);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"compare", "quintic:k=-1", "-N", "1,2", "--grid", "0.2:2:5:log"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run({"hbm", "duffing", "-N", "3", "--grid", "0.1:10:6:log", "--format", "csv"});
  CHECK(c.out == run({"hbm", "duffing", "-N", "3", "--grid", "0.1:10:6:log", "--format", "csv"}).out);
}

TEST_CASE("tolerance from the environment and defaults from a config file") {
  ::setenv("PERIOD_BALANCE_TOL", "1e-9", 1);
  const json j = json::parse(run({"period", "duffing", "--grid", "1:2:2:linear"}).out);
  CHECK(j["records"][0]["tol"].get<double>() == 1e-9);
  // The flag wins over the environment.
  const json k = json::parse(run({"period", "duffing", "--grid", "1:2:2:linear", "--tol", "1e-11"}).out);
  CHECK(k["records"][0]["tol"].get<double>() == 1e-11);
  ::unsetenv("PERIOD_BALANCE_TOL");

  const auto cfg = scratch_dir() / "defaults.ini";
  std::ofstream(cfg) << "grid=1:3:3:linear\nformat=csv\n";
  const Run r = run({"--config", cfg.string(), "period", "duffing"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("A,T,method,tol\n1,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("series output") {
  const json e = json::parse(run({"taylor", "duffing", "--order", "8"}).out);
  CHECK(e["source"] == "exact");
  CHECK(e["coeffs"][4] == "57/128");
  CHECK(e["coeffs"][8] == "30345/131072");
  const json h = json::parse(run({"taylor", "duffing", "-N", "1", "--order", "4"}).out);
  CHECK(h["source"] == "hbm");
  CHECK(h["coeffs"][4] == "27/64");
  const json g = json::parse(run({"taylor", "gen:2=1,3=1", "-N", "2", "--order", "2"}).out);
  CHECK(g["coeffs"][2] == "1/12");
  CHECK(run({"taylor", "rat:k=1,m=2.5", "--order", "4"}).code == 3);
}

TEST_CASE("tail fit pipeline") {
  const Run table = run({"period", "duffing", "--grid", "100:100000:10:log"});
  REQUIRE(table.code == 0);
  const Run fit = run({"asymptote", "--fit"}, table.out);
  REQUIRE(fit.code == 0);
  const json j = json::parse(fit.out);
  CHECK(j["fit"]["C"].get<double>() == doctest::Approx(7.4163).epsilon(1e-3));
  CHECK(j["fit"]["exponent"].get<double>() == doctest::Approx(-1).epsilon(1e-3));
  // CSV input works too.
  const Run csv = run({"period", "duffing", "--grid", "100:100000:10:log", "--format", "csv"});
  CHECK(json::parse(run({"asymptote", "--fit"}, csv.out).out)["fit"]["C"] == j["fit"]["C"]);
  CHECK(run({"asymptote", "--fit"}, "not data").code != 0);
  // Default grid sits at large A.
  const json d = json::parse(run({"asymptote", "duffing"}).out);
  CHECK(d["fit"]["C"].get<double>() == doctest::Approx(d["exact_tail"]["C"].get<double>()).epsilon(1e-3));
  const json l = json::parse(run({"asymptote", "duffing", "-N", "2"}).out);
  CHECK(l["limit"]["C"].get<double>() == doctest::Approx(7.40178069).epsilon(1e-8));
}

TEST_CASE("monotonicity, critical periods and families") {
  CHECK(json::parse(run({"monotonicity", "poly:m=3"}).out)["verdict"] == "decreasing");
  CHECK(json::parse(run({"monotonicity", "rat:k=1,m=2"}).out)["verdict"] == "increasing");
  CHECK(json::parse(run({"monotonicity", "quintic:k=-1"}).out)["verdict"] == "inconclusive");
  const json c = json::parse(run({"critical", "quintic:k=-1"}).out);
  REQUIRE(c["critical"].size() == 1);
  CHECK(c["critical"][0]["A"].get<double>() == doctest::Approx(0.772747).epsilon(1e-5));
  CHECK(c["critical"][0]["kind"] == "max");
  const json f = json::parse(run({"families", "list"}).out);
  std::set<std::string> ids;
  for (const auto& fam : f["families"]) ids.insert(fam["id"].get<std::string>());
  CHECK(ids.count("poly"));
  CHECK(ids.count("rat"));
  CHECK(ids.count("quintic"));
  CHECK(ids.count("gen"));
  CHECK(run({"families", "show"}).code != 0);
}

TEST_CASE("compare writes reports and plot data") {
  const auto dir = scratch_dir();
  const auto report = dir / "report.json";
  const auto plot = dir / "curve.csv";
  std::filesystem::remove(report);
  const Run r = run({"compare", "duffing", "-N", "1,2", "--grid", "0.1:1:4:log", "-o", report.string(), "--plot-data",
                     plot.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const json j = json::parse(slurp(report));
  REQUIRE(j["orders"].size() == 2);
  CHECK(j["orders"][0]["local_match_order"] == 4);
  CHECK(j["orders"][1]["local_match_order"] == 6);
  for (const char* name : {"curve.N1.csv", "curve.N2.csv"}) {
    const std::string data = slurp(dir / name);
    CAPTURE(name);
    CHECK(std::count(data.begin(), data.end(), '\n') >= 4);
  }
}
