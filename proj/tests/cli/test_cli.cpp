#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monolab_app/cli.hpp"
#include "monolab_app/runner.hpp"
#include "monolab_app/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using monolab::app::Json;

namespace {

const fs::path kScenarios = MONOLAB_SCENARIO_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = monolab::app::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("monolab-cli-" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("classify scenario") {
    TempDir dir("classify");
    const Run r = cli({"run", (kScenarios / "single_point.json").string(), "--out", dir.str()});
    CHECK(r.code == 0);
    const Json report = Json::parse(slurp(dir.path / "report.json"));
    CHECK(report["format"] == "monolab-report");
    CHECK(report["schema_version"] == monolab::app::kReportSchemaVersion);
    const Json& c = report["probes"][0]["result"]["classification"];
    CHECK(c["representable"] == true);
    CHECK(c["maximal"] == false);
    CHECK(r.out.find("representable=true") != std::string::npos);
  }

  TEST_CASE("field and trace export") {
    TempDir dir("export");
    REQUIRE(cli({"run", (kScenarios / "single_point.json").string(), "--out", dir.str()}).code == 0);
    const Run f = cli({"export-field", "origin.phi_star", "--dir", dir.str()});
    CHECK(f.code == 0);
    const auto rows = lines(f.out);
    REQUIRE(rows.size() == 442);
    CHECK(rows[0] == "x[0],xstar[0],value");

    const Run file = cli({"export-field", "origin.phi", "--dir", dir.str(), "-o", (dir.path / "phi.csv").string()});
    CHECK(file.code == 0);
    CHECK(lines(slurp(dir.path / "phi.csv")).size() == 442);

    CHECK(cli({"export-field", "nope.phi", "--dir", dir.str()}).code == 4);
    CHECK(cli({"export-trace", "nope", "--dir", dir.str()}).code == 4);
    CHECK(cli({"export-field", "origin.phi", "--dir", (dir.path / "missing").string()}).code == 4);
  }

  TEST_CASE("trace export") {
    TempDir dir("trace");
    REQUIRE(cli({"run", (kScenarios / "alternating.json").string(), "--out", dir.str(), "--horizon", "200"}).code == 0);
    const Json report = Json::parse(slurp(dir.path / "report.json"));
    std::string id;
    for (const auto& p : report["probes"]) {
      if (!p["traces"].empty()) {
        id = p["traces"][0]["id"].get<std::string>();
        break;
      }
    }
    REQUIRE_FALSE(id.empty());
    const Run t = cli({"export-trace", id, "--dir", dir.str()});
    CHECK(t.code == 0);
    const auto rows = lines(t.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == "n,x_n[0],residual,dist_to_x");
  }

  TEST_CASE("csv files written on request") {
    TempDir dir("csv");
    REQUIRE(cli({"run", (kScenarios / "single_point.json").string(), "--out", dir.str(), "--fields"}).code == 0);
    CHECK(fs::exists(dir.path / "fields" / "origin.phi_star.csv"));
  }

  TEST_CASE("unknown operator is a schema error naming the probe") {
    TempDir dir("schema");
    write(dir.path / "bad.json", R"({
      "name": "bad",
      "probes": [{"id": "sum1", "kind": "varsum", "t1": "zz", "t2": "zz", "point": {"x": [0], "xstar": [0]}}]
    })");
    const Run r = cli({"run", (dir.path / "bad.json").string(), "--out", dir.str()});
    CHECK(r.code == 2);
    CHECK(r.err.find("sum1") != std::string::npos);
    CHECK(r.err.find("zz") != std::string::npos);
  }

  TEST_CASE("usage errors") {
    CHECK(cli({"run", (kScenarios / "single_point.json").string(), "--horizon", "0"}).code == 2);
    CHECK(cli({"bogus"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"run", "/nonexistent/scenario.json"}).code == 2);
    const Run v = cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(monolab::app::tool_version()) != std::string::npos);
  }

  TEST_CASE("scenario round trip") {
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
      CAPTURE(entry.path().string());
      const monolab::app::Scenario s = monolab::app::load_scenario(entry.path().string());
      const std::string once = monolab::app::to_json(s).dump();
      const std::string twice = monolab::app::to_json(monolab::app::parse_scenario(Json::parse(once))).dump();
      CHECK(once == twice);
    }
  }

  TEST_CASE("reports are deterministic") {
    TempDir a("det-a"), b("det-b");
    const std::string scenario = (kScenarios / "disjoint_cones.json").string();
    REQUIRE(cli({"run", scenario, "--out", a.str(), "--horizon", "500"}).code == 0);
    REQUIRE(cli({"run", scenario, "--out", b.str(), "--horizon", "500", "--jobs", "4"}).code == 0);
    CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));
  }

  TEST_CASE("examples listing") {
    const Run r = cli({"examples", "--list"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() >= 4);
    CHECK(cli({"examples", "--filter", "no-such-example"}).code == 4);
  }

  TEST_CASE("fast examples pass") {
    const Run r = cli({"examples", "--filter", "single-point"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS single-point") != std::string::npos);
  }
}
