#include "p14/cli/commands.hpp"
#include "p14/cli/config.hpp"
#include "p14/state_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace p14;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("p14_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

json class2_config() {
  return {{"class", "II"},
          {"s", 0},
          {"grid", {{"spatial", {{{"points", 32}, {"extent", 16.0}}}}, {"mass", {{"points", 16}, {"extent", 8.0}}}}},
          {"packet", {{"width", {1.0, 0.5}}, {"momentum", {0.5, 0.0}}}},
          {"times", {0.0, 1.0, 2.0}}};
}

}  // namespace

TEST_CASE("verify") {
  const Run ok = run_cli({"verify"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("result PASS") != std::string::npos);

  const Run sa = run_cli({"verify", "--realization", "spinor-affine"});
  CHECK(sa.code == 0);

  const Run bad = run_cli({"verify", "--corrupt", "M12"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("offending [M12,P1]") != std::string::npos);

  const Run js = run_cli({"--json", "verify"});
  const json report = json::parse(js.out);
  CHECK(report["command"] == "verify");
  CHECK(report["passed"] == true);
  CHECK(report["results"]["faithfulness"]["pairs"].size() == 105);
  CHECK(report["max_deviations"]["commutator"].get<double>() < 1e-12);

  CHECK(run_cli({"verify", "--realization", "nope"}).code == 2);
  CHECK(run_cli({"verify", "--corrupt", "M55"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("classify") {
  const Run a = run_cli({"classify", "--p", "1,0,0,0,0"});
  CHECK(a.code == 0);
  CHECK(a.out.find("class ClassI") != std::string::npos);
  CHECK(a.out.find("kappa 1\n") != std::string::npos);

  CHECK(run_cli({"classify", "--p", "1,0,0,0,1"}).out.find("class ClassII") != std::string::npos);
  const Run c = run_cli({"classify", "--p", "0,0,0,0,2"});
  CHECK(c.out.find("class ClassIII") != std::string::npos);
  CHECK(c.out.find("eta 2\n") != std::string::npos);
  CHECK(run_cli({"classify", "--p", "0,0,0,0,0"}).out.find("class ClassIV") != std::string::npos);

  CHECK(run_cli({"classify", "--p", "1,2,3"}).code == 2);
  CHECK(run_cli({"classify", "--p", "1,0,0,0,x"}).code == 2);
  CHECK(run_cli({"classify", "--p", "1,0,0,0,nan"}).code == 2);
  CHECK(run_cli({"classify", "--p", "1,0,0,0,0,"}).code == 2);
  CHECK(run_cli({"classify"}).code == 2);

  const json j = json::parse(run_cli({"--json", "classify", "--p", "2,0,0,0,0"}).out);
  CHECK(j["results"]["class"] == "ClassI");
  CHECK(j["results"]["kappa"].get<double>() == 2.0);
}

TEST_CASE("rep-table") {
  const fs::path dir = scratch("rep");
  const Run r = run_cli({"--out", dir.string(), "rep-table"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "s,I,dim,S2,I2,residual");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 9);
  CHECK(r.out.find("0.5,1,6,0.75") != std::string::npos);
  CHECK(slurp(dir / "rep_table.csv") == r.out);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(run_cli({"rep-table", "--max-2s", "-1"}).code == 2);
}

TEST_CASE("evolve") {
  const fs::path dir = scratch("evolve");
  const fs::path cfg = write_config(dir, class2_config());
  const Run r = run_cli({"--out", (dir / "out").string(), "evolve", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  for (int i = 0; i < 3; ++i) {
    const fs::path file = dir / "out" / ("state_00" + std::to_string(i) + ".p14");
    REQUIRE(fs::exists(file));
    const StateFile st = read_state_file(file);
    CHECK(std::abs(st.psi.norm() - 1.0) < 1e-12);
    CHECK(st.time == static_cast<double>(i));
  }
  const json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["command"] == "evolve");
  CHECK(report["results"]["steps"].size() == 3);
  CHECK(report["max_deviations"]["norm"].get<double>() < 1e-12);
  CHECK_FALSE(report.contains("wall_time_s"));

  SUBCASE("packet at rest on the particle block is stationary in x") {
    json j = class2_config();
    j["class"] = "I";
    j["kappa"] = 1.0;
    j["packet"].erase("momentum");
    j["grid"]["spatial"][0] = {{"points", 128}, {"extent", 64.0}};
    j["times"] = {0.0, 2.0};
    const fs::path c2 = write_config(dir, j);
    REQUIRE(run_cli({"--out", (dir / "rest").string(), "evolve", "--config", c2.string()}).code == 0);
    const json rep = json::parse(slurp(dir / "rest" / "report.json"));
    const auto& steps = rep["results"]["steps"];
    CHECK(std::abs(steps[0]["position_mean"][0].get<double>() - steps[1]["position_mean"][0].get<double>()) < 1e-9);
    CHECK(steps[0]["position_mean"][0].get<double>() == doctest::Approx(32.0));
  }

  SUBCASE("config errors exit 2") {
    json j = class2_config();
    j["colour"] = "red";
    CHECK(run_cli({"--out", (dir / "x").string(), "evolve", "--config", write_config(dir, j).string()}).code == 2);
    j = class2_config();
    j["kappa"] = 1.0;  // not a class II key
    CHECK(run_cli({"--out", (dir / "x").string(), "evolve", "--config", write_config(dir, j).string()}).code == 2);
    j = class2_config();
    j["grid"]["mass"]["points"] = 12;
    CHECK(run_cli({"--out", (dir / "x").string(), "evolve", "--config", write_config(dir, j).string()}).code == 2);
    j = class2_config();
    j.erase("times");
    CHECK(run_cli({"--out", (dir / "x").string(), "evolve", "--config", write_config(dir, j).string()}).code == 2);
    CHECK(run_cli({"evolve", "--config", (dir / "missing.json").string()}).code == 2);
  }

  SUBCASE("class III reject exits 3") {
    json j = class2_config();
    j["class"] = "III";
    j.erase("s");
    j["eta"] = 2.0;
    j["policy"] = "reject";
    const fs::path c3 = write_config(dir, j);
    CHECK(run_cli({"--out", (dir / "r").string(), "evolve", "--config", c3.string()}).code == 3);
    CHECK(run_cli({"--out", (dir / "r").string(), "--tol", "1", "evolve", "--config", c3.string()}).code == 0);
    j["policy"] = "project-out";
    const Run p = run_cli({"--out", (dir / "p").string(), "evolve", "--config", write_config(dir, j).string()});
    CHECK(p.code == 0);
    CHECK(p.out.find("truncated_norm") != std::string::npos);
  }
}

TEST_CASE("spectrum") {
  const fs::path dir = scratch("spectrum");
  json j = class2_config();
  j["class"] = "I";
  j["kappa"] = 1.0;
  j.erase("times");
  j["bins"] = 16;
  const fs::path cfg = write_config(dir, j);
  const Run r = run_cli({"--out", dir.string(), "spectrum", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "spectrum.csv");
  CHECK(csv.rfind("m,density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(std::abs(report["results"]["integral"].get<double>() - 1.0) < 1e-9);
  CHECK(report["results"]["m_lower"].get<double>() == doctest::Approx(1.0));

  j.erase("bins");
  CHECK(run_cli({"--out", dir.string(), "spectrum", "--config", write_config(dir, j).string()}).code == 2);
}

TEST_CASE("runs are byte-identical") {
  const fs::path dir = scratch("repro");
  json j = class2_config();
  j["packet"]["noise"] = 0.1;
  const fs::path cfg = write_config(dir, j);
  const std::string exe = P14_CLI_PATH;
  for (const std::string run : {"a", "b"}) {
    const std::string cmd = "\"" + exe + "\" --out \"" + (dir / run).string() + "\" --seed 7 evolve --config \"" +
                            cfg.string() + "\" > \"" + (dir / (run + ".txt")).string() + "\"";
    REQUIRE(std::system(cmd.c_str()) == 0);
  }
  for (const std::string f : {"report.json", "state_000.p14", "state_001.p14", "state_002.p14"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));

  // A different seed changes the noisy packet.
  const std::string cmd = "\"" + exe + "\" --out \"" + (dir / "c").string() + "\" --seed 8 evolve --config \"" +
                          cfg.string() + "\" > /dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(slurp(dir / "a" / "state_000.p14") != slurp(dir / "c" / "state_000.p14"));
}
