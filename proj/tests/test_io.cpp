#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "kcsim/config.hpp"
#include "kcsim/csv.hpp"

using namespace kcsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kcsim_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KCSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-2.5e-7) == "-2.5e-07");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("csv round trip") {
  const fs::path dir = scratch("csv");
  CsvTable t{{"a[1]", "b, quoted"}, {{"1", "x"}, {"2.5", "y,z"}}};
  write_csv((dir / "t.csv").string(), t);
  const std::string raw = slurp(dir / "t.csv");
  CHECK(raw.find('\r') == std::string::npos);
  CHECK(raw.substr(0, 4) == "a[1]");
  const CsvTable back = read_csv((dir / "t.csv").string());
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK_THROWS_AS(read_csv((dir / "missing.csv").string()), Error);
}

TEST_CASE("csv appender checks headers") {
  const fs::path dir = scratch("append");
  const std::string path = (dir / "h.csv").string();
  {
    CsvAppender w(path, csv_schema::heatmap(), false);
    w.row({"0", "1", "2", "ok"});
    CHECK_THROWS_AS(w.row({"0"}), Error);
  }
  {
    CsvAppender w(path, csv_schema::heatmap(), true);
    w.row({"1", "1", "3", "ok"});
  }
  CHECK(read_csv(path).rows.size() == 2);
  CHECK_THROWS_AS(CsvAppender(path, csv_schema::levels(), true), Error);
}

TEST_CASE("schema headers carry units") {
  CHECK(csv_schema::trajectory() ==
        std::vector<std::string>{"t[hbar/Eh]", "P_left[1]", "P_right[1]", "overlap[1]", "trace[1]"});
  CHECK(csv_schema::heatmap() == std::vector<std::string>{"eps1[K]", "eps2[K]", "T_X[hbar/K]", "status"});
  CHECK(csv_schema::levels().front() == "level");
  CHECK(csv_schema::cscan().front() == "c[a0]");
  CHECK(csv_schema::table2().size() == 11);
}

TEST_CASE("config round trip and validation") {
  RunConfig cfg;
  cfg.system = "gc";
  cfg.c = 0.2;
  cfg.diss = {0.025, 0.05};
  cfg.engines = {"kc"};
  cfg.eps1 = {0.0, 4.0, 5};
  const nlohmann::json j = to_json(cfg);
  const RunConfig back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.system == "gc");
  CHECK(back.diss.kappa == 0.025);
  CHECK(back.eps1.n == 5);

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"sytem", "gc"}}), Error);
  try {
    config_from_json(nlohmann::json{{"sytem", "gc"}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("sytem") != std::string::npos);
    CHECK(e.code() == ErrorCode::Config);
  }
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"dim", "many"}}), Error);

  RunConfig bad;
  bad.M = 400;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = RunConfig{};
  bad.system = "nonesuch";
  CHECK_THROWS(validate(bad));
  bad = RunConfig{};
  bad.diss.kappa = -1.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("ranges") {
  const Range r = parse_range("0.05:0.5:10");
  CHECK(r.lo == 0.05);
  CHECK(r.n == 10);
  const std::vector<double> v = r.values();
  REQUIRE(v.size() == 10);
  CHECK(v.front() == 0.05);
  CHECK(v.back() == 0.5);
  CHECK(parse_range("2:2:1").values() == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_range("1:2"), Error);
  CHECK_THROWS_AS(parse_range("1:2:0"), Error);
  CHECK_THROWS_AS(parse_range("a:2:3"), Error);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(run_cli("spectra --system nonesuch -o " + dir.string()) == 2);
  CHECK(run_cli("spectra --dim abc") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("spectra --M 5") == 2);
  std::ofstream(dir / "bad.json") << R"({"system": "gc", "colour": 1})";
  CHECK(run_cli("--config " + (dir / "bad.json").string() + " spectra -o " + dir.string()) == 2);
}

TEST_CASE("cli spectra output") {
  const fs::path dir = scratch("spectra");
  REQUIRE(run_cli("spectra --system cis-cis --c 0.1 --dim 120 -o " + dir.string()) == 0);
  const CsvTable levels = read_csv((dir / "levels.csv").string());
  CHECK(levels.header == csv_schema::levels());
  CHECK(!levels.rows.empty());
  const nlohmann::json js = nlohmann::json::parse(slurp(dir / "spectra.json"));
  CHECK(js.contains("config"));
  CHECK(js["config"]["system"] == "cis-cis");
  CHECK(js["config"]["dim"] == 120);
}

TEST_CASE("cli dynamics is deterministic and trace preserving") {
  const fs::path a = scratch("dyn_a"), b = scratch("dyn_b");
  const std::string args = "dynamics --system cis-cis --engines dw,kc --dim 120 --horizon 300 --records 200 -o ";
  REQUIRE(run_cli(args + a.string()) == 0);
  REQUIRE(run_cli("--workers 1 " + args + b.string()) == 0);
  for (const char* f : {"trajectory_dw_c0.1.csv", "trajectory_kc_c0.1.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
    const CsvTable t = read_csv((a / f).string());
    CHECK(t.header == csv_schema::trajectory());
    CHECK(t.rows.size() > 100);
    for (const auto& row : t.rows) CHECK(std::abs(std::stod(row[4]) - 1.0) < 1e-9);
  }
  const nlohmann::json rates = nlohmann::json::parse(slurp(a / "rates.json"));
  CHECK(rates["config"]["horizon"] == 300.0);
}

TEST_CASE("cli flags override the config file") {
  const fs::path dir = scratch("override");
  std::ofstream(dir / "cfg.json") << R"({"system": "gc", "dim": 150, "c": 0.2})";
  REQUIRE(run_cli("--config " + (dir / "cfg.json").string() + " spectra --dim 100 -o " + dir.string()) == 0);
  const nlohmann::json js = nlohmann::json::parse(slurp(dir / "spectra.json"));
  CHECK(js["config"]["system"] == "gc");
  CHECK(js["config"]["dim"] == 100);
  CHECK(js["config"]["c"] == 0.2);
}

TEST_CASE("cli sweep smoke grid and resume") {
  const fs::path dir = scratch("sweep");
  const std::string args = "sweep --eps1 0:2:2 --eps2 4:6:2 --dim 40 --M 12 -o " + dir.string();
  REQUIRE(run_cli(args) == 0);
  const std::string first = slurp(dir / "heatmap.csv");
  const CsvTable t = read_csv((dir / "heatmap.csv").string());
  CHECK(t.header == csv_schema::heatmap());
  CHECK(t.rows.size() == 4);
  REQUIRE(run_cli(args + " --resume") == 0);
  CHECK(slurp(dir / "heatmap.csv") == first);
}

TEST_CASE("cli fit-potential") {
  const fs::path dir = scratch("fit");
  REQUIRE(run_cli("fit-potential --literature gc -o " + dir.string()) == 0);
  const nlohmann::json js = nlohmann::json::parse(slurp(dir / "fit_gc.json"));
  CHECK(js["k4"].get<double>() > 0.0);
  CHECK(js.contains("config"));
}
