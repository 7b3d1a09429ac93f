#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlab/experiments.hpp"
#include "qlab/oracle.hpp"

using namespace qlab;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(csv);
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

// The CSV without its wall-clock column.
std::string strip_wall(const std::string& csv) {
  std::string out;
  for (const auto& row : csv_rows(csv)) {
    for (std::size_t k = 0; k + 1 < row.size(); ++k) out += row[k] + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  const json ok = {{"experiment", "gs_sweep"}, {"geometry", {{"kind", "chain"}, {"size", 4}}}, {"depths", {1, 2}}};
  CHECK_NOTHROW(parse_config(ok));
  const auto c = parse_config(ok);
  CHECK(c.size == std::vector<int>{4});
  CHECK(c.depths == std::vector<int>{1, 2});

  auto bad = [&](json j) { CHECK_THROWS_AS(parse_config(j), ConfigError); };
  bad(json::array());
  bad({{"geometry", {{"kind", "chain"}}}});
  bad({{"experiment", "nope"}});
  auto with = [&](const char* key, json v) {
    json j = ok;
    j[key] = v;
    return j;
  };
  bad(with("colour", "blue"));
  bad(with("depths", {0, 1}));
  bad(with("depths", "three"));
  bad(with("samples", 0));
  bad(with("ansatz", "prh_ising_classes"));
  bad(with("ansatz", {"conventional_ising", "conventional_ising"}));
  bad(with("ansatz", "prh_heisenberg"));
  bad(with("geometry", {{"kind", "hexagon"}, {"size", 4}}));
  bad(with("geometry", {{"kind", "chain"}, {"size", 30}}));
  bad(with("geometry", {{"kind", "chain"}, {"size", 4}, {"shape", "x"}}));
  bad(with("optimizer", {{"n_starts", 0}}));
  bad(with("optimizer", {{"gradient_mode", "magic"}}));
  bad(with("objective", "energy-ish"));
  bad(with("model", {{"kind", "tfim"}, {"lambda", "big"}}));
  bad({{"experiment", "disorder"}, {"model", {{"kind", "tfim"}}}});
  bad({{"experiment", "ghz_sweep"}, {"fixed_parameters", true}, {"geometry", {{"kind", "cross"}, {"size", 4}}}});
  bad({{"experiment", "lindblad"}, {"gammas", {-1.0}}});
  bad({{"experiment", "rydberg_check"}, {"m", 5}});
}

TEST_CASE("desk-scale defaults") {
  const auto d = parse_config({{"experiment", "disorder"}});
  CHECK(d.size == std::vector<int>{8});
  CHECK(d.samples == 10);
  CHECK(d.arms.size() == 2);
  CHECK(parse_config({{"experiment", "gs_sweep"}, {"full_size", true}}).size == std::vector<int>{12});
  const auto l = parse_config({{"experiment", "lindblad"}});
  CHECK(l.gammas.size() == 6);
}

TEST_CASE("ground-state sweep") {
  const auto c = parse_config({{"experiment", "gs_sweep"},
                               {"geometry", {{"kind", "chain"}, {"size", 4}, {"boundary", "periodic"}}},
                               {"depths", {1, 2}},
                               {"optimizer", {{"n_starts", 10}}}});
  const auto out = run_experiment(c);
  REQUIRE(out.records.size() == 2);
  CHECK(out.records[1].p == 2);
  CHECK(1.0 - out.records[1].fidelity <= 1e-8);
  CHECK(out.records[0].best_cost > 1e-3);
  const auto rows = csv_rows(out.csv);
  CHECK(rows.size() == 3);
  CHECK(out.csv.substr(0, out.csv.find('\n')) == record_csv_header);
}

TEST_CASE("row count and determinism") {
  const json j = {{"experiment", "disorder"},
                  {"geometry", {{"kind", "chain"}, {"size", 4}}},
                  {"model", {{"disorder", 1.0}}},
                  {"depths", {{"from", 1}, {"to", 3}}},
                  {"samples", 2},
                  {"seed", 4},
                  {"optimizer", {{"n_starts", 2}}}};
  const auto c = parse_config(j);
  const auto a = run_experiment(c);
  CHECK(csv_rows(a.csv).size() == 1 + 3 * 2 * 2);
  const auto b = run_experiment(c);
  CHECK(strip_wall(a.csv) == strip_wall(b.csv));

  // R is recomputable from the row's own fidelity columns.
  const auto rows = csv_rows(a.csv);
  for (std::size_t i = 1; i + 1 < rows.size(); i += 2) {
    REQUIRE(rows[i][8] == "conventional_ising");
    REQUIRE(rows[i + 1][8] == "prh_ising");
    CHECK(rows[i][11].empty());
    const double fc = std::strtod(rows[i][10].c_str(), nullptr);
    const double fp = std::strtod(rows[i + 1][10].c_str(), nullptr);
    CHECK(std::strtod(rows[i + 1][11].c_str(), nullptr) == improvement_ratio(fc, fp));
  }
  CHECK(a.sidecar["summary"].size() == 6);
}

TEST_CASE("zero disorder matches the uniform model") {
  const auto base = json{{"geometry", {{"kind", "chain"}, {"size", 4}}}, {"depths", {2}}, {"optimizer", {{"n_starts", 4}}}};
  json dj = base;
  dj["experiment"] = "disorder";
  dj["model"] = {{"disorder", 0.0}};
  dj["samples"] = 1;
  json uj = base;
  uj["experiment"] = "gs_sweep";
  const auto d = run_experiment(parse_config(dj));
  const auto u = run_experiment(parse_config(uj));
  REQUIRE(d.records.size() == 2);
  CHECK(d.records[0].fidelity == doctest::Approx(u.records[0].fidelity).epsilon(1e-8));
  CHECK(d.records[1].fidelity >= d.records[0].fidelity);
}

TEST_CASE("fixed-parameter GHZ sweep") {
  const auto c = parse_config({{"experiment", "ghz_sweep"}, {"fixed_parameters", true}});
  const auto out = run_experiment(c);
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].best_cost <= 1e-12);
  CHECK(out.records[0].iterations == 0);
  CHECK(out.records[0].p == 2);
  CHECK(out.records[0].n == 9);
}

TEST_CASE("heisenberg sweep") {
  const auto c = parse_config({{"experiment", "heisenberg_sweep"},
                               {"geometry", {{"kind", "chain"}, {"size", 4}, {"boundary", "periodic"}}},
                               {"ansatz", {"conventional_heisenberg", "prh_heisenberg"}},
                               {"depths", {1}},
                               {"objective", "energy"},
                               {"optimizer", {{"n_starts", 3}}}});
  const auto out = run_experiment(c);
  REQUIRE(out.records.size() == 2);
  CHECK(out.records[1].fidelity >= out.records[0].fidelity - 1e-9);
  CHECK(out.records[0].objective == "energy");
}

TEST_CASE("lindblad and rydberg experiments") {
  const auto l = run_experiment(parse_config({{"experiment", "lindblad"}, {"gammas", {0.0, 0.05}}, {"dt", 0.01}}));
  const auto rows = csv_rows(l.csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "gamma");
  CHECK(std::strtod(rows[1][1].c_str(), nullptr) <= 1e-5);  // RK4 error at this coarse step
  CHECK(std::strtod(rows[2][1].c_str(), nullptr) > 1e-3);
  CHECK(l.sidecar["fit"].is_null());

  const auto r = run_experiment(parse_config({{"experiment", "rydberg_check"}}));
  REQUIRE(r.records.size() == 3);
  for (const auto& rec : r.records) {
    CHECK(rec.best_cost <= 1e-10);
    CHECK(rec.extra["echo_deviation"].get<double>() <= 1e-10);
    CHECK(rec.extra["coupling_classes"].get<int>() == 3);
  }
}

TEST_CASE("outputs are written next to each other") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qlab_test_outputs";
  fs::remove_all(dir);
  auto c = parse_config({{"experiment", "ghz_sweep"}, {"fixed_parameters", true}});
  c.output = (dir / "sub" / "ghz.csv").string();
  write_outputs(c, run_experiment(c));
  CHECK(fs::exists(dir / "sub" / "ghz.csv"));
  CHECK_FALSE(fs::exists(dir / "sub" / "ghz.csv.tmp"));
  std::ifstream is(dir / "sub" / "ghz.json");
  const auto side = json::parse(is);
  CHECK(side["records"][0]["params"]["x"].size() == 4);
  CHECK(side["experiment"] == "ghz_sweep");
  fs::remove_all(dir);

  c.output = "/proc/definitely/not/writable.csv";
  CHECK_THROWS(write_outputs(c, run_experiment(c)));
}

TEST_CASE("shipped configs parse") {
  namespace fs = std::filesystem;
  int n = 0;
  for (const auto& e : fs::directory_iterator(fs::path(QLAB_SOURCE_DIR) / "configs")) {
    if (e.path().extension() != ".json") continue;
    std::ifstream is(e.path());
    CAPTURE(e.path().string());
    CHECK_NOTHROW(parse_config(json::parse(is)));
    ++n;
  }
  CHECK(n >= 5);
}
