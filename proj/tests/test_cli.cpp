#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(MOLLIKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mollikit_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("curve shape") {
  const auto out = scratch("curve.csv");
  REQUIRE(run("curve --loss relu --kernel gaussian --m 2,5 --grid -2:2:0.5 --out " + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == std::vector<std::string>{"u", "rho", "rho_2", "rho_5"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == 4);
}

TEST_CASE("curve values at the kink and in the exactness region") {
  const auto out = scratch("curve_abs.csv");
  REQUIRE(run("curve --loss abs --kernel bump --m 10 --grid -2:2:0.5 --out " + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 10);
  CHECK(std::stod(rows[5][0]) == 0.0);
  CHECK(std::stod(rows[5][1]) == 0.0);
  CHECK(std::abs(std::stod(rows[5][2]) - 0.3344539977099753 / 10.0) < 1e-11);

  const auto relu = scratch("curve_relu.csv");
  REQUIRE(run("curve --loss relu --kernel bump --m 10 --grid 1.5:1.5:1 --out " + relu.string()) == 0);
  const auto r = read_csv(relu);
  CHECK(std::abs(std::stod(r[1][2]) - 1.5) < 1e-12);
}

TEST_CASE("rate output") {
  const auto out = scratch("rate.csv");
  REQUIRE(run("rate --loss abs --kernel bump --m 10,20 --out " + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"m", "sup_error"});
  const double ratio = std::stod(rows[1][1]) / std::stod(rows[2][1]);
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-6));

  const auto huber = scratch("rate_huber.csv");
  REQUIRE(run("rate --loss huber:1 --kernel bump --m 10,20 --grid -0.9:0.9:0.001 --out " + huber.string()) == 0);
  const auto h = read_csv(huber);
  CHECK(std::stod(h[1][1]) / std::stod(h[2][1]) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("usage errors exit with 2") {
  const auto out = scratch("bad.csv").string();
  CHECK(run("curve --loss l2 --m 2 --grid -1:1:0.5 --out " + out) == 2);
  CHECK(run("curve --loss check:2 --m 2 --grid -1:1:0.5 --out " + out) == 2);
  CHECK(run("curve --loss abs --m 2 --grid -1:1 --out " + out) == 2);
  CHECK(run("rate --loss abs --m \"\" --out " + out) == 2);
  CHECK(run("rate --loss abs --out " + out) == 2);
  CHECK(run("curve --loss abs --m 0 --grid -1:1:0.5 --out " + out) == 2);
  CHECK(run("curve --loss abs --m 2 --grid -1:1:0.5 --bogus 1 --out " + out) == 2);
  CHECK(run("") == 2);
  CHECK(run("simulate --config /nonexistent.json --out " + out) == 2);
  const auto bad = scratch("bad.json");
  write(bad, "{\"n\": 100, \"tau\": 3}");
  CHECK(run("simulate --config " + bad.string() + " --out " + out) == 2);
  write(bad, "{not json");
  CHECK(run("mad --config " + bad.string() + " --out " + out) == 2);
}

TEST_CASE("simulate end to end, deterministic across reruns and thread counts") {
  const auto cfg = scratch("sim.json");
  write(cfg, R"({"n": 60, "M": 10, "tau": 0.3, "error_dist": "StudentT4", "m_list": [5, 10, 15],
                 "h_list": [0.1, 0.5, 0.9], "base_seed": 11, "kernel": "bump"})");
  const auto a = scratch("sim_a.json");
  const auto b = scratch("sim_b.json");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("--threads 1 simulate --config " + cfg.string() + " --out " + b.string()) == 0);
  auto ja = nlohmann::json::parse(slurp(a));
  auto jb = nlohmann::json::parse(slurp(b));
  ja.erase("timestamp");
  jb.erase("timestamp");
  CHECK(ja.dump() == jb.dump());
  CHECK(ja["cells"][0]["replications"].size() == 10);
  CHECK(ja["cells"][0]["rmse_m"].size() == 3);

  const auto table = read_csv(scratch("sim_a.csv"));
  REQUIRE(table.size() == 8);
  CHECK(table[0][2] == "StudentT4/tau=0.3/n=60");
  CHECK(table[1][0] == "RMSE_tau");
}

TEST_CASE("seed override through the environment") {
  const auto cfg = scratch("seed.json");
  write(cfg, R"({"n": 30, "M": 2, "m_list": [5], "h_list": [0.5], "base_seed": 1})");
  const auto a = scratch("seed_a.json");
  const auto b = scratch("seed_b.json");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("mad --config " + cfg.string() + " --out " + b.string()) == 0);
  const auto c = scratch("seed_c.json");
  const std::string cmd = "MOLLIKIT_SEED=99 " + std::string(MOLLIKIT_CLI_PATH) + " simulate --config " + cfg.string() +
                          " --out " + c.string() + " >/dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto ja = nlohmann::json::parse(slurp(a));
  const auto jc = nlohmann::json::parse(slurp(c));
  CHECK(jc["config"]["base_seed"] == 99);
  CHECK(ja["cells"][0]["replications"][0]["seed"] != jc["cells"][0]["replications"][0]["seed"]);
  CHECK(nlohmann::json::parse(slurp(b))["experiment"] == "mad");
}

TEST_CASE("solver failures exit with 3") {
  const auto cfg = scratch("fail.json");
  write(cfg, R"({"n": 30, "M": 3, "m_list": [5], "h_list": [0.5]})");
  CHECK(run("simulate --config " + cfg.string() + " --max-iter 1 --grad-tol 1e-30 --out " +
            scratch("fail_out.json").string()) == 3);
}

TEST_CASE("diagnose writes one row per n") {
  const auto out = scratch("diag.csv");
  REQUIRE(run("diagnose --n 50,200 --reps 8 --m 5 --out " + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "n");
  CHECK(rows[1][0] == "50");
  CHECK(run("diagnose --n 8 --reps 2 --out " + out.string()) == 2);
}
