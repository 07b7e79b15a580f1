#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace cli = ratbounds::cli;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bounds") {
  const Run a = run({"bounds", "--n", "4", "--sigma-f", "5"});
  REQUIRE(a.code == cli::kOk);
  const json j = json::parse(a.out);
  CHECK(j["unique"] == true);
  CHECK(j["theta_bar"] == 0.0);
  CHECK(j["x_e_bar"] == "-inf");
  CHECK(j["x_n_lo"] == "+inf");
  CHECK(j["bounds"]["x_n_hi"] == "+inf");
  CHECK(j["model"] == "main");

  const Run b = run({"bounds", "--n", "2", "--sigma-f", "0.0001"});
  REQUIRE(b.code == cli::kOk);
  CHECK(std::fabs(json::parse(b.out)["theta_bar"].get<double>() - 0.25) < 2e-2);

  const Run lap = run({"bounds", "--n", "4", "--sigma-f", "0.75", "--family", "laplace"});
  REQUIRE(lap.code == cli::kOk);
  CHECK(json::parse(lap.out)["iota_round"] == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"bounds", "--n", "4", "--sigma-f", "-1"}).code == cli::kUsage);
  CHECK(run({"bounds", "--n", "1"}).code == cli::kUsage);
  CHECK(run({"bounds", "--sigma-l", "0.2", "--family", "laplace"}).code == cli::kUsage);
  CHECK(run({"critical", "--n", "1"}).code == cli::kUsage);
  CHECK(run({"verify", "--suite", "bogus"}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"sweep", "--var", "sigma_f", "--points", "0"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("non-convergence exits 3 with the partial report") {
  const Run r = run({"bounds", "--n", "4", "--sigma-f", "0.001", "--max-rounds", "5"});
  CHECK(r.code == cli::kSolverFailed);
  const json j = json::parse(r.out);
  CHECK(j["converged"] == false);
  CHECK(j["rounds"] == 5);
}

TEST_CASE("critical") {
  const Run r = run({"critical", "--n", "4"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["sigma_f_hat"].get<double>() >= 0.2349964);
  CHECK(std::fabs(j["sigma_f_hat"].get<double>() - 0.2571219157773944) < 1e-8);
  const double two = json::parse(run({"critical", "--n", "2"}).out)["sigma_f_hat"];
  const double eight = json::parse(run({"critical", "--n", "8"}).out)["sigma_f_hat"];
  CHECK(two < eight);
  const json g = json::parse(run({"critical", "--n", "4", "--gamma", "1"}).out);
  CHECK(std::fabs(g["sigma_l_hat1"].get<double>() - 0.11720317446179865) < 1e-9);
  const json lap = json::parse(run({"critical", "--n", "4", "--family", "laplace", "--scale", "2"}).out);
  CHECK(lap["sigma_f_sufficient"].get<double>() == doctest::Approx(0.375));
}

TEST_CASE("sigma_f sweep shape") {
  const Run r = run({"sweep", "--var", "sigma_f", "--start", "0.01", "--stop", "1", "--points", "9", "--spacing", "log",
                     "--n", "4", "--jobs", "4"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 10);
  const int sf = column(rows[0], "sigma_f"), th = column(rows[0], "theta_hi"), hat = column(rows[0], "sigma_f_hat");
  REQUIRE(sf >= 0);
  REQUIRE(th >= 0);
  REQUIRE(hat >= 0);
  CHECK(rows[0][0] == "value");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = std::stod(rows[i][sf]), t = std::stod(rows[i][th]), h = std::stod(rows[i][hat]);
    if (s > h) CHECK(t == 0.0);
    else CHECK(t > 0.0);
  }
  CHECK(std::fabs(std::stod(rows[1][th]) - 0.375) < 1e-2);
  CHECK(r.out.rfind("# ratbounds sweep", 0) == 0);
}

TEST_CASE("n sweep reports increasing critical noise") {
  const Run r = run({"sweep", "--var", "n", "--start", "2", "--stop", "10", "--sigma-f", "0.5"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 10);
  const int hat = column(rows[0], "sigma_f_hat");
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][hat]) > std::stod(rows[i - 1][hat]));
}

TEST_CASE("residual curve crosses zero twice below the critical noise") {
  const Run r = run({"sweep", "--curve", "residual", "--n", "4", "--sigma-f", "0.1", "--start", "-1", "--stop", "1",
                     "--points", "2001", "--z", "0"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows[0] == std::vector<std::string>{"x", "lhs", "rhs", "residual"});
  int changes = 0;
  for (std::size_t i = 2; i < rows.size(); ++i)
    if ((std::stod(rows[i][3]) > 0.0) != (std::stod(rows[i - 1][3]) > 0.0)) ++changes;
  CHECK(changes == 2);
}

TEST_CASE("sweep files are byte-identical across runs and job counts") {
  const auto dir = std::filesystem::temp_directory_path() / "ratbounds_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  const std::vector<std::string> base{"sweep", "--var", "sigma_l", "--start", "0.2", "--stop", "0.6", "--points", "4",
                                      "--n", "3", "--sigma-f", "0.3", "--seed", "7"};
  auto args = base;
  args.insert(args.end(), {"--out", a.string(), "--jobs", "1"});
  REQUIRE(run(args).code == cli::kOk);
  args = base;
  args.insert(args.end(), {"--out", b.string(), "--jobs", "3"});
  REQUIRE(run(args).code == cli::kOk);
  const std::string sa = slurp(a);
  CHECK(!sa.empty());
  CHECK(sa == slurp(b));
  std::filesystem::remove_all(dir);
}

TEST_CASE("unwritable output exits 4") {
  const Run r = run({"sweep", "--var", "sigma_f", "--start", "0.5", "--stop", "1", "--points", "2", "--out",
                     "/nonexistent-dir/x.csv"});
  CHECK(r.code == cli::kUnwritable);
  CHECK(!r.err.empty());
}

TEST_CASE("verify reports per check") {
  std::ostringstream out;
  cli::VerifyOptions opt;
  opt.suite = "mc";
  opt.jobs = 4;
  const bool ok = cli::run_verify(opt, out);
  CHECK(ok);
  CHECK(out.str().find("PASS  mc determinism") != std::string::npos);
  std::ostringstream again;
  cli::run_verify(opt, again);
  CHECK(out.str() == again.str());
}

}
