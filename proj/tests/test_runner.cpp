#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mqst/runner.hpp"

using namespace mqst;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// Cell-by-cell comparison; numeric cells may differ by `tol`.
void check_csv_close(const std::string& got, const std::string& want, double tol) {
  const auto a = split_csv(got), b = split_csv(want);
  REQUIRE(a.size() == b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    REQUIRE(a[r].size() == b[r].size());
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      if (a[r][c] == b[r][c]) continue;
      std::size_t used_a = 0, used_b = 0;
      double x = 0, y = 0;
      try {
        x = std::stod(a[r][c], &used_a);
        y = std::stod(b[r][c], &used_b);
      } catch (const std::exception&) {
        FAIL("row " << r << " column " << c << ": '" << a[r][c] << "' vs '" << b[r][c] << "'");
      }
      INFO("row " << r << " column " << c);
      CHECK(std::abs(x - y) <= tol);
    }
  }
}

const std::filesystem::path kData = MQST_TEST_DATA_DIR;

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("table rendering") {
  Table t;
  t.columns = {"a", "b", "c", "d"};
  t.add_row({std::int64_t{3}, 0.1, true, std::string("omega0")});
  t.add_row({std::int64_t{-1}, 2.0, false, std::string("x")});
  CHECK(render(t, OutputFormat::Csv) == "a,b,c,d\n3,0.10000000000000001,1,omega0\n-1,2,0,x\n");
  CHECK(render(t, OutputFormat::Json) ==
        "[\n  {\"a\": 3, \"b\": 0.10000000000000001, \"c\": true, \"d\": \"omega0\"},\n"
        "  {\"a\": -1, \"b\": 2, \"c\": false, \"d\": \"x\"}\n]\n");
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
}

TEST_CASE("evolve table layout") {
  auto c = load_config((kData / "small_evolve.json").string());
  const Table t = evolve_table(c);
  CHECK(t.columns == std::vector<std::string>{"kick_index", "time", "physical_time_ps", "fidelity_omega0",
                                              "fidelity_omega1", "fidelity_omega2", "classical_threshold"});
  REQUIRE(t.rows.size() == std::size_t(c.drive.n_kicks + 1));
  CHECK(std::get<double>(t.rows[0][3]) == 0.5);
  CHECK(std::get<double>(t.rows[0][4]) == 0.0);
  CHECK(std::get<double>(t.rows[0][5]) == 0.5);
  CHECK(std::get<double>(t.rows[3][1]) == doctest::Approx(3 * c.drive.tau));
  CHECK(std::get<double>(t.rows[3][2]) == doctest::Approx(1.5 * c.drive.tau));

  c.output.physical_time_column = false;
  CHECK(evolve_table(c).columns.size() == 6);
}

TEST_CASE("evolve output matches the golden file") {
  const auto c = load_config((kData / "small_evolve.json").string());
  check_csv_close(render(run_table(c), OutputFormat::Csv), slurp(kData / "small_evolve.csv"), 1e-10);
}

TEST_CASE("sweep output matches the golden file") {
  const auto c = load_config((kData / "small_sweep.json").string());
  const Table t = run_table(c);
  CHECK(t.columns ==
        std::vector<std::string>{"grid_value", "state", "max_fidelity", "argmax_tau", "argmax_kicks",
                                 "out_of_range_flag"});
  check_csv_close(render(t, OutputFormat::Csv), slurp(kData / "small_sweep.csv"), 1e-10);
}

TEST_CASE("periodogram table is one-sided with a single dominant bin") {
  auto c = load_config((kData / "small_evolve.json").string());
  c.run.mode = RunMode::Periodogram;
  const Table t = run_table(c);
  const std::size_t samples = std::size_t(c.drive.n_kicks + 1);
  CHECK(t.rows.size() == samples / 2 + 1);
  int dominant = 0;
  for (const auto& row : t.rows) {
    CHECK(std::get<double>(row[1]) >= 0.0);
    dominant += std::get<bool>(row[3]) ? 1 : 0;
  }
  CHECK(dominant == 1);
  CHECK_FALSE(std::get<bool>(t.rows[0][3]));
}

TEST_CASE("files receive exactly the rendered text") {
  auto c = load_config((kData / "small_sweep.json").string());
  const auto path = std::filesystem::temp_directory_path() / "mqst_runner_test.json";
  c.output.path = path.string();
  c.output.format = OutputFormat::Json;
  run(c);
  CHECK(slurp(path) == render(run_table(c), OutputFormat::Json));
  std::filesystem::remove(path);
  CHECK_THROWS(write_table(Table{}, OutputFormat::Csv, "/nonexistent-dir/x.csv"));
}

}
