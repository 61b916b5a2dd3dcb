#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spca/formulation.hpp"
#include "test_util.hpp"

#ifndef SPCA_CLI_PATH
#error "SPCA_CLI_PATH must point at the built executable"
#endif

using nlohmann::json;
using namespace spca;
namespace tu = spca::testutil;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SPCA_CLI_PATH) + " " + args + " 2> cli_stderr.txt";
  const int raw = std::system(cmd.c_str());
#ifdef _WIN32
  return raw;
#else
  return WEXITSTATUS(raw);
#endif
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_csv_matrix(const std::string& name, const DataMatrix& A) {
  const std::string path = std::string("cli_test_") + name;
  std::ofstream out(path);
  out.precision(17);
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (j) out << ',';
      out << A.entry(i, j);
    }
    out << '\n';
  }
  return path;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) lines += c == '\n';
  return lines;
}

}  // namespace

TEST_CASE("solve: JSON report contract") {
  const auto path = write_csv_matrix("a.csv", tu::random_dense(12, 8, 42));
  const int rc = run_cli("solve --input " + path +
                         " --format csv --s 3 --starts 16 --strategy otf"
                         " --batch 4 --seed 11 --output cli_out.json");
  CHECK(rc == 0);
  const json j = json::parse(slurp("cli_out.json"));
  CHECK(j["formulation"]["variance"] == "l2");
  CHECK(j["formulation"]["mode"] == "constraint");
  CHECK(j["formulation"]["s"] == 3.0);
  CHECK(j["n"] == 12);
  CHECK(j["p"] == 8);
  CHECK(j["starts"] == 16);
  CHECK(j["batch"] == 4);
  CHECK(j["per_start"].size() == 16);
  CHECK(j["best"]["status"] == "converged");
  CHECK(j["best"]["nnz"].get<int>() <= 3);
  CHECK(j["best"]["loading"].size() == j["best"]["nnz"].get<std::size_t>());
  const double evr = j["explained_variance_ratio"].get<double>();
  CHECK(evr > 0.0);
  CHECK(evr <= 1.0);

  // reported objective matches a library re-evaluation of the loading
  DataMatrix A = load_matrix(path, MatrixFormat::csv);
  std::vector<double> x(8, 0.0);
  for (const auto& [key, value] : j["best"]["loading"].items())
    x[std::stoi(key)] = value.get<double>();
  const Formulation form = Formulation::from_row(1, 3.0);
  CHECK(std::abs(objective(form, A, x) - j["best"]["objective"].get<double>()) <=
        1e-10);

  // best objective dominates the per-start list
  for (const auto& r : j["per_start"])
    CHECK(r["objective"].get<double>() <=
          j["best"]["objective"].get<double>() + 1e-15);

  std::remove(path.c_str());
  std::remove("cli_out.json");
  std::remove("cli_stderr.txt");
}

TEST_CASE("solve: reports are deterministic apart from wall time") {
  const auto path = write_csv_matrix("b.csv", tu::random_dense(10, 9, 43));
  const std::string args = "solve --input " + path +
                           " --format csv --mode penalty --gamma 0.1"
                           " --starts 8 --strategy bat --batch 2 --seed 3";
  CHECK(run_cli(args + " --output cli_r1.json") == 0);
  CHECK(run_cli(args + " --output cli_r2.json") == 0);
  json a = json::parse(slurp("cli_r1.json"));
  json b = json::parse(slurp("cli_r2.json"));
  a.erase("wall_time");
  b.erase("wall_time");
  CHECK(a == b);
  std::remove(path.c_str());
  std::remove("cli_r1.json");
  std::remove("cli_r2.json");
  std::remove("cli_stderr.txt");
}

TEST_CASE("solve: input validation exits with code 2") {
  const auto path = write_csv_matrix("c.csv", tu::random_dense(4, 4, 44));
  CHECK(run_cli("solve --input " + path + " --format csv --s 0") == 2);
  CHECK(run_cli("solve --input " + path + " --format csv --s 5") == 2);
  CHECK(run_cli("solve --input " + path +
                " --format csv --mode penalty") == 2);  // gamma unset
  CHECK(run_cli("solve --input no_such_file.csv --format csv --s 1") == 2);
  CHECK(run_cli("solve --format csv --s 1") == 2);  // --input required
  const std::string err = slurp("cli_stderr.txt");
  CHECK(!err.empty());
  std::remove(path.c_str());
  std::remove("cli_stderr.txt");
}

TEST_CASE("variance-sweep: one CSV row per (param, start)") {
  const auto path = write_csv_matrix("d.csv", tu::random_dense(10, 6, 45));
  const int rc = run_cli("variance-sweep --input " + path +
                         " --format csv --grid 1,2,6 --starts 4 --tol 1e-9"
                         " --strategy sfa --output cli_sweep.csv");
  CHECK(rc == 0);
  const std::string csv = slurp("cli_sweep.csv");
  CHECK(csv.rfind("param,start_index,objective,best_objective,fraction_of_best\n",
                  0) == 0);
  CHECK(count_lines(csv) == 1 + 3 * 4);
  // every fraction is in (0, 1]; with the budget fully relaxed (s = p) every
  // start reaches the global optimum
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    const double param = std::stod(line.substr(0, line.find(',')));
    const auto pos = line.rfind(',');
    const double frac = std::stod(line.substr(pos + 1));
    CHECK(frac > 0.0);
    CHECK(frac <= 1.0 + 1e-12);
    if (param == 6.0) CHECK(frac >= 0.999);
  }
  std::remove(path.c_str());
  std::remove("cli_sweep.csv");
  std::remove("cli_stderr.txt");
}

TEST_CASE("bench-strategies: NAI speedup is exactly 1") {
  const auto path = write_csv_matrix("e.csv", tu::random_dense(14, 10, 46));
  const int rc = run_cli("bench-strategies --input " + path +
                         " --format csv --s 3 --starts 12 --batch 3"
                         " --output cli_bench.csv");
  CHECK(rc == 0);
  const std::string csv = slurp("cli_bench.csv");
  CHECK(csv.rfind("strategy,r,total_sweeps,wall_time,speedup_vs_nai,best_objective\n",
                  0) == 0);
  CHECK(count_lines(csv) == 1 + 4);
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  std::vector<double> objectives;
  while (std::getline(ss, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) fields.push_back(tok);
    REQUIRE(fields.size() == 6);
    if (fields[0] == "nai") {
      CHECK(std::stod(fields[4]) == 1.0);
      CHECK(fields[1] == "1");
    }
    objectives.push_back(std::stod(fields[5]));
  }
  // scheduling must not change the best objective
  for (double obj : objectives) CHECK(obj == objectives.front());
  std::remove(path.c_str());
  std::remove("cli_bench.csv");
  std::remove("cli_stderr.txt");
}
