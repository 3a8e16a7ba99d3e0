#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qesband/cli.hpp"
#include "qesband/errors.hpp"

namespace cli = qesband::cli;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::vector<double> column(const std::vector<std::vector<std::string>>& rows, std::size_t c) {
  std::vector<double> v;
  for (std::size_t i = 1; i < rows.size(); ++i) v.push_back(std::stod(rows[i][c]));
  return v;
}

bool contains(const std::vector<double>& v, double x, double tol) {
  for (double y : v)
    if (std::abs(x - y) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("parse_twice_a and number formatting") {
  CHECK(cli::parse_twice_a("0") == 0);
  CHECK(cli::parse_twice_a("1.5") == 3);
  CHECK(cli::parse_twice_a("3/2") == 3);
  CHECK(cli::parse_twice_a("4") == 8);
  for (const char* bad : {"0.3", "-1", "abc", "1/0", "", "2x", "nan"})
    CHECK_THROWS_AS(cli::parse_twice_a(bad), qesband::DomainError);
  CHECK(cli::format_real(0.1) == "0.10000000000000001");
  CHECK(cli::format_real(-0.0) == "0");
  CHECK(std::stod(cli::format_real(M_PI)) == M_PI);
}

TEST_CASE("edges") {
  const auto a0 = run({"edges", "--a", "0", "--b", "1", "--m", "0.5"});
  CHECK(a0.code == 0);
  const auto r0 = csv(a0.out);
  REQUIRE(r0.size() == 2);
  CHECK(r0[0] == std::vector<std::string>{"index", "E", "sector", "nodes", "periodicity", "coeffs"});
  CHECK(std::abs(std::stod(r0[1][1])) < 1e-14);

  const auto a2 = run({"edges", "--a", "2", "--b", "1", "--m", "0.5"});
  const auto r2 = csv(a2.out);
  REQUIRE(r2.size() == 6);
  const auto e = column(r2, 1);
  for (double want : {0.0, std::sqrt(7.0), -std::sqrt(7.0)}) CHECK(contains(e, want, 1e-12));
  CHECK(r2[1][4] == "4K");
  CHECK(r2[1][5].find(';') != std::string::npos);

  const auto j = run({"edges", "--a", "1", "--b", "1", "--m", "0", "--format", "json"});
  CHECK(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc["params"]["a"] == 1.0);
  CHECK(doc["params"]["m"] == 0.0);
  REQUIRE(doc["edges"].size() == 3);
  std::vector<double> ej;
  for (const auto& edge : doc["edges"]) {
    ej.push_back(edge["E"].get<double>());
    CHECK(edge["periodicity"] == "4K");
    CHECK(edge["coeffs"].is_array());
    CHECK(edge["nodes"].is_number_integer());
  }
  for (double want : {1.0, (1 - std::sqrt(5.0)) / 2, (1 + std::sqrt(5.0)) / 2}) CHECK(contains(ej, want, 1e-12));

  const auto h = json::parse(run({"edges", "--a", "3/2", "--b", "1", "--m", "0.3", "--format", "json"}).out);
  for (const auto& edge : h["edges"]) CHECK(edge["periodicity"] == "8K");
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"edges", "--a", "5/2", "--b", "0.7", "--m", "0.35", "--format", "json"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> sweep{"sweep", "--a", "1,3/2", "--b", "0.5,1", "--m-range", "0.1:0.5:0.2"};
  CHECK(run(sweep).out == run(sweep).out);
}

TEST_CASE("exit codes and streams") {
  const auto usage = run({"edges", "--nope"});
  CHECK(usage.code == cli::kUsage);
  CHECK(usage.out.empty());
  CHECK_FALSE(usage.err.empty());
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"edges", "--a", "1", "--format", "xml"}).code == cli::kUsage);
  CHECK(run({"edges", "--b", "notanumber"}).code == cli::kUsage);

  const auto domain = run({"edges", "--a", "0.3"});
  CHECK(domain.code == cli::kDomain);
  CHECK(domain.out.empty());
  CHECK(run({"edges", "--a", "1", "--m", "1"}).code == cli::kDomain);
  CHECK(run({"edges", "--a", "1", "--m", "-0.2"}).code == cli::kDomain);
  CHECK(run({"check", "--a", "1", "--n-basis", "15"}).code == cli::kDomain);
  CHECK(run({"boundstates", "--a", "1", "--half-width", "5"}).code == cli::kDomain);
  CHECK(run({"wavefunction", "--a", "1", "--index", "3"}).code == cli::kDomain);

  CHECK(run({"edges", "--a", "1", "--output", "/nonexistent-dir/x.csv"}).code == cli::kIo);
  CHECK(run({"sweep", "--a", "1", "--m", "0.5", "--output", "/nonexistent-dir/x.csv"}).code == cli::kIo);

  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("output to a file") {
  const auto path = std::filesystem::temp_directory_path() / "qesband_cli_test.csv";
  std::filesystem::remove(path);
  const auto r = run({"edges", "--a", "1", "--b", "1", "--m", "0.5", "-o", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == run({"edges", "--a", "1", "--b", "1", "--m", "0.5"}).out);
  std::filesystem::remove(path);
}

TEST_CASE("check") {
  const auto r = run({"check", "--a", "1", "--b", "1", "--m", "0.5"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  std::map<std::string, std::vector<std::string>> by_name;
  for (std::size_t i = 1; i < rows.size(); ++i) by_name[rows[i][0]] = rows[i];
  for (const char* name : {"count", "closure", "reality", "closed_form", "floquet_membership", "sl2", "residual",
                           "periodicity", "b_symmetry", "m_half_symmetry"}) {
    REQUIRE(by_name.count(name) == 1);
    CHECK(by_name[name][1] == "pass");
  }
  CHECK(std::stod(by_name["floquet_membership"][2]) < 1e-6);

  const auto h = json::parse(run({"check", "--a", "5/2", "--b", "2", "--m", "0.3", "--format", "json"}).out);
  CHECK(h["pass"] == true);
  bool has_closed = false, has_membership = false;
  for (const auto& c : h["checks"]) {
    has_closed = has_closed || c["name"] == "closed_form";
    has_membership = has_membership || c["name"] == "floquet_membership";
  }
  CHECK_FALSE(has_closed);
  CHECK(has_membership);

  for (const char* b : {"0.3", "1", "2.5"}) {
    const auto s = json::parse(run({"check", "--a", "2", "--b", b, "--m", "0.5", "--format", "json"}).out);
    for (const auto& c : s["checks"])
      if (c["name"] == "m_half_symmetry") CHECK(c["status"] == "pass");
  }
}

TEST_CASE("check honours QESBAND_TOL") {
  // An absurdly tight tolerance must fail with the consistency exit code.
  ::setenv("QESBAND_TOL", "1e-30", 1);
  const auto strict = run({"check", "--a", "1", "--b", "1", "--m", "0.5"});
  ::unsetenv("QESBAND_TOL");
  CHECK(strict.code == cli::kConsistency);
  CHECK(strict.out.find(",fail,") != std::string::npos);

  ::setenv("QESBAND_TOL", "garbage", 1);
  CHECK(run({"check", "--a", "1"}).code == cli::kDomain);
  ::unsetenv("QESBAND_TOL");

  // The flag wins over the environment.
  ::setenv("QESBAND_TOL", "1e-30", 1);
  CHECK(run({"check", "--a", "1", "--b", "1", "--m", "0.5", "--tol", "1e-6"}).code == 0);
  ::unsetenv("QESBAND_TOL");
}

TEST_CASE("sweep") {
  const auto r = run({"sweep", "--a", "3/2", "--b", "0.5,1,2", "--m-range", "0.1:0.9:0.2"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"a", "b", "m", "level_index", "E", "sector", "nodes", "periodicity"});
  CHECK(rows.size() == 1 + 15 * 4);
  // Lexicographic order in (a, b, m, index).
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const std::tuple<double, double, double, int> prev{std::stod(rows[i - 1][0]), std::stod(rows[i - 1][1]),
                                                       std::stod(rows[i - 1][2]), std::stoi(rows[i - 1][3])};
    const std::tuple<double, double, double, int> cur{std::stod(rows[i][0]), std::stod(rows[i][1]),
                                                      std::stod(rows[i][2]), std::stoi(rows[i][3])};
    CHECK(prev < cur);
  }
  CHECK(rows[1][2] == "0.10000000000000001");
  CHECK(rows.back()[2] == "0.90000000000000002");

  // m = 1/2: symmetric about zero.
  const auto half = csv(run({"sweep", "--a", "2", "--b", "0.5,1,2", "--m", "0.5"}).out);
  const auto e = column(half, 4);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(e[5 * g + i] + e[5 * g + 4 - i]) < 1e-9);

  // b and -b: identical E columns.
  const auto plus = column(csv(run({"sweep", "--a", "5/2", "--b", "1.3", "--m-range", "0.2:0.8:0.3"}).out), 4);
  const auto minus = column(csv(run({"sweep", "--a", "5/2", "--b", "-1.3", "--m-range", "0.2:0.8:0.3"}).out), 4);
  REQUIRE(plus.size() == minus.size());
  for (std::size_t i = 0; i < plus.size(); ++i) CHECK(std::abs(plus[i] - minus[i]) < 1e-9);

  CHECK(run({"sweep", "--a", "1", "--m-range", "0.5:0.1:0.1"}).code == cli::kDomain);
  CHECK(run({"sweep", "--a", "1", "--m-range", "0.1:0.5"}).code == cli::kDomain);
  CHECK(run({"sweep", "--a", "1", "--m", "0,0.5"}).code == cli::kDomain);
}

TEST_CASE("boundstates") {
  const auto r = run({"boundstates", "--a", "2", "--beta", "1.5"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"index", "numeric", "limit", "abs_diff"});
  CHECK(std::abs(std::stod(rows[1][1]) + 4.0) < 1e-4);
  CHECK(std::abs(std::stod(rows[2][1]) + 1.0) < 1e-4);
  for (std::size_t i = 1; i < 3; ++i) CHECK(std::stod(rows[i][3]) < 1e-4);

  const auto other = csv(run({"boundstates", "--a", "2", "--beta", "0.5"}).out);
  for (std::size_t i = 1; i < 3; ++i) CHECK(std::abs(std::stod(other[i][1]) - std::stod(rows[i][1])) < 2e-4);

  const auto j = json::parse(run({"boundstates", "--a", "3/2", "--beta", "1", "--format", "json"}).out);
  CHECK(j["pass"] == true);
  CHECK(j["states"].size() == 2);
}

TEST_CASE("wavefunction") {
  const auto r = run({"wavefunction", "--a", "0.5", "--b", "1", "--m", "0.5", "--index", "0", "--samples", "512"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"x", "psi", "u", "gauge", "dn_power"});
  REQUIRE(rows.size() == 513);
  // The zero at 2K may land on a sample; count strict sign changes between
  // nonzero samples.
  int changes = 0;
  double prev = 0.0;
  for (double psi : column(rows, 1)) {
    if (std::abs(psi) < 1e-12) continue;
    if (prev != 0.0 && psi * prev < 0.0) ++changes;
    prev = psi;
  }
  CHECK(changes == 1);
  for (double g : column(rows, 3)) CHECK(g > 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(std::stod(rows[i][1]) == doctest::Approx(std::stod(rows[i][2]) * std::stod(rows[i][3]) * std::stod(rows[i][4])));
}
