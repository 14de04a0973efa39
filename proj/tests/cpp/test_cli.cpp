// SPDX-License-Identifier: MIT
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "peridyn/config.hpp"

using namespace peridyn;
namespace fs = std::filesystem;

namespace {
struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("peridyn-rk");
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream cout_cap, cerr_cap;
  std::streambuf* old_out = std::cout.rdbuf(cout_cap.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(cerr_cap.rdbuf());
  CliResult r;
  try {
    r.code = run_cli(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = cout_cap.str();
  r.err = cerr_cap.str();
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("peridyn_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream is(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    if (!header_seen) {  // column header line
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::string strip_last_column(const std::string& csv) {
  std::istringstream is(csv);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') {
      const std::size_t pos = line.rfind(',');
      if (pos != std::string::npos) line.erase(pos);
    }
    os << line << '\n';
  }
  return os.str();
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing, normalization, precedence") {
    const Config c = parse_config_text(
        "# comment line\n"
        "E = 1.0\n"
        "H-Max = 0.25\n"
        "h_max=0.125\n"
        "\n"
        "ladder = 0.25, 0.125, 0.0625\n");
    CHECK(c.get_double("e", 0.0) == doctest::Approx(1.0));
    // Keys normalize to lower-case underscore; later assignments win.
    CHECK(c.get_double("h_max", 0.0) == doctest::Approx(0.125));
    const std::vector<double> lad = c.get_list("ladder", {});
    REQUIRE(lad.size() == 3);
    CHECK(lad[1] == doctest::Approx(0.125));
    CHECK(c.get_string("missing", "fallback") == "fallback");
    CHECK(c.get_bool("missing", true));

    CHECK_THROWS_AS((void)parse_config_text("just words\n"), config_error);
    const Config bad = parse_config_text("e = oops\n");
    try {
      (void)bad.get_double("e", 0.0);
      FAIL("expected type-mismatch");
    } catch (const config_error& err) {
      const std::string msg = err.what();
      CHECK(msg.find("type-mismatch") != std::string::npos);
      CHECK(msg.find("e") != std::string::npos);
    }
  }

  TEST_CASE("canonical form and stable hashing") {
    const Config a = parse_config_text("nu = 0.4\ne = 1\n");
    const Config b = parse_config_text("e = 1\nnu = 0.4\n");
    CHECK(a.canonical() == "e=1\nnu=0.4\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() == fnv1a64(a.canonical()));
    const Config c = parse_config_text("e = 1\nnu = 0.3\n");
    CHECK(a.hash() != c.hash());
    // Duplicates collapse to the winning assignment.
    const Config d = parse_config_text("e = 2\ne = 1\nnu = 0.4\n");
    CHECK(d.canonical() == a.canonical());
  }

  TEST_CASE("unknown keys are rejected by name") {
    Config c;
    c.set("h_max", "0.125");
    CHECK_NOTHROW(validate_keys(c));
    c.set("frobnicate", "1");
    try {
      validate_keys(c);
      FAIL("expected unknown-key");
    } catch (const config_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("unknown-key") != std::string::npos);
      CHECK(msg.find("frobnicate") != std::string::npos);
    }
    for (const char* k : {"e", "nu", "coupling", "ladder", "solver", "xi"}) {
      bool found = false;
      for (const std::string& known : known_keys())
        if (known == k) found = true;
      CHECK(found);
    }
  }

  TEST_CASE("exit codes: usage, config errors, numerical errors") {
    CHECK(run_cli_args({}).code == 2);
    CHECK(run_cli_args({"--help"}).code == 0);
    CHECK(run_cli_args({"help"}).code == 0);
    CHECK(run_cli_args({"frobnicate"}).code == 2);
    CHECK(run_cli_args({"converge", "stray"}).code == 2);
    CHECK(run_cli_args({"converge", "--frobnicate", "1"}).code == 2);
    const fs::path d = fresh_dir("codes");
    // Ladder too short -> configuration error.
    const CliResult lad = run_cli_args({"converge", "--coupling", "delta-eq-h",
                                        "--ladder", "0.25,0.125", "--out",
                                        d.string()});
    CHECK(lad.code == 2);
    CHECK(lad.err.find("error (configuration)") != std::string::npos);
    // Infeasible weight constraints -> numerical error.
    const CliResult inf =
        run_cli_args({"weights", "--eps1", "0.9", "--out", d.string()});
    CHECK(inf.code == 3);
    CHECK(inf.err.find("error (numerical)") != std::string::npos);
    // Malformed numeric flag -> configuration error.
    CHECK(run_cli_args({"solve", "--h_max", "abc", "--out", d.string()}).code ==
          2);
  }

  TEST_CASE("weights command writes a deterministic artifact") {
    const fs::path d1 = fresh_dir("w1");
    const CliResult r1 =
        run_cli_args({"weights", "--eps1", "0.25", "--out", d1.string()});
    REQUIRE(r1.code == 0);
    CHECK(r1.out.find("weights: eps1=") != std::string::npos);
    CHECK(r1.out.find("artifact: ") != std::string::npos);
    const std::string csv = slurp(d1 / "weights.csv");
    CHECK(csv.find("# peridyn-rk weights") == 0);
    CHECK(csv.find("# config-hash: ") != std::string::npos);
    CHECK(csv.find("# units: ") != std::string::npos);
    const std::vector<std::string> rows = data_rows(csv);
    REQUIRE(rows.size() == 48);
    // Re-run into a second directory: byte-identical output.
    const fs::path d2 = fresh_dir("w2");
    REQUIRE(run_cli_args({"weights", "--eps1", "0.25", "--out", d2.string()})
                .code == 0);
    CHECK(slurp(d2 / "weights.csv") == csv);
  }

  TEST_CASE("converge command: artifact shape and determinism") {
    const fs::path d1 = fresh_dir("c1");
    const std::vector<std::string> args = {
        "converge", "--coupling", "delta-eq-h",
        "--ladder", "0.25,0.125,0.0625", "--out", d1.string()};
    const CliResult r = run_cli_args(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("summary-rate:") != std::string::npos);
    const std::string csv = slurp(d1 / "convergence_delta-eq-h.csv");
    const std::vector<std::string> rows = data_rows(csv);
    REQUIRE(rows.size() == 3);
    // Errors decrease down the ladder (column 6: l2_error).
    double prev = 1e300;
    for (const std::string& row : rows) {
      std::istringstream is(row);
      std::string field;
      double err = 0.0;
      for (int col = 0; std::getline(is, field, ','); ++col)
        if (col == 5) err = std::stod(field);
      CHECK(err < prev);
      CHECK(err > 0.0);
      prev = err;
    }
    const fs::path d2 = fresh_dir("c2");
    std::vector<std::string> args2 = args;
    args2.back() = d2.string();
    REQUIRE(run_cli_args(args2).code == 0);
    // Identical up to the wall_seconds column.
    CHECK(strip_last_column(slurp(d2 / "convergence_delta-eq-h.csv")) ==
          strip_last_column(csv));
  }

  TEST_CASE("solve command writes the full nodal solution") {
    const fs::path d = fresh_dir("s1");
    const CliResult r =
        run_cli_args({"solve", "--h_max", "0.25", "--out", d.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("solve: coupling=fixed-delta") != std::string::npos);
    CHECK(r.out.find("solver: method=") != std::string::npos);
    CHECK(r.out.find("l2-distance-to-local-exact:") != std::string::npos);
    CHECK(r.out.find("note:") != std::string::npos);  // forcing-variant note
    const std::vector<std::string> rows = data_rows(slurp(d / "solution.csv"));
    CHECK(rows.size() == 513);  // full 19 x 27 node grid at h_max = 1/4
  }

  TEST_CASE("symbols command: single wave vector and scan") {
    const fs::path d = fresh_dir("sym1");
    const CliResult r = run_cli_args(
        {"symbols", "--xi", "1.3,-0.7", "--out", d.string()});
    REQUIRE(r.code == 0);
    const std::vector<std::string> rows =
        data_rows(slurp(d / "symbol_point.csv"));
    REQUIRE(rows.size() == 2);  // decomposed + direct
    for (const std::string& row : rows) {
      std::istringstream is(row);
      std::string path, x1, x2, m11;
      std::getline(is, path, ',');
      std::getline(is, x1, ',');
      std::getline(is, x2, ',');
      std::getline(is, m11, ',');
      CHECK(std::stod(m11) == doctest::Approx(3.7489140505091414).epsilon(1e-8));
    }

    const fs::path d2 = fresh_dir("sym2");
    const CliResult scan = run_cli_args(
        {"symbols", "--grid_n", "5", "--radial_samples", "4", "--radial_dirs",
         "2", "--deltas", "0.25", "--h_max", "0.125", "--out", d2.string()});
    REQUIRE(scan.code == 0);
    CHECK(scan.out.find("all-positive: yes") != std::string::npos);
    CHECK(data_rows(slurp(d2 / "stability_scan.csv")).size() > 10);

    // The symbols command reports rather than gates the material hypothesis.
    const fs::path d3 = fresh_dir("sym3");
    const CliResult soft = run_cli_args({"symbols", "--nu", "0.2", "--xi",
                                         "1.0,0.5", "--out", d3.string()});
    CHECK(soft.code == 0);
  }

  TEST_CASE("truncation command smoke run") {
    const fs::path d = fresh_dir("t1");
    const CliResult r = run_cli_args(
        {"truncation", "--ladder", "0.25,0.125,0.0625", "--out", d.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("summary-rates: fixed=") != std::string::npos);
    CHECK(data_rows(slurp(d / "truncation.csv")).size() == 3);
  }

  TEST_CASE("material gate: lambda < mu requires an explicit override") {
    const fs::path d = fresh_dir("gate");
    const std::vector<std::string> base = {
        "converge", "--coupling", "delta-eq-h", "--ladder",
        "0.25,0.125,0.0625", "--nu", "0.2", "--out", d.string()};
    const CliResult blocked = run_cli_args(base);
    CHECK(blocked.code == 2);
    CHECK(blocked.err.find("precondition-violation") != std::string::npos);
    std::vector<std::string> allow = base;
    allow.push_back("--allow_lambda_lt_mu");
    allow.push_back("true");
    const CliResult ok = run_cli_args(allow);
    CHECK(ok.code == 0);
    CHECK(ok.out.find("warning") != std::string::npos);
  }

  TEST_CASE("config file merges under flags") {
    const fs::path d = fresh_dir("cfg");
    const fs::path cfgfile = d / "run.cfg";
    {
      std::ofstream os(cfgfile);
      os << "# convergence ladder\n"
         << "coupling = delta-eq-h\n"
         << "ladder = 0.25,0.125,0.0625\n"
         << "nu = 0.4\n";
    }
    const CliResult r = run_cli_args(
        {"converge", "--config", cfgfile.string(), "--out", d.string()});
    REQUIRE(r.code == 0);
    // A flag overrides the file entry: break the ladder -> config error.
    const CliResult over = run_cli_args(
        {"converge", "--config", cfgfile.string(), "--ladder", "0.25,0.125",
         "--out", d.string()});
    CHECK(over.code == 2);
    // Unknown key in the file is rejected like a flag.
    {
      std::ofstream os(cfgfile, std::ios::app);
      os << "mystery = 1\n";
    }
    CHECK(run_cli_args(
              {"converge", "--config", cfgfile.string(), "--out", d.string()})
              .code == 2);
  }
}
