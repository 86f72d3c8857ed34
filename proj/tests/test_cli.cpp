#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "feec/cli.hpp"
#include "feec/mms.hpp"

using namespace feec;

namespace {

struct CoutCapture {
  std::ostringstream oss;
  std::streambuf* old;
  CoutCapture() : old(std::cout.rdbuf(oss.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(old); }
  std::string text() const { return oss.str(); }
};

struct CerrMute {
  std::ostringstream oss;
  std::streambuf* old;
  CerrMute() : old(std::cerr.rdbuf(oss.rdbuf())) {}
  ~CerrMute() { std::cerr.rdbuf(old); }
};

int cli(std::initializer_list<const char*> args, std::string* out = nullptr) {
  std::vector<const char*> argv = {"feec-heat"};
  argv.insert(argv.end(), args.begin(), args.end());
  CoutCapture cap;
  CerrMute mute;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
  if (out) *out = cap.text();
  return rc;
}

std::string write_temp(const std::string& name, const std::string& body) {
  std::ofstream out(name);
  out << body;
  return name;
}

const char* kHeader = "level,h,err_sigma,rate_sigma,err_dsigma,rate_dsigma,err_u,rate_u\n";

}  // namespace

TEST_CASE("config parser: comments, whitespace, failure modes") {
  const auto path = write_temp("cli_cfg_ok.cfg",
                               "# leading comment\n"
                               "  mode = convergence   # trailing comment\n"
                               "\n"
                               "case=annulus2d\n"
                               "dt = 1e-3\n");
  const auto kv = parse_config_file(path);
  CHECK(kv.size() == 3);
  CHECK(kv.at("mode") == "convergence");
  CHECK(kv.at("case") == "annulus2d");
  CHECK(kv.at("dt") == "1e-3");
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_config_file("definitely_missing.cfg"), ParseError);

  auto expect_parse_error = [](const std::string& body, const std::string& needle) {
    const auto p = write_temp("cli_cfg_bad.cfg", body);
    std::string msg;
    try {
      parse_config_file(p);
    } catch (const ParseError& e) {
      msg = e.what();
    }
    std::remove(p.c_str());
    CAPTURE(body);
    CHECK(msg.find(needle) != std::string::npos);
  };
  expect_parse_error("mode convergence\n", "expected key = value");
  expect_parse_error("mode =\n", "empty key or value");
  expect_parse_error("= convergence\n", "empty key or value");
  expect_parse_error("a = 1\na = 2\n", "duplicate key");
  expect_parse_error("ok = 1\nbroken line\n", ":2:");
}

TEST_CASE("table rendering: header, rate gaps, value round-trip") {
  ConvergenceTable t;
  t.case_name = "annulus2d";
  t.r = 1;
  t.dt = 1e-4;
  t.t_final = 0.01;
  ConvergenceRow a;
  a.level = 0;
  a.h = 0.25;
  a.err_sigma = 0.125;
  a.err_dsigma = 1.0 / 3.0;
  a.err_u = 0.0625;
  a.rate_sigma = a.rate_dsigma = a.rate_u = std::nan("");
  ConvergenceRow b = a;
  b.level = 1;
  b.h = 0.125;
  b.err_sigma = 0.03125;
  b.rate_sigma = 2.0;
  b.err_dsigma = 1.0 / 6.0;
  b.rate_dsigma = 1.0;
  b.err_u = 0.03;
  b.rate_u = std::log2(a.err_u / 0.03);
  t.rows = {a, b};

  const std::string csv = table_csv(t);
  CHECK(csv.rfind(kHeader, 0) == 0);

  std::istringstream lines(csv);
  std::string header, row0, row1, extra;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(!std::getline(lines, extra));

  // First row has empty rate cells: ",," where the rates would be.
  CHECK(row0 == "0,0.25,0.125,,0.33333333333333331,,0.0625,");
  // Numbers survive a parse round trip bitwise (17 significant digits).
  std::istringstream cells(row1);
  std::string cell;
  std::getline(cells, cell, ',');
  CHECK(cell == "1");
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == 0.125);
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == 0.03125);
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == 2.0);
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == 1.0 / 6.0);
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == 1.0);
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == 0.03);
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == std::log2(0.0625 / 0.03));
}

TEST_CASE("mesh-info prints the entity counts and first Betti number") {
  std::string out;
  CHECK(cli({"mesh-info", "--case", "annulus2d"}, &out) == 0);
  CHECK(out == "V=24 E=48 T=24 b1=1\n");

  CHECK(cli({"mesh-info", "--case", "cube3d", "--level", "0"}, &out) == 0);
  CHECK(out == "V=125 E=604 F=864 T=384 b1=0\n");

  CHECK(cli({"mesh-info", "--case", "square2d_steady", "--level", "1"}, &out) == 0);
  CHECK(out == "V=81 E=208 T=128 b1=0\n");

  CHECK(cli({"mesh-info", "--case", "klein_bottle"}) == 1);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(cli({}) == 1);
  CHECK(cli({"frobnicate"}) == 1);
  CHECK(cli({"convergence"}) == 1);                       // missing --config
  CHECK(cli({"convergence", "--config"}) == 1);           // dangling value
  CHECK(cli({"mesh-info", "--case", "annulus2d", "--frob"}) == 1);
  CHECK(cli({"convergence", "--config", "missing_file.cfg"}) == 1);
}

TEST_CASE("convergence subcommand writes what it prints") {
  const auto cfg = write_temp("cli_conv.cfg",
                              "mode = convergence\n"
                              "case = annulus2d\n"
                              "r = 1\n"
                              "levels = 2\n"
                              "dt = 2e-3\n"
                              "t_final = 4e-3\n");
  std::string out;
  const int rc = cli({"convergence", "--config", cfg.c_str(), "--out", "cli_conv_out.csv"}, &out);
  CHECK(rc == 0);
  CHECK(out.rfind(kHeader, 0) == 0);

  std::ifstream in("cli_conv_out.csv", std::ios::binary);
  std::stringstream file_text;
  file_text << in.rdbuf();
  CHECK(file_text.str() == out);

  int lines = 0;
  for (char c : out)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // header + two levels

  std::remove(cfg.c_str());
  std::remove("cli_conv_out.csv");
}

TEST_CASE("convergence subcommand rejects bad configurations") {
  auto try_cfg = [](const std::string& body) {
    const auto cfg = write_temp("cli_conv_bad.cfg", body);
    const int rc = cli({"convergence", "--config", cfg.c_str()});
    std::remove(cfg.c_str());
    return rc;
  };
  // mode mismatch
  CHECK(try_cfg("mode = run\ncase = annulus2d\nr = 1\nlevels = 2\ndt = 1e-3\nt_final = 4e-3\n") ==
        1);
  // unknown case
  CHECK(try_cfg("case = moebius\nr = 1\nlevels = 2\ndt = 1e-3\nt_final = 4e-3\n") == 1);
  // missing key
  CHECK(try_cfg("case = annulus2d\nr = 1\nlevels = 2\ndt = 1e-3\n") == 1);
  // non-numeric value
  CHECK(try_cfg("case = annulus2d\nr = 1\nlevels = 2\ndt = fast\nt_final = 4e-3\n") == 1);
  // unknown key
  CHECK(try_cfg("case = annulus2d\nr = 1\nlevels = 2\ndt = 1e-3\nt_final = 4e-3\nzeta = 1\n") ==
        1);
  // dt does not divide t_final
  CHECK(try_cfg("case = annulus2d\nr = 1\nlevels = 2\ndt = 3e-3\nt_final = 4e-3\n") == 1);
}

TEST_CASE("run subcommand emits a JSON record") {
  const auto cfg = write_temp("cli_run.cfg",
                              "mode = run\n"
                              "case = annulus2d\n"
                              "r = 1\n"
                              "level = 0\n"
                              "dt = 2e-3\n"
                              "t_final = 4e-3\n");
  std::string out;
  CHECK(cli({"run", "--config", cfg.c_str()}, &out) == 0);
  CHECK(out.find("\"case\": \"annulus2d\"") != std::string::npos);
  CHECK(out.find("\"steps\": 2") != std::string::npos);
  CHECK(out.find("\"dof_sigma\": 24") != std::string::npos);
  CHECK(out.find("\"dof_u\": 48") != std::string::npos);
  CHECK(out.find("\"err_sigma\"") != std::string::npos);
  CHECK(out.find("\"err_dsigma\"") != std::string::npos);
  CHECK(out.find("\"err_u\"") != std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("check subcommand reports every property as passing") {
  std::string out;
  CHECK(cli({"check"}, &out) == 0);
  int pass_lines = 0;
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    CHECK(line.rfind("PASS ", 0) == 0);
    ++pass_lines;
  }
  CHECK(pass_lines == 7);
}

TEST_CASE("repeated convergence runs are byte-identical") {
  const auto cfg = write_temp("cli_det.cfg",
                              "mode = convergence\n"
                              "case = annulus2d\n"
                              "r = 2\n"
                              "levels = 2\n"
                              "dt = 2e-3\n"
                              "t_final = 4e-3\n");
  std::string first, second;
  CHECK(cli({"convergence", "--config", cfg.c_str()}, &first) == 0);
  CHECK(cli({"convergence", "--config", cfg.c_str()}, &second) == 0);
  CHECK(first == second);
  CHECK(first.size() > sizeof(kHeader));
  std::remove(cfg.c_str());
}
