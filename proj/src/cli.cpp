#include "feec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace feec {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Typed access with a uniform error surface: every defect in a config file is
// a ParseError naming the offending key.
class ConfigView {
 public:
  explicit ConfigView(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  std::string str(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ParseError("config: missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }
  std::string str_or(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }
  int integer(const std::string& key) {
    std::string v = str(key);
    try {
      size_t pos = 0;
      int out = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      throw ParseError("config: key '" + key + "' is not an integer: " + v);
    }
  }
  int integer_or(const std::string& key, int fallback) {
    if (kv_.find(key) == kv_.end()) return fallback;
    return integer(key);
  }
  double real(const std::string& key) {
    std::string v = str(key);
    try {
      size_t pos = 0;
      double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      throw ParseError("config: key '" + key + "' is not a number: " + v);
    }
  }
  void reject_unused() const {
    for (const auto& [key, value] : kv_)
      if (used_.find(key) == used_.end())
        throw ParseError("config: unknown key '" + key + "'");
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

void check_mode(ConfigView& cfg, const std::string& subcommand) {
  std::string mode = cfg.str_or("mode", subcommand);
  if (mode != subcommand)
    throw ParseError("config: mode '" + mode + "' does not match subcommand '" + subcommand + "'");
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameterError("cannot open output file: " + path);
  out << content;
  if (!out) throw InvalidParameterError("failed writing output file: " + path);
}

int cmd_convergence(const std::string& config_path, const std::string& out_path) {
  ConfigView cfg(parse_config_file(config_path));
  check_mode(cfg, "convergence");
  ManufacturedCase mc = case_by_name(cfg.str("case"));
  int r = cfg.integer("r");
  int levels = cfg.integer("levels");
  double dt = cfg.real("dt");
  double t_final = cfg.real("t_final");
  std::string out = out_path.empty() ? cfg.str_or("out", "") : out_path;
  cfg.reject_unused();

  ConvergenceTable table = convergence_study(mc, r, levels, dt, t_final);
  std::string csv = table_csv(table);
  if (!out.empty()) write_output(out, csv);
  std::cout << csv;
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_path) {
  ConfigView cfg(parse_config_file(config_path));
  check_mode(cfg, "run");
  ManufacturedCase mc = case_by_name(cfg.str("case"));
  int r = cfg.integer("r");
  int level = cfg.integer_or("level", 0);
  double dt = cfg.real("dt");
  double t_final = cfg.real("t_final");
  std::string out = out_path.empty() ? cfg.str_or("out", "") : out_path;
  cfg.reject_unused();

  SimplicialMesh mesh = mc.mesh_at_level(level);
  FeSpace sigma_space = build_space(mesh, Family::Lagrange, 0, r);
  FeSpace u_space = build_space(mesh, Family::Trimmed, 1, r);
  MixedOperators ops = build_mixed_operators(sigma_space, u_space);

  TransientConfig tc;
  tc.dt = dt;
  tc.t_final = t_final;
  tc.f = mc.f;
  tc.init = InitMode::ZeroField;
  TransientStepper stepper(ops, tc);
  stepper.run();
  ErrorNorms e = error_norms(stepper.sigma(), stepper.u(), mc, t_final);

  nlohmann::json meta{
      {"case", mc.name},
      {"r", r},
      {"level", level},
      {"h", case_h(level)},
      {"dt", dt},
      {"t_final", t_final},
      {"steps", stepper.step_count()},
      {"dof_sigma", sigma_space.dof_count},
      {"dof_u", u_space.dof_count},
      {"err_sigma", e.err_sigma},
      {"err_dsigma", e.err_dsigma},
      {"err_u", e.err_u},
  };
  std::string text = meta.dump(2) + "\n";
  if (!out.empty()) write_output(out, text);
  std::cout << text;
  return 0;
}

int cmd_mesh_info(const std::string& case_name, int level) {
  ManufacturedCase mc = case_by_name(case_name);
  SimplicialMesh mesh = mc.mesh_at_level(level);
  std::vector<int> betti = betti_numbers(mesh);
  std::ostringstream os;
  if (mesh.dim == 2)
    os << "V=" << mesh.count(0) << " E=" << mesh.count(1) << " T=" << mesh.count(2);
  else
    os << "V=" << mesh.count(0) << " E=" << mesh.count(1) << " F=" << mesh.count(2)
       << " T=" << mesh.count(3);
  os << " b1=" << betti.at(1) << "\n";
  std::cout << os.str();
  return 0;
}

int cmd_check() {
  std::vector<PropertyResult> results = property_suite();
  bool all_pass = true;
  for (const PropertyResult& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << " (measure " << fmt17(r.measure)
              << "): " << r.detail << "\n";
  }
  return all_pass ? 0 : 3;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config " + path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("config " + path + ":" + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ParseError("config " + path + ":" + std::to_string(lineno) + ": duplicate key '" +
                       key + "'");
  }
  return kv;
}

std::string table_csv(const ConvergenceTable& table) {
  std::ostringstream os;
  os << "level,h,err_sigma,rate_sigma,err_dsigma,rate_dsigma,err_u,rate_u\n";
  auto rate_cell = [](double r) { return std::isnan(r) ? std::string() : fmt17(r); };
  for (const ConvergenceRow& row : table.rows) {
    os << row.level << ',' << fmt17(row.h) << ',' << fmt17(row.err_sigma) << ','
       << rate_cell(row.rate_sigma) << ',' << fmt17(row.err_dsigma) << ','
       << rate_cell(row.rate_dsigma) << ',' << fmt17(row.err_u) << ',' << rate_cell(row.rate_u)
       << '\n';
  }
  return os.str();
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"mixed finite element solver for the Hodge heat equation"};
  app.require_subcommand(1);

  std::string config_path, out_path, case_name;
  int level = 0;

  CLI::App* conv = app.add_subcommand("convergence", "refinement study from a config file");
  conv->add_option("--config", config_path, "key = value configuration file")->required();
  conv->add_option("--out", out_path, "also write the CSV table to this path");

  CLI::App* runcmd = app.add_subcommand("run", "single transient solve from a config file");
  runcmd->add_option("--config", config_path, "key = value configuration file")->required();
  runcmd->add_option("--out", out_path, "also write the JSON run record to this path");

  CLI::App* info = app.add_subcommand("mesh-info", "mesh statistics for a named case");
  info->add_option("--case", case_name, "annulus2d | cube3d | square2d_steady")->required();
  info->add_option("--level", level, "refinement level (0 = coarsest)");

  CLI::App* check = app.add_subcommand("check", "structure-preservation property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (conv->parsed()) return cmd_convergence(config_path, out_path);
    if (runcmd->parsed()) return cmd_run(config_path, out_path);
    if (info->parsed()) return cmd_mesh_info(case_name, level);
    if (check->parsed()) return cmd_check();
    std::cerr << app.help();
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // solver-side failures: singular matrices, non-convergence, topology mismatch
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace feec
