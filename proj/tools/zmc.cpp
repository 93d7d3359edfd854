#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "zmc/error.hpp"
#include "zmc/report.hpp"

namespace {

struct Flags {
  std::string family, variant, config, out, json;
  double a = 0, b = 0, delta = 0, p = 0, c = 0, r0 = 0, tol = 0;
  std::string r, theta, u, v;
  int threads = 1;
};

void add_flags(CLI::App& app, Flags& fl) {
  app.add_option("--family", fl.family,
                 "euclidean-general | euclidean-singular | hyperbola | hyperbola-singular | parabola | entire-graph");
  app.add_option("--variant", fl.variant, "I/II for hyperbolas, gen-zero/gen-pos/gen-neg/singular for parabolas");
  app.add_option("--a", fl.a);
  app.add_option("--b", fl.b);
  app.add_option("--delta", fl.delta);
  app.add_option("--p", fl.p);
  app.add_option("--c", fl.c);
  app.add_option("--r0", fl.r0, "base point of the profile integrals");
  app.add_option("--r", fl.r, "first-parameter range lo:hi:count");
  app.add_option("--u", fl.u, "first-parameter range lo:hi:count");
  app.add_option("--theta", fl.theta, "second-parameter range lo:hi:count");
  app.add_option("--v", fl.v, "second-parameter range lo:hi:count");
  app.add_option("--tol", fl.tol, "tolerance for the mean curvature check");
  app.add_option("--out", fl.out, "mesh file (.ply or .csv)");
  app.add_option("--json", fl.json, "also write the JSON report here");
  app.add_option("--config", fl.config, "JSON file with the same keys as the flags");
  app.add_option("--threads", fl.threads, "worker threads")->check(CLI::PositiveNumber);
}

zmc::RunConfig to_config(const CLI::App& app, const Flags& fl) {
  zmc::RunConfig cfg;
  cfg.family = fl.family;
  cfg.variant = fl.variant;
  auto opt = [&](const char* name, double v, std::optional<double>& dst) {
    if (app.count(name)) dst = v;
  };
  opt("--a", fl.a, cfg.a);
  opt("--b", fl.b, cfg.b);
  opt("--delta", fl.delta, cfg.delta);
  opt("--p", fl.p, cfg.p);
  opt("--c", fl.c, cfg.c);
  opt("--r0", fl.r0, cfg.r0);
  opt("--tol", fl.tol, cfg.tol);
  if (app.count("--r") && app.count("--u")) throw zmc::Error(zmc::ErrorCode::InvalidParams, "give --r or --u, not both");
  if (app.count("--theta") && app.count("--v"))
    throw zmc::Error(zmc::ErrorCode::InvalidParams, "give --theta or --v, not both");
  if (!fl.r.empty()) cfg.p1 = zmc::parse_range(fl.r);
  if (!fl.u.empty()) cfg.p1 = zmc::parse_range(fl.u);
  if (!fl.theta.empty()) cfg.p2 = zmc::parse_range(fl.theta);
  if (!fl.v.empty()) cfg.p2 = zmc::parse_range(fl.v);
  cfg.out = fl.out;
  cfg.json_out = fl.json;
  cfg.threads = fl.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero mean curvature surfaces in Minkowski 3-space: meshes, causal characters, characteristics"};
  app.require_subcommand(1);
  Flags fl;
  std::vector<CLI::App*> subs;
  for (const char* name : {"generate", "classify", "characteristic", "verify"}) {
    auto* s = app.add_subcommand(name);
    add_flags(*s, fl);
    subs.push_back(s);
  }
  subs[0]->description("write a PLY or CSV mesh coloured by causal character");
  subs[1]->description("predicted and sampled causal characters with lightlike loci");
  subs[2]->description("characteristic mu along the lightlike line");
  subs[3]->description("residual checks for the chosen family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* cmd = nullptr;
  for (auto* s : subs)
    if (s->parsed()) cmd = s;

  zmc::RunConfig cfg;
  try {
    zmc::RunConfig flags = to_config(*cmd, fl);
    if (!fl.config.empty()) {
      std::ifstream is(fl.config);
      if (!is) {
        std::cerr << "error: cannot read config " << fl.config << "\n";
        return 3;
      }
      zmc::ojson j;
      try {
        j = zmc::ojson::parse(is);
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config " << fl.config << " is not valid JSON: " << e.what() << "\n";
        return 2;
      }
      cfg = zmc::merge_config(zmc::config_from_json(j), flags);
    } else {
      cfg = flags;
    }
  } catch (const zmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const zmc::CommandResult r = zmc::run_command(cmd->get_name(), cfg);
  std::cout << r.stdout_text;
  std::cerr << r.stderr_text;
  return r.exit_code;
}
