#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "unipotent_lab/errors.hpp"
#include "unipotent_lab/harness.hpp"

using namespace ulab;

namespace {

int print_point(const nlohmann::json& j, const std::string& format) {
  bool fail = j.value("status", "pass") == "fail";
  if (j.contains("suites"))
    for (const auto& [name, s] : j["suites"].items()) fail = fail || s["status"] == "fail";
  if (format == "csv") {
    RunReport r;
    r.json = {{"points", nlohmann::json::array({j})}};
    std::cout << emit(r, "csv");
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return fail ? 1 : 0;
}

nlohmann::json only_suites(nlohmann::json j, const std::vector<std::string>& keep) {
  if (!j.contains("suites")) return j;
  nlohmann::json s = nlohmann::json::object();
  for (const auto& k : keep)
    if (j["suites"].contains(k)) s[k] = j["suites"][k];
  j["suites"] = s;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular unipotent representations of finite GL_n: decomposition matrices, Hecke and Schur "
               "algebras, progenerator checks and affine Iwahori identities."};
  app.require_subcommand(1);

  std::string config_file, format = "json", cache_dir, output;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  bool seed_set = false;

  auto* run_cmd = app.add_subcommand("run", "Run every suite over a configured grid");
  run_cmd->add_option("--config", config_file, "Config file (key = value lines)")->required();
  run_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });
  run_cmd->add_option("--jobs", jobs, "Worker threads over grid points");
  run_cmd->add_option("--format", format, "json or csv");
  run_cmd->add_option("--cache", cache_dir, "Cache directory (" + std::string(kCacheEnv) + " overrides)");
  run_cmd->add_option("--output", output, "Write the report here instead of stdout");

  int n = 0;
  std::uint32_t q = 0, third = 0;
  auto add_point = [&](CLI::App* cmd, const char* name) {
    cmd->add_option("n", n, "Rank")->required();
    cmd->add_option("q", q, "Field size")->required();
    cmd->add_option(name, third, name)->required();
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--format", format, "json or csv");
  };
  auto* decomp_cmd = app.add_subcommand("decomp", "Decomposition matrix, unitriangularity and K0 check");
  add_point(decomp_cmd, "l");
  auto* schur_cmd = app.add_subcommand("schur", "Hecke presentation and Schur algebra dimension");
  add_point(schur_cmd, "l");
  auto* bundle_cmd = app.add_subcommand("bundle", "P, V, Gamma, annihilator, Q and the shadow checks");
  add_point(bundle_cmd, "l");
  auto* affine_cmd = app.add_subcommand("affine", "Affine length, coset and set-identity checks");
  add_point(affine_cmd, "m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      auto cfg = load_config(config_file);
      if (seed_set) cfg.seed = seed;
      if (jobs) cfg.jobs = jobs;
      if (run_cmd->count("--format")) cfg.format = format;
      if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
      cfg.validate();
      auto report = run(cfg);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      const std::string text = emit(report, cfg.format);
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(output);
        if (!out) throw ConfigError("cannot write " + output);
        out << text;
      }
      return report.exit_code();
    }

    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.format = format;
    if (affine_cmd->parsed()) {
      cfg.affine = {{n, q, static_cast<int>(third)}};
      cfg.validate();
      auto j = run_affine_point(cfg.affine[0], cfg);
      std::cout << j.dump(2) << "\n";
      return j["status"] == "fail" ? 1 : 0;
    }
    cfg.grid = {{n, q, third}};
    cfg.validate();
    auto j = run_point(cfg.grid[0], cfg);
    if (decomp_cmd->parsed()) return print_point(only_suites(j, {"simple_count", "decomposition", "unitriangular", "k0"}), format);
    if (schur_cmd->parsed()) return print_point(only_suites(j, {"hecke", "schur", "h0"}), format == "csv" ? "json" : format);
    return print_point(only_suites(j, {"progenerator", "h0", "nilpotency"}), format == "csv" ? "json" : format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
