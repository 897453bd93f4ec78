#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "glshrink/experiment.hpp"
#include "glshrink/prior_kernel.hpp"

namespace {

using namespace glshrink;

int parse_threads(const std::string& value) {
  if (value == "auto") return 0;
  try {
    std::size_t pos = 0;
    const int t = std::stoi(value, &pos);
    if (pos != value.size() || t < 0) throw std::invalid_argument("");
    return t;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--threads", "expected a non-negative integer or 'auto'");
  }
}

std::optional<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open config file: " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

void apply_overrides(ExperimentConfig& config, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& threads,
                     const std::optional<std::string>& out_dir) {
  if (seed) config.seed = *seed;
  if (threads) {
    config.threads = parse_threads(*threads);
  } else if (const char* env = std::getenv("GLSHRINK_THREADS")) {
    config.threads = parse_threads(env);
  }
  if (out_dir) {
    const std::filesystem::path base(*out_dir);
    const std::filesystem::path name =
        std::filesystem::path(config.output_path).filename();
    config.output_path = (base / name).string();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian multiple-testing rules for the sparse normal means model "
               "and a Monte Carlo risk laboratory"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::string> threads;
  std::optional<std::string> out_dir;
  app.add_option("--seed", seed, "Master seed override");
  app.add_option("--threads", threads, "Worker threads (integer or 'auto')");
  app.add_option("--out", out_dir, "Directory for output files");

  std::string config_path;
  auto* compare = app.add_subcommand(
      "compare", "Monte Carlo risk table over a (rule x b) grid");
  compare->add_option("--config", config_path, "JSON experiment config")->required();

  auto* prop1 = app.add_subcommand(
      "prop1", "a > 1/2 failure-mode rows beside the horseshoe control");
  prop1->add_option("--config", config_path, "JSON experiment config")->required();

  std::string kernel_name = "horseshoe";
  double tau = 0.1;
  std::string x_grid = "0:10:0.1";
  std::string curve_out = "shrinkage_curve.csv";
  auto* curve = app.add_subcommand("shrinkage-curve",
                                   "Posterior shrinkage weight as a function of x");
  curve->add_option("--kernel", kernel_name, "Kernel name");
  curve->add_option("--tau", tau, "Global scale in (0,1)")->required();
  curve->add_option("--x-grid", x_grid, "Grid LO:HI:STEP");
  curve->add_option("--out-file", curve_out, "Output CSV path");

  std::string vk_kernel = "horseshoe";
  double vk_M = 1.0, vk_c0 = 0.5, vk_t0 = 1.0;
  auto* vk = app.add_subcommand("validate-kernel",
                                "Grid certificate for the kernel assumptions");
  vk->add_option("--kernel", vk_kernel, "Kernel name");
  vk->add_option("--max-bound", vk_M, "Declared sup bound M");
  vk->add_option("--tail-floor", vk_c0, "Declared tail floor c0");
  vk->add_option("--tail-from", vk_t0, "Tail floor applies for t >= this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compare->parsed() || prop1->parsed()) {
      auto config = load_config(config_path);
      if (!config) return kExitIo;
      apply_overrides(*config, seed, threads, out_dir);
      return compare->parsed() ? run_compare(*config) : run_proposition1(*config);
    }
    if (curve->parsed()) {
      std::string out_path = curve_out;
      if (out_dir)
        out_path = (std::filesystem::path(*out_dir) /
                    std::filesystem::path(curve_out).filename())
                       .string();
      return run_shrinkage_curve(kernel_name, tau, x_grid, out_path);
    }
    if (vk->parsed()) {
      const PriorKernel kernel = parse_kernel(vk_kernel);
      const KernelValidationReport report =
          validate_kernel(kernel, default_validation_grid(), vk_M, vk_c0, vk_t0);
      std::cout << "kernel: " << kernel.name << "\n"
                << "sup_L_on_grid: " << report.sup_L_on_grid << "\n"
                << "min_L_tail_on_grid: " << report.min_L_tail_on_grid << "\n"
                << "declared_M: " << report.declared_M << "\n"
                << "declared_c0: " << report.declared_c0 << "\n"
                << "declared_t0: " << report.declared_t0 << "\n"
                << "passed: " << (report.passed ? "true" : "false") << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
