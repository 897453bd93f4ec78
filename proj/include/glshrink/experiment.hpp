#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glshrink/risk_lab.hpp"

namespace glshrink {

/// One experiment: a problem size, a list of boundary offsets, and a list
/// of rule descriptors, replicated under a single master seed.
struct ExperimentConfig {
  std::size_t n = 20000;
  std::optional<std::size_t> q_n;    // exactly one of q_n / delta2 is used
  std::optional<double> delta2;      // q_n = round((log n)^delta2)
  std::vector<double> b_list;
  std::vector<std::string> rules;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  std::string output_path = "results.csv";
  int threads = 0;  // 0 = auto
  std::string kernel = "horseshoe";
  double tau_c = 1.0;
  std::string signal_mode = "beta-min";      // or "varying"
  std::vector<double> varying_b_offsets;     // per-signal offsets, cycled
  std::string sign_mode = "random";          // or "positive"
  std::string placement = "random";          // or "prefix"

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the flat JSON document; throws std::invalid_argument with the
/// offending key on malformed input.
ExperimentConfig parse_config_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

std::size_t resolve_q_n(const ExperimentConfig& config);
ThetaSpec theta_spec_for(const ExperimentConfig& config, double b);

/// One output row of the risk table.
struct ResultRow {
  std::string rule_id;
  std::size_t n = 0;
  std::size_t q_n = 0;
  std::string b_or_signal_id;
  std::size_t replicates = 0;
  RiskEstimate estimate;
  std::uint64_t seed = 0;
};

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);

/// Writes content to path via a temp file and rename, so an interrupted
/// run never leaves a partial file behind. Throws std::runtime_error on
/// I/O failure.
void write_atomic(const std::string& path, const std::string& content);

/// Exit codes shared by the runners and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

/// Runs the (rule x b) grid and writes the CSV plus a JSON mirror next to
/// it. Returns an exit code; complaints go to stderr.
int run_compare(const ExperimentConfig& config);

/// Side-by-side rows for an a > 1/2 kernel and the horseshoe control at
/// identical settings. The config kernel must have a > 1/2.
int run_proposition1(const ExperimentConfig& config);

/// CSV of (x, E(1-kappa|x,tau), E(kappa|x,tau)) over an inclusive grid.
int run_shrinkage_curve(const std::string& kernel_name, double tau,
                        const std::string& x_grid, const std::string& output_path);

}  // namespace glshrink
