#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "glshrink/baselines.hpp"
#include "glshrink/decision_rules.hpp"
#include "glshrink/shrinkage_table.hpp"

namespace glshrink {

enum class SignMode { AllPositive, RandomSigns };
enum class Placement { RandomPositions, Prefix };

/// Every non-null magnitude sits exactly at the boundary
/// sqrt(2 log(n/q_n)) + b, the configuration the worst-case risk is
/// evaluated at.
struct BetaMinSignal {
  double b = 0.0;
};

/// Per-signal magnitudes (length q_n, all > 0).
struct VaryingSignal {
  std::vector<double> magnitudes;
};

struct ThetaSpec {
  std::size_t n = 0;
  std::size_t q_n = 0;
  std::variant<BetaMinSignal, VaryingSignal> signal;
  SignMode sign_mode = SignMode::RandomSigns;
  Placement placement = Placement::RandomPositions;
};

/// Mean vector with exactly q_n non-zero entries; positions and signs
/// drawn from the seeded stream per the placement and sign-mode fields.
/// Deterministic in (spec, seed).
std::vector<double> generate_theta(const ThetaSpec& spec, std::uint64_t seed);

/// X_i = theta_i + Z_i with Z_i standard normal from the counter-based
/// stream keyed by (seed, i).
std::vector<double> sample_data(std::span<const double> theta, std::uint64_t seed);

/// False discovery and false negative proportions with the max(.,1)
/// denominator conventions.
struct FdpFnp {
  double fdp = 0.0;
  double fnp = 0.0;
};
FdpFnp fdp_fnp(std::span<const double> theta, std::span<const std::uint8_t> psi);

/// Count of false positives plus false negatives.
long hamming_loss(std::span<const double> theta, std::span<const std::uint8_t> psi);

struct RiskEstimate {
  double fdr = 0.0;
  double fnr = 0.0;
  double risk = 0.0;
  double hamming_normalized = 0.0;
  double se_fdr = 0.0;
  double se_fnr = 0.0;
  double se_risk = 0.0;
  double se_hamming = 0.0;
  std::size_t replicates = 0;
  double target = 0.0;
  std::string rule_id;
  /// Smallest realized plug-in tau across replicates (empirical Bayes
  /// rules only); lets callers verify the 1/n floor.
  std::optional<double> min_tau_hat;
};

struct TheoryTargets {
  double minimax = 0.0;
  double lambda_n = 0.0;
};

/// Asymptotic minimax value for the given signal configuration:
/// 1 - Phi(b) at the beta-min boundary, the averaged Gaussian tail sum
/// for varying signals.
TheoryTargets theory_targets(const ThetaSpec& spec);

/// Parsed rule descriptor. Tokens: "fixed:TAU", "fixed:auto", "eb",
/// "eb:C1:C2", "fb", "fb:DELTA3:GRID", "bh:ALPHA", "bh:auto", "oracle",
/// "ell", "ell:T".
struct RuleDescriptor {
  enum class Kind { FixedTau, EmpiricalBayes, FullBayes, Bh, Oracle, Ell };
  Kind kind = Kind::Oracle;
  bool tau_auto = false;
  double tau = 0.1;
  double tau_c = 1.0;  // "fixed:auto" resolves tau = tau_c * q_n / n
  double c1 = 2.0;
  double c2 = 1.0;
  double delta3 = 0.3;
  int grid_size = 64;
  bool bh_auto = false;
  double bh_alpha = 0.1;
  double ell_t = 0.5;
  std::string id;
};

RuleDescriptor parse_rule(const std::string& token);

/// A rule bound to one problem size (n, q_n) with its shrinkage
/// functionals tabulated, so Monte Carlo replication is cheap. decide()
/// is const, deterministic, and safe to call concurrently; its decisions
/// agree with the direct per-coordinate quadrature path.
class PreparedRule {
 public:
  PreparedRule(const RuleDescriptor& desc, const PriorKernel& kernel, std::size_t n,
               std::size_t q_n, const QuadratureConfig& config = {});
  ~PreparedRule();
  PreparedRule(PreparedRule&&) noexcept;

  DecisionVector decide(std::span<const double> data) const;
  const std::string& id() const { return id_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string id_;
};

/// Monte Carlo risk of a rule over independent replicates (fresh signal
/// placement and noise per replicate; magnitudes fixed). Standard errors
/// are sample standard deviations over replicates divided by
/// sqrt(replicates). Bit-identical output for identical inputs
/// regardless of `threads`. Requires replicates >= 100.
RiskEstimate estimate_risk(const RuleDescriptor& rule, const PriorKernel& kernel,
                           const ThetaSpec& spec, std::size_t replicates,
                           std::uint64_t seed, int threads = 1,
                           const QuadratureConfig& config = {});

}  // namespace glshrink
