#include "glshrink/risk_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "glshrink/rng.hpp"
#include "glshrink/stats.hpp"

namespace glshrink {

namespace {

// Seed-stream tags: replicate-level purposes.
constexpr std::uint64_t kTagTheta = 1;
constexpr std::uint64_t kTagNoise = 2;

double beta_min_magnitude(const ThetaSpec& spec, double b) {
  const double mag = universal_threshold(spec.n, spec.q_n) + b;
  if (!(mag > 0.0))
    throw std::domain_error("generate_theta: boundary magnitude " + std::to_string(mag) +
                            " is not positive (b too negative)");
  return mag;
}

void validate_spec(const ThetaSpec& spec) {
  if (spec.q_n < 1 || spec.q_n >= spec.n)
    throw std::invalid_argument("ThetaSpec: need 1 <= q_n < n");
  if (const auto* v = std::get_if<VaryingSignal>(&spec.signal)) {
    if (v->magnitudes.size() != spec.q_n)
      throw std::invalid_argument("ThetaSpec: varying magnitudes must have length q_n");
    for (double m : v->magnitudes)
      if (!(m > 0.0)) throw std::domain_error("ThetaSpec: varying magnitudes must be > 0");
  }
}

}  // namespace

std::vector<double> generate_theta(const ThetaSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  std::vector<double> magnitudes;
  if (const auto* bm = std::get_if<BetaMinSignal>(&spec.signal)) {
    magnitudes.assign(spec.q_n, beta_min_magnitude(spec, bm->b));
  } else {
    magnitudes = std::get<VaryingSignal>(spec.signal).magnitudes;
  }

  std::vector<double> theta(spec.n, 0.0);
  RngStream rng(seed, 0, kTagTheta);

  std::vector<std::size_t> positions(spec.q_n);
  if (spec.placement == Placement::Prefix) {
    for (std::size_t j = 0; j < spec.q_n; ++j) positions[j] = j;
  } else {
    // Partial Fisher-Yates over [0, n): the first q_n entries of the
    // permutation.
    std::vector<std::size_t> idx(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) idx[i] = i;
    for (std::size_t j = 0; j < spec.q_n; ++j) {
      const std::size_t r = j + static_cast<std::size_t>(rng.next_u64() % (spec.n - j));
      std::swap(idx[j], idx[r]);
      positions[j] = idx[j];
    }
  }
  for (std::size_t j = 0; j < spec.q_n; ++j) {
    double sign = 1.0;
    if (spec.sign_mode == SignMode::RandomSigns) sign = rng.next_u64() & 1 ? 1.0 : -1.0;
    theta[positions[j]] = sign * magnitudes[j];
  }
  return theta;
}

std::vector<double> sample_data(std::span<const double> theta, std::uint64_t seed) {
  std::vector<double> data(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i]))
      throw std::domain_error("sample_data: theta must be finite");
    data[i] = theta[i] + normal_draw(seed, i);
  }
  return data;
}

FdpFnp fdp_fnp(std::span<const double> theta, std::span<const std::uint8_t> psi) {
  if (theta.size() != psi.size())
    throw std::invalid_argument("fdp_fnp: length mismatch");
  std::size_t rejections = 0, false_pos = 0, signals = 0, misses = 0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const bool sig = theta[i] != 0.0;
    const bool rej = psi[i] != 0;
    if (rej) ++rejections;
    if (rej && !sig) ++false_pos;
    if (sig) {
      ++signals;
      if (!rej) ++misses;
    }
  }
  FdpFnp out;
  out.fdp = static_cast<double>(false_pos) /
            static_cast<double>(std::max<std::size_t>(rejections, 1));
  out.fnp = static_cast<double>(misses) /
            static_cast<double>(std::max<std::size_t>(signals, 1));
  return out;
}

long hamming_loss(std::span<const double> theta, std::span<const std::uint8_t> psi) {
  if (theta.size() != psi.size())
    throw std::invalid_argument("hamming_loss: length mismatch");
  long loss = 0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const bool sig = theta[i] != 0.0;
    const bool rej = psi[i] != 0;
    if (sig != rej) ++loss;
  }
  return loss;
}

TheoryTargets theory_targets(const ThetaSpec& spec) {
  validate_spec(spec);
  TheoryTargets out;
  if (const auto* bm = std::get_if<BetaMinSignal>(&spec.signal)) {
    out.minimax = normal_sf(bm->b);
    out.lambda_n = out.minimax;
    return out;
  }
  const auto& mags = std::get<VaryingSignal>(spec.signal).magnitudes;
  const double a_star = universal_threshold(spec.n, spec.q_n);
  double sum = 0.0;
  for (double m : mags) sum += normal_sf(m - a_star);
  out.lambda_n = sum / static_cast<double>(mags.size());
  out.minimax = out.lambda_n;
  return out;
}

RuleDescriptor parse_rule(const std::string& token) {
  RuleDescriptor d;
  d.id = token;
  const auto num = [&token](const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument("parse_rule: bad number in '" + token + "'");
    return v;
  };
  const auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const auto sep = s.find(':', start);
      parts.push_back(s.substr(start, sep - start));
      if (sep == std::string::npos) break;
      start = sep + 1;
    }
    return parts;
  };
  const std::vector<std::string> parts = split(token);
  const std::string& head = parts[0];
  try {
    if (head == "fixed") {
      d.kind = RuleDescriptor::Kind::FixedTau;
      if (parts.size() != 2)
        throw std::invalid_argument("parse_rule: expected fixed:TAU or fixed:auto");
      if (parts[1] == "auto")
        d.tau_auto = true;
      else
        d.tau = num(parts[1]);
      return d;
    }
    if (head == "eb") {
      d.kind = RuleDescriptor::Kind::EmpiricalBayes;
      if (parts.size() == 3) {
        d.c1 = num(parts[1]);
        d.c2 = num(parts[2]);
      } else if (parts.size() != 1) {
        throw std::invalid_argument("parse_rule: expected eb or eb:C1:C2");
      }
      return d;
    }
    if (head == "fb") {
      d.kind = RuleDescriptor::Kind::FullBayes;
      if (parts.size() == 3) {
        d.delta3 = num(parts[1]);
        d.grid_size = static_cast<int>(num(parts[2]));
      } else if (parts.size() != 1) {
        throw std::invalid_argument("parse_rule: expected fb or fb:DELTA3:GRID");
      }
      return d;
    }
    if (head == "bh") {
      d.kind = RuleDescriptor::Kind::Bh;
      if (parts.size() != 2)
        throw std::invalid_argument("parse_rule: expected bh:ALPHA or bh:auto");
      if (parts[1] == "auto")
        d.bh_auto = true;
      else
        d.bh_alpha = num(parts[1]);
      return d;
    }
    if (head == "oracle") {
      if (parts.size() != 1) throw std::invalid_argument("parse_rule: expected oracle");
      d.kind = RuleDescriptor::Kind::Oracle;
      return d;
    }
    if (head == "ell") {
      d.kind = RuleDescriptor::Kind::Ell;
      if (parts.size() == 2)
        d.ell_t = num(parts[1]);
      else if (parts.size() != 1)
        throw std::invalid_argument("parse_rule: expected ell or ell:T");
      return d;
    }
  } catch (const std::invalid_argument&) {
    throw;
  }
  throw std::invalid_argument("parse_rule: unknown rule '" + token + "'");
}

// ---------------------------------------------------------------------------
// PreparedRule

struct PreparedRule::Impl {
  RuleDescriptor desc;
  PriorKernel kernel;
  std::size_t n = 0;
  std::size_t q_n = 0;
  QuadratureConfig config;
  double table_x_max = 0.0;

  // FixedTau
  std::shared_ptr<const ShrinkageTable> fixed_table;

  // EmpiricalBayes: tables memoized by exceedance count (tau_hat takes the
  // discrete values max(1/n, k/(c2 n))). The cache is value-deterministic,
  // so lazily filling it from several threads cannot change results.
  mutable std::mutex eb_mutex;
  mutable std::map<std::size_t, std::shared_ptr<const ShrinkageTable>> eb_tables;

  // FullBayes
  std::vector<double> fb_grid;
  std::vector<double> fb_prior_mass;  // prior density * trapezoid cell, normalized
  std::vector<std::shared_ptr<const ShrinkageTable>> fb_tables;

  std::shared_ptr<const ShrinkageTable> make_table(double tau) const {
    return std::make_shared<const ShrinkageTable>(kernel, tau, table_x_max, 64, config);
  }

  double resolved_tau() const {
    return desc.tau_auto
               ? desc.tau_c * static_cast<double>(q_n) / static_cast<double>(n)
               : desc.tau;
  }

  double eb_tau(std::size_t count) const {
    return std::max(1.0 / static_cast<double>(n),
                    static_cast<double>(count) / (desc.c2 * static_cast<double>(n)));
  }

  std::shared_ptr<const ShrinkageTable> eb_table(std::size_t count) const {
    std::lock_guard<std::mutex> lock(eb_mutex);
    auto it = eb_tables.find(count);
    if (it != eb_tables.end()) return it->second;
    auto table = make_table(eb_tau(count));
    eb_tables.emplace(count, table);
    return table;
  }
};

PreparedRule::PreparedRule(const RuleDescriptor& desc, const PriorKernel& kernel,
                           std::size_t n, std::size_t q_n, const QuadratureConfig& config)
    : impl_(std::make_unique<Impl>()), id_(desc.id) {
  if (n < 2 || q_n < 1 || q_n >= n)
    throw std::invalid_argument("PreparedRule: need n >= 2 and 1 <= q_n < n");
  impl_->desc = desc;
  impl_->kernel = kernel;
  impl_->n = n;
  impl_->q_n = q_n;
  impl_->config = config;
  // Generous range: boundary magnitudes at this problem size plus noise
  // excursions; rare points beyond fall back to direct quadrature.
  impl_->table_x_max = universal_threshold(n, q_n) + 12.0;

  switch (desc.kind) {
    case RuleDescriptor::Kind::FixedTau: {
      const double tau = impl_->resolved_tau();
      if (!(tau > 0.0 && tau < 1.0))
        throw std::domain_error("PreparedRule: resolved tau outside (0,1)");
      impl_->fixed_table = impl_->make_table(tau);
      break;
    }
    case RuleDescriptor::Kind::EmpiricalBayes: {
      if (!(desc.c1 >= 2.0 && desc.c2 >= 1.0))
        throw std::invalid_argument("PreparedRule: eb requires c1 >= 2 and c2 >= 1");
      break;  // tables built on demand per realized tau_hat
    }
    case RuleDescriptor::Kind::FullBayes: {
      if (!(desc.delta3 > 0.0 && desc.delta3 < 0.5))
        throw std::invalid_argument("PreparedRule: fb requires delta3 in (0, 1/2)");
      if (desc.grid_size < 16)
        throw std::invalid_argument("PreparedRule: fb requires grid_size >= 16");
      const double nn = static_cast<double>(n);
      const double lower = 1.0 / nn;
      const double alpha_n = std::pow(std::log(nn), desc.delta3) / nn;
      if (!(alpha_n > lower && alpha_n < 1.0))
        throw std::invalid_argument("PreparedRule: fb support [1/n, alpha_n] is degenerate");
      impl_->fb_grid = log_spaced_grid(lower, alpha_n, desc.grid_size);
      // Uniform prior density over the support: mass proportional to the
      // trapezoid cell widths.
      const std::size_t m = impl_->fb_grid.size();
      impl_->fb_prior_mass.assign(m, 0.0);
      double total = 0.0;
      for (std::size_t g = 0; g < m; ++g) {
        const double left = g == 0 ? impl_->fb_grid[0] : impl_->fb_grid[g - 1];
        const double right = g + 1 == m ? impl_->fb_grid[m - 1] : impl_->fb_grid[g + 1];
        impl_->fb_prior_mass[g] = 0.5 * (right - left);
        total += impl_->fb_prior_mass[g];
      }
      for (double& w : impl_->fb_prior_mass) w /= total;
      impl_->fb_tables.reserve(m);
      for (double tau : impl_->fb_grid) impl_->fb_tables.push_back(impl_->make_table(tau));
      break;
    }
    case RuleDescriptor::Kind::Bh: {
      const double alpha =
          desc.bh_auto ? 1.0 / std::log(static_cast<double>(n)) : desc.bh_alpha;
      if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("PreparedRule: bh alpha outside (0,1)");
      break;
    }
    case RuleDescriptor::Kind::Oracle:
    case RuleDescriptor::Kind::Ell:
      break;
  }
}

PreparedRule::~PreparedRule() = default;
PreparedRule::PreparedRule(PreparedRule&&) noexcept = default;

DecisionVector PreparedRule::decide(std::span<const double> data) const {
  const Impl& im = *impl_;
  if (data.size() != im.n)
    throw std::invalid_argument("PreparedRule::decide: data length != n");
  DecisionVector out;
  out.psi.resize(data.size());

  switch (im.desc.kind) {
    case RuleDescriptor::Kind::FixedTau: {
      for (std::size_t i = 0; i < data.size(); ++i)
        out.psi[i] = im.fixed_table->e_one_minus_kappa(data[i]) > 0.5 ? 1 : 0;
      return out;
    }
    case RuleDescriptor::Kind::EmpiricalBayes: {
      const double cutoff =
          std::sqrt(im.desc.c1 * std::log(static_cast<double>(im.n)));
      std::size_t count = 0;
      for (double x : data)
        if (std::abs(x) > cutoff) ++count;
      const auto table = im.eb_table(count);
      for (std::size_t i = 0; i < data.size(); ++i)
        out.psi[i] = table->e_one_minus_kappa(data[i]) > 0.5 ? 1 : 0;
      out.meta.tau_hat = im.eb_tau(count);
      return out;
    }
    case RuleDescriptor::Kind::FullBayes: {
      const std::size_t m = im.fb_grid.size();
      std::vector<double> log_w(m);
      for (std::size_t g = 0; g < m; ++g) {
        double lw = std::log(im.fb_prior_mass[g]);
        const auto& table = *im.fb_tables[g];
        for (double x : data) lw += table.log_marginal_rel(x);
        log_w[g] = lw;
      }
      const double mx = *std::max_element(log_w.begin(), log_w.end());
      std::vector<double> w(m);
      double total = 0.0;
      for (std::size_t g = 0; g < m; ++g) {
        w[g] = std::exp(log_w[g] - mx);
        total += w[g];
      }
      for (double& v : w) v /= total;
      for (std::size_t i = 0; i < data.size(); ++i) {
        double mean = 0.0;
        for (std::size_t g = 0; g < m; ++g)
          mean += w[g] * im.fb_tables[g]->e_one_minus_kappa(data[i]);
        out.psi[i] = mean > 0.5 ? 1 : 0;
      }
      return out;
    }
    case RuleDescriptor::Kind::Bh: {
      const double alpha = im.desc.bh_auto
                               ? 1.0 / std::log(static_cast<double>(im.n))
                               : im.desc.bh_alpha;
      return bh_procedure(data, alpha);
    }
    case RuleDescriptor::Kind::Oracle:
      return oracle_threshold(data, im.q_n);
    case RuleDescriptor::Kind::Ell:
      return decide_ell(data, im.desc.ell_t);
  }
  throw std::logic_error("PreparedRule::decide: unreachable");
}

// ---------------------------------------------------------------------------
// estimate_risk

namespace {

struct ReplicateStats {
  double fdp = 0.0;
  double fnp = 0.0;
  double hamming_norm = 0.0;
  double tau_hat = std::numeric_limits<double>::infinity();
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Kahan-compensated mean and standard error, reduced in replicate order
// so the result does not depend on the thread count.
MeanSe reduce(const std::vector<double>& values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double n = static_cast<double>(values.size());
  MeanSe out;
  out.mean = sum / n;
  double ss = 0.0, comp2 = 0.0;
  for (double v : values) {
    const double d = (v - out.mean) * (v - out.mean) - comp2;
    const double t = ss + d;
    comp2 = (t - ss) - d;
    ss = t;
  }
  out.se = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  return out;
}

}  // namespace

RiskEstimate estimate_risk(const RuleDescriptor& rule, const PriorKernel& kernel,
                           const ThetaSpec& spec, std::size_t replicates,
                           std::uint64_t seed, int threads,
                           const QuadratureConfig& config) {
  if (replicates < 100)
    throw std::invalid_argument("estimate_risk: need replicates >= 100");
  validate_spec(spec);
  // Surface bad beta-min configurations before spawning workers.
  if (const auto* bm = std::get_if<BetaMinSignal>(&spec.signal))
    beta_min_magnitude(spec, bm->b);

  const PreparedRule prepared(rule, kernel, spec.n, spec.q_n, config);

  std::vector<ReplicateStats> stats(replicates);
  const auto run_replicate = [&](std::size_t r) {
    const std::uint64_t theta_seed = derive_seed(seed, r, kTagTheta);
    const std::uint64_t noise_seed = derive_seed(seed, r, kTagNoise);
    const std::vector<double> theta = generate_theta(spec, theta_seed);
    const std::vector<double> data = sample_data(theta, noise_seed);
    const DecisionVector dv = prepared.decide(data);
    const FdpFnp f = fdp_fnp(theta, dv.psi);
    ReplicateStats s;
    s.fdp = f.fdp;
    s.fnp = f.fnp;
    s.hamming_norm = static_cast<double>(hamming_loss(theta, dv.psi)) /
                     static_cast<double>(spec.q_n);
    if (dv.meta.tau_hat) s.tau_hat = *dv.meta.tau_hat;
    stats[r] = s;
  };

  int n_threads = threads;
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(replicates)));

  if (n_threads == 1) {
    for (std::size_t r = 0; r < replicates; ++r) run_replicate(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t r = next.fetch_add(1);
          if (r >= stats.size()) return;
          run_replicate(r);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<double> fdp(replicates), fnp(replicates), riskv(replicates),
      ham(replicates);
  double min_tau_hat = std::numeric_limits<double>::infinity();
  bool has_tau_hat = false;
  for (std::size_t r = 0; r < replicates; ++r) {
    fdp[r] = stats[r].fdp;
    fnp[r] = stats[r].fnp;
    riskv[r] = stats[r].fdp + stats[r].fnp;
    ham[r] = stats[r].hamming_norm;
    if (std::isfinite(stats[r].tau_hat)) {
      has_tau_hat = true;
      min_tau_hat = std::min(min_tau_hat, stats[r].tau_hat);
    }
  }
  const MeanSe m_fdp = reduce(fdp), m_fnp = reduce(fnp), m_risk = reduce(riskv),
               m_ham = reduce(ham);

  RiskEstimate out;
  out.fdr = m_fdp.mean;
  out.fnr = m_fnp.mean;
  out.risk = out.fdr + out.fnr;  // identical replicate sums, so exact
  out.hamming_normalized = m_ham.mean;
  out.se_fdr = m_fdp.se;
  out.se_fnr = m_fnp.se;
  out.se_risk = m_risk.se;
  out.se_hamming = m_ham.se;
  out.replicates = replicates;
  out.target = theory_targets(spec).minimax;
  out.rule_id = rule.id;
  if (has_tau_hat) out.min_tau_hat = min_tau_hat;
  return out;
}

}  // namespace glshrink
