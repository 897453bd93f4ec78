#include "glshrink/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "glshrink/stats.hpp"

namespace glshrink {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string varying_id(const std::vector<double>& offsets) {
  std::string id = "varying[";
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (i) id += ",";
    id += fmt(offsets[i]);
  }
  return id + "]";
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.n = j.at("n").get<std::size_t>();
    if (j.contains("q_n")) c.q_n = j.at("q_n").get<std::size_t>();
    if (j.contains("delta2")) c.delta2 = j.at("delta2").get<double>();
    c.b_list = j.value("b_list", std::vector<double>{});
    c.rules = j.at("rules").get<std::vector<std::string>>();
    c.replicates = j.at("replicates").get<std::size_t>();
    c.seed = j.value("seed", std::uint64_t{1});
    c.output_path = j.value("output_path", std::string{"results.csv"});
    if (j.contains("threads")) {
      const auto& t = j.at("threads");
      if (t.is_string()) {
        if (t.get<std::string>() != "auto")
          throw std::invalid_argument("config: threads must be an integer or \"auto\"");
        c.threads = 0;
      } else {
        c.threads = t.get<int>();
      }
    }
    c.kernel = j.value("kernel", std::string{"horseshoe"});
    c.tau_c = j.value("tau_c", 1.0);
    c.signal_mode = j.value("signal_mode", std::string{"beta-min"});
    c.varying_b_offsets = j.value("varying_b_offsets", std::vector<double>{});
    c.sign_mode = j.value("sign_mode", std::string{"random"});
    c.placement = j.value("placement", std::string{"random"});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (c.rules.empty()) throw std::invalid_argument("config: rules must be non-empty");
  if (c.replicates < 100)
    throw std::invalid_argument("config: replicates must be >= 100");
  if (c.signal_mode == "beta-min") {
    if (c.b_list.empty())
      throw std::invalid_argument("config: b_list must be non-empty");
  } else if (c.signal_mode == "varying") {
    if (c.varying_b_offsets.empty())
      throw std::invalid_argument("config: varying_b_offsets must be non-empty");
  } else {
    throw std::invalid_argument("config: signal_mode must be beta-min or varying");
  }
  if (c.q_n && c.delta2)
    throw std::invalid_argument("config: give q_n or delta2, not both");
  if (c.sign_mode != "random" && c.sign_mode != "positive")
    throw std::invalid_argument("config: sign_mode must be random or positive");
  if (c.placement != "random" && c.placement != "prefix")
    throw std::invalid_argument("config: placement must be random or prefix");
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["n"] = c.n;
  if (c.q_n) j["q_n"] = *c.q_n;
  if (c.delta2) j["delta2"] = *c.delta2;
  j["b_list"] = c.b_list;
  j["rules"] = c.rules;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  j["output_path"] = c.output_path;
  j["threads"] = c.threads;
  j["kernel"] = c.kernel;
  j["tau_c"] = c.tau_c;
  j["signal_mode"] = c.signal_mode;
  j["varying_b_offsets"] = c.varying_b_offsets;
  j["sign_mode"] = c.sign_mode;
  j["placement"] = c.placement;
  return j.dump(2);
}

std::size_t resolve_q_n(const ExperimentConfig& config) {
  if (config.q_n) return *config.q_n;
  const double d2 = config.delta2 ? *config.delta2 : 1.5;
  const double q = std::round(std::pow(std::log(static_cast<double>(config.n)), d2));
  if (!(q >= 1.0) || q >= static_cast<double>(config.n))
    throw std::invalid_argument("config: resolved q_n outside [1, n)");
  return static_cast<std::size_t>(q);
}

ThetaSpec theta_spec_for(const ExperimentConfig& config, double b) {
  ThetaSpec spec;
  spec.n = config.n;
  spec.q_n = resolve_q_n(config);
  spec.sign_mode =
      config.sign_mode == "positive" ? SignMode::AllPositive : SignMode::RandomSigns;
  spec.placement =
      config.placement == "prefix" ? Placement::Prefix : Placement::RandomPositions;
  if (config.signal_mode == "varying") {
    const double a_star = universal_threshold(spec.n, spec.q_n);
    VaryingSignal v;
    v.magnitudes.resize(spec.q_n);
    for (std::size_t j = 0; j < spec.q_n; ++j)
      v.magnitudes[j] = a_star + config.varying_b_offsets[j % config.varying_b_offsets.size()];
    spec.signal = v;
  } else {
    spec.signal = BetaMinSignal{b};
  }
  return spec;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "rule_id,n,q_n,b_or_signal_id,replicates,fdr,se_fdr,fnr,se_fnr,risk,se_risk,"
      "hamming_norm,se_hamming,target,seed\n";
  for (const ResultRow& r : rows) {
    const RiskEstimate& e = r.estimate;
    out += r.rule_id + "," + std::to_string(r.n) + "," + std::to_string(r.q_n) + "," +
           r.b_or_signal_id + "," + std::to_string(r.replicates) + "," + fmt(e.fdr) +
           "," + fmt(e.se_fdr) + "," + fmt(e.fnr) + "," + fmt(e.se_fnr) + "," +
           fmt(e.risk) + "," + fmt(e.se_risk) + "," + fmt(e.hamming_normalized) + "," +
           fmt(e.se_hamming) + "," + fmt(e.target) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const ResultRow& r : rows) {
    const RiskEstimate& e = r.estimate;
    json o;
    o["rule_id"] = r.rule_id;
    o["n"] = r.n;
    o["q_n"] = r.q_n;
    o["b_or_signal_id"] = r.b_or_signal_id;
    o["replicates"] = r.replicates;
    o["fdr"] = e.fdr;
    o["se_fdr"] = e.se_fdr;
    o["fnr"] = e.fnr;
    o["se_fnr"] = e.se_fnr;
    o["risk"] = e.risk;
    o["se_risk"] = e.se_risk;
    o["hamming_norm"] = e.hamming_normalized;
    o["se_hamming"] = e.se_hamming;
    o["target"] = e.target;
    o["seed"] = r.seed;
    arr.push_back(o);
  }
  return arr.dump(2);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write_atomic: write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("write_atomic: rename failed for " + target.string() +
                             ": " + ec.message());
  }
}

namespace {

std::string json_mirror_path(const std::string& csv_path) {
  namespace fs = std::filesystem;
  fs::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

int write_outputs(const std::vector<ResultRow>& rows, const std::string& csv_path) {
  try {
    write_atomic(csv_path, rows_to_csv(rows));
    write_atomic(json_mirror_path(csv_path), rows_to_json(rows));
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int run_compare(const ExperimentConfig& config) {
  std::vector<RuleDescriptor> descriptors;
  PriorKernel kernel;
  try {
    kernel = parse_kernel(config.kernel);
    for (const std::string& token : config.rules) {
      RuleDescriptor d = parse_rule(token);
      d.tau_c = config.tau_c;
      descriptors.push_back(d);
    }
    resolve_q_n(config);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }

  std::vector<ResultRow> rows;
  const std::vector<double> b_values =
      config.signal_mode == "varying" ? std::vector<double>{0.0} : config.b_list;
  try {
    for (double b : b_values) {
      const ThetaSpec spec = theta_spec_for(config, b);
      for (const RuleDescriptor& d : descriptors) {
        ResultRow row;
        row.rule_id = d.id;
        row.n = spec.n;
        row.q_n = spec.q_n;
        row.b_or_signal_id = config.signal_mode == "varying"
                                 ? varying_id(config.varying_b_offsets)
                                 : fmt(b);
        row.replicates = config.replicates;
        row.seed = config.seed;
        row.estimate = estimate_risk(d, kernel, spec, config.replicates, config.seed,
                                     config.threads);
        rows.push_back(std::move(row));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  return write_outputs(rows, config.output_path);
}

int run_proposition1(const ExperimentConfig& config) {
  PriorKernel kernel;
  try {
    kernel = parse_kernel(config.kernel);
    if (!(kernel.a > 0.5))
      throw std::invalid_argument(
          "prop1: kernel must have a > 1/2 (got '" + config.kernel +
          "'); this experiment demonstrates the a > 1/2 failure mode");
    resolve_q_n(config);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }

  const PriorKernel control = horseshoe_kernel();
  std::vector<ResultRow> rows;
  try {
    for (double b : config.b_list) {
      const ThetaSpec spec = theta_spec_for(config, b);
      for (const PriorKernel* k :
           {static_cast<const PriorKernel*>(&kernel), &control}) {
        RuleDescriptor d = parse_rule("fixed:auto");
        d.tau_c = config.tau_c;
        d.id = "fixed:auto[" + k->name + "]";
        ResultRow row;
        row.rule_id = d.id;
        row.n = spec.n;
        row.q_n = spec.q_n;
        row.b_or_signal_id = fmt(b);
        row.replicates = config.replicates;
        row.seed = config.seed;
        row.estimate =
            estimate_risk(d, *k, spec, config.replicates, config.seed, config.threads);
        rows.push_back(std::move(row));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  return write_outputs(rows, config.output_path);
}

int run_shrinkage_curve(const std::string& kernel_name, double tau,
                        const std::string& x_grid, const std::string& output_path) {
  PriorKernel kernel;
  double lo = 0.0, hi = 0.0, step = 0.0;
  try {
    kernel = parse_kernel(kernel_name);
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("shrinkage-curve: tau must lie in (0,1)");
    const auto p1 = x_grid.find(':');
    const auto p2 = x_grid.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::invalid_argument("shrinkage-curve: x grid must be LO:HI:STEP");
    lo = std::stod(x_grid.substr(0, p1));
    hi = std::stod(x_grid.substr(p1 + 1, p2 - p1 - 1));
    step = std::stod(x_grid.substr(p2 + 1));
    if (!(step > 0.0) || hi < lo)
      throw std::invalid_argument("shrinkage-curve: need step > 0 and hi >= lo");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }

  std::string csv = "x,e_one_minus_kappa,e_kappa\n";
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const ShrinkageIntegrals si = shrinkage_integrals(kernel, ShrinkageQuery(x, tau));
    const double e1 = si.num / si.den;
    csv += fmt(x) + "," + fmt(e1) + "," + fmt(1.0 - e1) + "\n";
  }
  try {
    write_atomic(output_path, csv);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace glshrink
