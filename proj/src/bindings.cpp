#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <variant>

#include "glshrink/baselines.hpp"
#include "glshrink/decision_rules.hpp"
#include "glshrink/experiment.hpp"
#include "glshrink/prior_kernel.hpp"
#include "glshrink/risk_lab.hpp"
#include "glshrink/shrinkage.hpp"
#include "glshrink/stats.hpp"

namespace py = pybind11;
using namespace glshrink;

namespace {

ThetaSpec make_theta_spec(std::size_t n, std::size_t q_n, const py::object& signal,
                          const std::string& sign_mode, const std::string& placement) {
  ThetaSpec spec;
  spec.n = n;
  spec.q_n = q_n;
  if (py::isinstance<py::float_>(signal) || py::isinstance<py::int_>(signal)) {
    spec.signal = BetaMinSignal{signal.cast<double>()};
  } else {
    spec.signal = VaryingSignal{signal.cast<std::vector<double>>()};
  }
  if (sign_mode == "positive")
    spec.sign_mode = SignMode::AllPositive;
  else if (sign_mode == "random")
    spec.sign_mode = SignMode::RandomSigns;
  else
    throw std::invalid_argument("sign_mode must be 'random' or 'positive'");
  if (placement == "prefix")
    spec.placement = Placement::Prefix;
  else if (placement == "random")
    spec.placement = Placement::RandomPositions;
  else
    throw std::invalid_argument("placement must be 'random' or 'prefix'");
  return spec;
}

py::dict estimate_to_dict(const RiskEstimate& e) {
  py::dict d;
  d["fdr"] = e.fdr;
  d["fnr"] = e.fnr;
  d["risk"] = e.risk;
  d["hamming_normalized"] = e.hamming_normalized;
  d["se_fdr"] = e.se_fdr;
  d["se_fnr"] = e.se_fnr;
  d["se_risk"] = e.se_risk;
  d["se_hamming"] = e.se_hamming;
  d["replicates"] = e.replicates;
  d["target"] = e.target;
  d["rule_id"] = e.rule_id;
  if (e.min_tau_hat) d["min_tau_hat"] = *e.min_tau_hat;
  return d;
}

py::dict decision_to_dict(const DecisionVector& dv) {
  py::dict d;
  d["psi"] = dv.psi;
  if (dv.meta.tau_hat) d["tau_hat"] = *dv.meta.tau_hat;
  if (dv.meta.p_hat) d["p_hat"] = *dv.meta.p_hat;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Bayesian multiple-testing rules for the sparse normal means model "
      "under global-local shrinkage priors, with a Monte Carlo risk lab";

  py::class_<PriorKernel>(m, "PriorKernel")
      .def_readonly("a", &PriorKernel::a)
      .def_readonly("name", &PriorKernel::name)
      .def_readonly("family_params", &PriorKernel::family_params)
      .def("__repr__",
           [](const PriorKernel& k) { return "<PriorKernel " + k.name + ">"; });

  m.def("horseshoe_kernel", &horseshoe_kernel);
  m.def("strawderman_berger_kernel", &strawderman_berger_kernel);
  m.def("tpbn_kernel", &tpbn_kernel, py::arg("alpha"), py::arg("beta"));
  m.def("inv_gamma_kernel", &inv_gamma_kernel, py::arg("shape"));
  m.def("parse_kernel", &parse_kernel, py::arg("name"));
  m.def("eval_L", &eval_L, py::arg("kernel"), py::arg("t"));

  py::class_<KernelValidationReport>(m, "KernelValidationReport")
      .def_readonly("sup_L_on_grid", &KernelValidationReport::sup_L_on_grid)
      .def_readonly("min_L_tail_on_grid", &KernelValidationReport::min_L_tail_on_grid)
      .def_readonly("declared_M", &KernelValidationReport::declared_M)
      .def_readonly("declared_c0", &KernelValidationReport::declared_c0)
      .def_readonly("declared_t0", &KernelValidationReport::declared_t0)
      .def_readonly("passed", &KernelValidationReport::passed);
  m.def("validate_kernel", &validate_kernel, py::arg("kernel"), py::arg("grid"),
        py::arg("M"), py::arg("c0"), py::arg("t0"));
  m.def("default_validation_grid", &default_validation_grid);

  m.def(
      "log_posterior_kappa_density",
      [](const PriorKernel& kernel, double x, double tau, double kappa) {
        return log_posterior_kappa_density_unnorm(kernel, ShrinkageQuery(x, tau), kappa);
      },
      py::arg("kernel"), py::arg("x"), py::arg("tau"), py::arg("kappa"));
  m.def(
      "expected_one_minus_kappa",
      [](const PriorKernel& kernel, double x, double tau) {
        return expected_one_minus_kappa(kernel, ShrinkageQuery(x, tau));
      },
      py::arg("kernel"), py::arg("x"), py::arg("tau"));
  m.def(
      "expected_kappa",
      [](const PriorKernel& kernel, double x, double tau) {
        return expected_kappa(kernel, ShrinkageQuery(x, tau));
      },
      py::arg("kernel"), py::arg("x"), py::arg("tau"));
  m.def(
      "importance_oracle",
      [](const PriorKernel& kernel, double x, double tau, std::int64_t n_draws,
         std::uint64_t seed) {
        const OracleEstimate oe =
            importance_oracle(kernel, ShrinkageQuery(x, tau), n_draws, seed);
        return py::make_tuple(oe.estimate, oe.std_error);
      },
      py::arg("kernel"), py::arg("x"), py::arg("tau"), py::arg("n_draws"),
      py::arg("seed"));
  m.def("type1_bound_rate", &type1_bound_rate, py::arg("kernel"), py::arg("tau"));
  m.def("large_a_upper_rate", &large_a_upper_rate, py::arg("kernel"), py::arg("x"),
        py::arg("tau"));

  m.def(
      "decide_fixed_tau",
      [](const std::vector<double>& data, const PriorKernel& kernel, double tau,
         double threshold) {
        return decision_to_dict(decide_fixed_tau(data, kernel, tau, threshold));
      },
      py::arg("data"), py::arg("kernel"), py::arg("tau"), py::arg("threshold") = 0.5);
  m.def(
      "estimate_tau_eb",
      [](const std::vector<double>& data, double c1, double c2) {
        return estimate_tau_eb(data, c1, c2);
      },
      py::arg("data"), py::arg("c1") = 2.0, py::arg("c2") = 1.0);
  m.def(
      "decide_eb",
      [](const std::vector<double>& data, const PriorKernel& kernel, double c1,
         double c2, double threshold) {
        return decision_to_dict(decide_eb(data, kernel, c1, c2, threshold));
      },
      py::arg("data"), py::arg("kernel"), py::arg("c1") = 2.0, py::arg("c2") = 1.0,
      py::arg("threshold") = 0.5);
  m.def(
      "tau_posterior_weights",
      [](const std::vector<double>& data, const PriorKernel& kernel, double lower,
         double upper, int grid_size) {
        return tau_posterior_weights(data, kernel, {}, lower, upper, grid_size);
      },
      py::arg("data"), py::arg("kernel"), py::arg("lower"), py::arg("upper"),
      py::arg("grid_size"));
  m.def("log_spaced_grid", &log_spaced_grid, py::arg("lower"), py::arg("upper"),
        py::arg("size"));
  m.def(
      "decide_fb",
      [](const std::vector<double>& data, const PriorKernel& kernel, double alpha_n,
         int grid_size, double threshold) {
        DecisionRuleSpec spec;
        FullBayesRule fb;
        fb.alpha_n = alpha_n;
        fb.grid_size = grid_size;
        spec.variant = fb;
        spec.kernel = kernel;
        spec.threshold = threshold;
        return decision_to_dict(decide_fb(data, spec));
      },
      py::arg("data"), py::arg("kernel"), py::arg("alpha_n"), py::arg("grid_size") = 64,
      py::arg("threshold") = 0.5);

  m.def("quasi_cauchy_density", &quasi_cauchy_density, py::arg("x"));
  m.def(
      "ell_values",
      [](const std::vector<double>& data, double p) { return ell_values(data, p); },
      py::arg("data"), py::arg("p"));
  m.def(
      "mmle_p", [](const std::vector<double>& data) { return mmle_p(data); },
      py::arg("data"));
  m.def(
      "decide_ell",
      [](const std::vector<double>& data, double t) {
        return decision_to_dict(decide_ell(data, t));
      },
      py::arg("data"), py::arg("t") = 0.5);
  m.def(
      "bh_procedure",
      [](const std::vector<double>& data, double alpha) {
        return decision_to_dict(bh_procedure(data, alpha));
      },
      py::arg("data"), py::arg("alpha"));
  m.def(
      "oracle_threshold",
      [](const std::vector<double>& data, std::size_t q_n) {
        return decision_to_dict(oracle_threshold(data, q_n));
      },
      py::arg("data"), py::arg("q_n"));

  m.def(
      "generate_theta",
      [](std::size_t n, std::size_t q_n, const py::object& signal, std::uint64_t seed,
         const std::string& sign_mode, const std::string& placement) {
        return generate_theta(make_theta_spec(n, q_n, signal, sign_mode, placement),
                              seed);
      },
      py::arg("n"), py::arg("q_n"), py::arg("signal"), py::arg("seed"),
      py::arg("sign_mode") = "random", py::arg("placement") = "random");
  m.def(
      "sample_data",
      [](const std::vector<double>& theta, std::uint64_t seed) {
        return sample_data(theta, seed);
      },
      py::arg("theta"), py::arg("seed"));
  m.def(
      "fdp_fnp",
      [](const std::vector<double>& theta, const std::vector<std::uint8_t>& psi) {
        const FdpFnp f = fdp_fnp(theta, psi);
        return py::make_tuple(f.fdp, f.fnp);
      },
      py::arg("theta"), py::arg("psi"));
  m.def(
      "hamming_loss",
      [](const std::vector<double>& theta, const std::vector<std::uint8_t>& psi) {
        return hamming_loss(theta, psi);
      },
      py::arg("theta"), py::arg("psi"));
  m.def(
      "theory_targets",
      [](std::size_t n, std::size_t q_n, const py::object& signal) {
        const TheoryTargets t =
            theory_targets(make_theta_spec(n, q_n, signal, "random", "random"));
        py::dict d;
        d["minimax"] = t.minimax;
        d["lambda_n"] = t.lambda_n;
        return d;
      },
      py::arg("n"), py::arg("q_n"), py::arg("signal"));
  m.def(
      "estimate_risk",
      [](const std::string& rule, const PriorKernel& kernel, std::size_t n,
         std::size_t q_n, const py::object& signal, std::size_t replicates,
         std::uint64_t seed, int threads, const std::string& sign_mode,
         const std::string& placement) {
        const ThetaSpec spec = make_theta_spec(n, q_n, signal, sign_mode, placement);
        return estimate_to_dict(
            estimate_risk(parse_rule(rule), kernel, spec, replicates, seed, threads));
      },
      py::arg("rule"), py::arg("kernel"), py::arg("n"), py::arg("q_n"),
      py::arg("signal"), py::arg("replicates"), py::arg("seed"),
      py::arg("threads") = 0, py::arg("sign_mode") = "random",
      py::arg("placement") = "random");

  m.def("normal_cdf", &normal_cdf, py::arg("x"));
  m.def("normal_sf", &normal_sf, py::arg("x"));
  m.def("universal_threshold", &universal_threshold, py::arg("n"), py::arg("q"));

  m.attr("__all__") = py::make_tuple(
      "PriorKernel", "horseshoe_kernel", "strawderman_berger_kernel", "tpbn_kernel",
      "inv_gamma_kernel", "parse_kernel", "eval_L", "KernelValidationReport",
      "validate_kernel", "default_validation_grid", "log_posterior_kappa_density",
      "expected_one_minus_kappa", "expected_kappa", "importance_oracle",
      "type1_bound_rate", "large_a_upper_rate", "decide_fixed_tau", "estimate_tau_eb",
      "decide_eb", "tau_posterior_weights", "log_spaced_grid", "decide_fb",
      "quasi_cauchy_density", "ell_values", "mmle_p", "decide_ell", "bh_procedure",
      "oracle_threshold", "generate_theta", "sample_data", "fdp_fnp", "hamming_loss",
      "theory_targets", "estimate_risk", "normal_cdf", "normal_sf",
      "universal_threshold");
}
