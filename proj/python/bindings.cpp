#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "otbyz/analysis.hpp"
#include "otbyz/attack.hpp"
#include "otbyz/experiments.hpp"
#include "otbyz/protocol.hpp"

namespace py = pybind11;
using namespace otbyz;

namespace {

py::dict estimate_dict(const EstimateWithError& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  d["n_samples"] = e.n_samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ordered-transmission detection under Byzantine attacks";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Hypothesis>(m, "Hypothesis").value("H0", Hypothesis::H0).value("H1", Hypothesis::H1);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init([](int n_sensors, double signal, double noise_var, double byz_frac,
                       double attack_strength, double prior_h1) {
             ModelConfig c{n_sensors, signal, noise_var, byz_frac, attack_strength, prior_h1};
             c.validate();
             return c;
           }),
           py::arg("n_sensors") = 10, py::arg("signal") = 3.0, py::arg("noise_var") = 1.0,
           py::arg("byz_frac") = 0.0, py::arg("attack_strength") = 0.0, py::arg("prior_h1") = 0.5)
      .def_readwrite("n_sensors", &ModelConfig::n_sensors)
      .def_readwrite("signal", &ModelConfig::signal)
      .def_readwrite("noise_var", &ModelConfig::noise_var)
      .def_readwrite("byz_frac", &ModelConfig::byz_frac)
      .def_readwrite("attack_strength", &ModelConfig::attack_strength)
      .def_readwrite("prior_h1", &ModelConfig::prior_h1)
      .def("validate", &ModelConfig::validate)
      .def("threshold", &ModelConfig::threshold)
      .def("__repr__", [](const ModelConfig& c) {
        return "ModelConfig(n_sensors=" + std::to_string(c.n_sensors) + ", signal=" + std::to_string(c.signal) +
               ", noise_var=" + std::to_string(c.noise_var) + ", byz_frac=" + std::to_string(c.byz_frac) +
               ", attack_strength=" + std::to_string(c.attack_strength) +
               ", prior_h1=" + std::to_string(c.prior_h1) + ")";
      });

  m.def("stopping_rule", [](const std::vector<double>& llrs, double lambda) {
    const auto r = stopping_rule(llrs, lambda);
    return py::make_tuple(r.stop_k, r.decision);
  }, py::arg("ordered_llrs"), py::arg("threshold") = 0.0,
        "Stop index and decision for LLRs sorted by descending magnitude.");

  m.def("draw_trial", [](const ModelConfig& c, Hypothesis truth, std::uint64_t seed, std::uint64_t stream) {
    const auto t = draw_trial(c, truth, {seed, stream});
    py::dict d;
    d["truth"] = t.truth;
    d["llrs_ordered"] = t.llrs_ordered;
    d["sensor_order"] = t.sensor_order;
    d["byz_mask"] = std::vector<bool>(t.byz_mask.begin(), t.byz_mask.end());
    d["stop_k"] = t.stop_k;
    d["decision"] = t.decision;
    d["full_sum"] = t.full_sum;
    return d;
  }, py::arg("config"), py::arg("truth"), py::arg("seed") = 0, py::arg("stream") = 0);

  m.def("run_batch", [](const ModelConfig& c, std::uint64_t n_trials, std::uint64_t seed, unsigned threads) {
    BatchSummary s;
    {
      py::gil_scoped_release release;
      s = run_batch(c, n_trials, seed, {threads, std::nullopt});
    }
    py::dict d;
    d["n_trials"] = s.n_trials;
    d["n_h1"] = s.n_h1;
    d["error_rate"] = estimate_dict(s.error_rate);
    d["stop_k"] = estimate_dict(s.stop_k);
    d["saved"] = estimate_dict(s.saved);
    d["stop_survival"] = s.stop_survival;
    return d;
  }, py::arg("config"), py::arg("n_trials"), py::arg("seed") = 0, py::arg("threads") = 0);

  m.def("analytic_error_probs", [](const ModelConfig& c) {
    const auto e = analytic_error_probs(c);
    py::dict d;
    d["p_d"] = e.p_d;
    d["p_f"] = e.p_f;
    d["p_e"] = e.p_e;
    d["threshold"] = e.threshold;
    return d;
  }, py::arg("config"));

  m.def("deflection_coefficient", [](const ModelConfig& c) {
    const auto a = deflection_coefficient(c);
    py::dict d;
    d["dc"] = a.dc;
    d["mean_z_h1"] = a.mean_z_h1;
    d["mean_z_h0"] = a.mean_z_h0;
    d["var_z_h0"] = a.var_z_h0;
    d["d_star"] = a.d_star;
    return d;
  }, py::arg("config"));

  m.def("optimal_attack_strength", &optimal_attack_strength, py::arg("config"));

  m.def("expected_transmissions", [](const ModelConfig& c, std::uint64_t n_samples, std::uint64_t seed,
                                     unsigned threads) {
    py::gil_scoped_release release;
    const auto e = thm1_expected_transmissions(c, n_samples, seed, threads).expected_transmissions;
    return std::make_pair(e.value, e.std_error);
  }, py::arg("config"), py::arg("n_samples") = 100000, py::arg("seed") = 0, py::arg("threads") = 0,
        "Importance-sampling estimate of the mean stop index, as (value, std_error).");

  m.def("savings_bounds", [](const ModelConfig& c, bool monte_carlo, std::uint64_t n_samples,
                             std::uint64_t seed) {
    BoundsOptions o;
    o.mode = monte_carlo ? BoundsMode::kMonteCarlo : BoundsMode::kPopulation;
    o.n_samples = n_samples;
    o.seed = seed;
    BoundsReport r;
    {
      py::gil_scoped_release release;
      r = thm2_bounds(c, o);
    }
    py::dict d;
    d["lb_saved"] = r.lb_saved;
    d["ub_saved"] = r.ub_saved;
    d["lb_std_error"] = r.lb_std_error;
    d["ub_std_error"] = r.ub_std_error;
    d["lb_per_k"] = r.lb_per_k;
    d["ub_per_k"] = r.ub_per_k;
    return d;
  }, py::arg("config"), py::arg("monte_carlo") = false, py::arg("n_samples") = 20000, py::arg("seed") = 0);

  m.def("abs_order_stat_pdf", &abs_order_stat_pdf, py::arg("config"), py::arg("h"), py::arg("k"), py::arg("x"));

  m.def("preset_csv", [](const std::string& name, bool paper_scale, std::uint64_t seed,
                         std::optional<std::uint64_t> n_trials) {
    py::dict out;
    for (auto spec : make_preset(name, paper_scale)) {
      spec.seed = seed;
      if (n_trials) spec.n_trials = *n_trials;
      SweepResult r;
      {
        py::gil_scoped_release release;
        r = run_sweep(spec);
      }
      out[py::str(spec.label)] = to_csv(r);
    }
    return out;
  }, py::arg("name"), py::arg("paper_scale") = false, py::arg("seed") = 1, py::arg("n_trials") = py::none(),
        "CSV text of every series in a figure preset, keyed by series label.");

  m.attr("__version__") = OTBYZ_VERSION;
}
