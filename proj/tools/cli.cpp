#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "otbyz/analysis.hpp"
#include "otbyz/attack.hpp"
#include "otbyz/experiments.hpp"
#include "otbyz/protocol.hpp"

namespace otbyz::cli {
namespace {

struct Options {
  ModelConfig model;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10000;
  unsigned threads = 0;
  std::string out;
  bool paper_scale = false;
  std::string param = "D";
  std::string grid = "0:12:1";
  std::vector<std::string> metrics{"pe_analytic", "pe_empirical", "ns_empirical"};
  std::string preset;
  std::string bounds_mode = "population";
};

std::filesystem::path series_path(const std::filesystem::path& dir, const std::string& label) {
  return dir / (label + ".csv");
}

int cmd_sweep(const Options& o, std::ostream& out) {
  SweepSpec spec;
  spec.base = o.model;
  const auto param = parse_sweep_param(o.param);
  if (!param) throw SpecError("unknown sweep parameter '" + o.param + "' (N|s|D|alpha0)");
  spec.param = *param;
  spec.grid = parse_grid(o.grid);
  for (const auto& name : o.metrics) {
    const auto m = parse_metric(name);
    if (!m) throw SpecError("unknown metric '" + name + "'");
    spec.metrics.push_back(*m);
  }
  spec.n_trials = o.trials;
  spec.seed = o.seed;
  spec.threads = o.threads;
  spec.label = "sweep_" + o.param;
  const SweepResult result = run_sweep(spec);
  out << summarize(result);
  if (!o.out.empty()) {
    emit_csv(result, o.out);
    out << "wrote " << o.out << "\n";
  }
  return kOk;
}

int cmd_preset(const Options& o, bool trials_given, std::ostream& out) {
  auto specs = make_preset(o.preset, o.paper_scale);
  if (!o.out.empty()) std::filesystem::create_directories(o.out);
  for (auto& spec : specs) {
    spec.seed = o.seed;
    spec.threads = o.threads;
    if (trials_given) spec.n_trials = o.trials;
    const SweepResult result = run_sweep(spec);
    out << summarize(result) << "\n";
    if (!o.out.empty()) {
      const auto path = series_path(o.out, spec.label);
      emit_csv(result, path);
      out << "wrote " << path.string() << "\n";
    }
  }
  return kOk;
}

int cmd_dc(const Options& o, std::ostream& out) {
  const AttackAssessment a = deflection_coefficient(o.model);
  out << std::setprecision(10);
  out << "E[Z|H1]   = " << a.mean_z_h1 << "\n"
      << "E[Z|H0]   = " << a.mean_z_h0 << "\n"
      << "Var[Z|H0] = " << a.var_z_h0 << "\n"
      << "DC        = " << a.dc << "\n";
  if (a.d_star) {
    out << "D*        = " << *a.d_star << "\n";
  } else {
    out << "D*        = n/a (FC cannot be blinded with alpha0 = 0)\n";
  }
  return kOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  BoundsOptions opts;
  if (o.bounds_mode == "population") {
    opts.mode = BoundsMode::kPopulation;
  } else if (o.bounds_mode == "montecarlo") {
    opts.mode = BoundsMode::kMonteCarlo;
  } else {
    throw SpecError("unknown bounds mode '" + o.bounds_mode + "' (population|montecarlo)");
  }
  opts.n_samples = o.trials;
  opts.seed = o.seed;
  opts.threads = o.threads;
  const BoundsReport r = thm2_bounds(o.model, opts);
  out << std::setprecision(10);
  out << "lower bound on transmissions saved = " << r.lb_saved;
  if (opts.mode == BoundsMode::kMonteCarlo) out << " (se " << r.lb_std_error << ")";
  out << "\nupper bound on transmissions saved = " << r.ub_saved;
  if (opts.mode == BoundsMode::kMonteCarlo) out << " (se " << r.ub_std_error << ")";
  out << "\n";
  if (!o.out.empty()) {
    SweepResult table;
    table.label = "bounds_per_k";
    table.columns = {"k", "lb_term", "ub_term", "g_lower_h0", "g_upper_h0", "g_lower_h1", "g_upper_h1"};
    for (std::size_t i = 0; i < r.k_grid.size(); ++i) {
      table.rows.push_back({static_cast<double>(r.k_grid[i]), r.lb_per_k[i], r.ub_per_k[i],
                            r.g_lower_per_k[0][i], r.g_upper_per_k[0][i], r.g_lower_per_k[1][i],
                            r.g_upper_per_k[1][i]});
    }
    table.provenance = {"", o.seed, OTBYZ_VERSION};
    emit_csv(table, o.out);
    out << "wrote " << o.out << "\n";
  }
  return kOk;
}

int cmd_pe(const Options& o, bool trials_given, std::ostream& out) {
  const ErrorProbabilities e = analytic_error_probs(o.model);
  out << std::setprecision(10);
  out << "threshold = " << e.threshold << "\n"
      << "P_d       = " << e.p_d << "\n"
      << "P_f       = " << e.p_f << "\n"
      << "P_e       = " << e.p_e << "\n";
  if (trials_given) {
    const BatchSummary b = run_batch(o.model, o.trials, o.seed, {o.threads, std::nullopt});
    out << "P_e (simulated, " << b.n_trials << " trials) = " << b.error_rate.value << " +/- "
        << b.error_rate.std_error << "\n"
        << "mean transmissions = " << b.stop_k.value << " +/- " << b.stop_k.std_error << "\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Ordered-transmission detection under Byzantine attacks"};
  app.set_config("--config", "", "Key-value config file (command-line flags take precedence)");
  app.require_subcommand(1);

  app.add_option("--N", o.model.n_sensors, "Number of sensors")->capture_default_str();
  app.add_option("--s", o.model.signal, "Signal strength")->capture_default_str();
  app.add_option("--sigma2", o.model.noise_var, "Noise variance")->capture_default_str();
  app.add_option("--alpha0", o.model.byz_frac, "Byzantine fraction")->capture_default_str();
  app.add_option("--D", o.model.attack_strength, "Attack strength")->capture_default_str();
  app.add_option("--prior-h1", o.model.prior_h1, "Prior probability of H1")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  auto* trials_opt = app.add_option("--trials", o.trials, "Monte-Carlo trials per point")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", o.out, "Output CSV path (directory for presets)");
  app.add_flag("--paper-scale", o.paper_scale, "Full-size networks (N up to 300)");
  app.add_option("--param", o.param, "Swept parameter: N|s|D|alpha0")->capture_default_str();
  app.add_option("--grid", o.grid, "Grid as start:stop:step or a comma list")->capture_default_str();
  app.add_option("--metrics", o.metrics, "Metrics to evaluate")->delimiter(',');
  app.add_option("--bounds-mode", o.bounds_mode, "population|montecarlo")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and evaluate metrics");
  auto* preset = app.add_subcommand("preset", "Run a figure preset");
  preset->add_option("name", o.preset, "fig1a|fig1b|fig2|fig3|fig4")->required();
  auto* dc = app.add_subcommand("dc", "Deflection coefficient and blinding strength");
  auto* bounds = app.add_subcommand("bounds", "Bounds on transmissions saved");
  auto* pe = app.add_subcommand("pe", "Error probabilities");
  for (auto* sub : {sweep, preset, dc, bounds, pe}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    err << e.what() << "\n";
    return kIoError;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kOk;
    }
    app.exit(e, out, err);
    return kInvalidSpec;
  }

  const bool trials_given = trials_opt->count() > 0;
  try {
    if (*sweep) return cmd_sweep(o, out);
    if (*preset) return cmd_preset(o, trials_given, out);
    if (*dc) return cmd_dc(o, out);
    if (*bounds) return cmd_bounds(o, out);
    if (*pe) return cmd_pe(o, trials_given, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "invalid spec: " << e.what() << "\n";
    return kInvalidSpec;
  } catch (const std::domain_error& e) {
    err << "invalid spec: " << e.what() << "\n";
    return kInvalidSpec;
  }
  return kInvalidSpec;
}

}  // namespace otbyz::cli
