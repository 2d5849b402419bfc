// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
//
//   otbyz_acceptance [--paper-scale] [--only <n>]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "otbyz/analysis.hpp"
#include "otbyz/attack.hpp"
#include "otbyz/experiments.hpp"
#include "otbyz/protocol.hpp"

namespace {

using namespace otbyz;

struct Verdict {
  bool pass = true;
  std::string detail;
};

ModelConfig config(int n, double s, double alpha, double d) {
  ModelConfig c;
  c.n_sensors = n;
  c.signal = s;
  c.noise_var = 1.0;
  c.byz_frac = alpha;
  c.attack_strength = d;
  return c;
}

// N in {1, 2, 10, 50}, alpha0 in {0, 0.3, 0.5}, D in {0, 6}; alpha0 = 0 makes
// D irrelevant, so it appears once.
std::vector<ModelConfig> lemma_grid() {
  std::vector<ModelConfig> out;
  for (int n : {1, 2, 10, 50})
    for (double alpha : {0.0, 0.3, 0.5})
      for (double d : {0.0, 6.0}) {
        if (alpha == 0.0 && d > 0.0) continue;
        out.push_back(config(n, 1.0, alpha, d));
      }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Verdict ac1_lemma1() {
  const auto grid = lemma_grid();
  const std::uint64_t per_config = 10000;
  std::uint64_t trials = 0, mismatches = 0, not_minimal = 0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto& cfg = grid[c];
    const double lambda = cfg.threshold();
    for (std::uint64_t t = 0; t < per_config; ++t) {
      const auto truth = t % 2 ? Hypothesis::H1 : Hypothesis::H0;
      const auto rec = draw_trial(cfg, truth, {1000 + c, t});
      ++trials;
      if (rec.decision != full_sum_decision(rec.full_sum, lambda)) ++mismatches;
      const std::span<const double> all(rec.llrs_ordered);
      for (int k = 1; k < rec.stop_k; ++k) {
        if (partial_sum_bounds(all.first(k), cfg.n_sensors, lambda).action != StopAction::kContinue) {
          ++not_minimal;
          break;
        }
      }
    }
  }
  return {mismatches == 0 && not_minimal == 0 && trials >= 100000,
          std::to_string(trials) + " trials over " + std::to_string(grid.size()) + " configs, " +
              std::to_string(mismatches) + " decision mismatches, " + std::to_string(not_minimal) +
              " non-minimal stops"};
}

Verdict ac2_pe_agreement() {
  Verdict v;
  double worst = 0.0;
  for (const auto& cfg : lemma_grid()) {
    const auto b = run_batch(cfg, 100000, 2);
    const double pe = analytic_error_probs(cfg).p_e;
    // The empirical SE collapses to zero when no errors are observed.
    const double se = std::max(b.error_rate.std_error, std::sqrt(pe * (1.0 - pe) / 100000.0));
    const double z = std::abs(b.error_rate.value - pe) / se;
    worst = std::max(worst, z);
    if (z > 3.0) {
      v.pass = false;
      v.detail += "[N=" + std::to_string(cfg.n_sensors) + " a=" + fmt(cfg.byz_frac) + " D=" +
                  fmt(cfg.attack_strength) + " emp=" + fmt(b.error_rate.value) + " ana=" + fmt(pe) + "] ";
    }
  }
  v.detail += "worst |z| = " + fmt(worst) + " over " + std::to_string(lemma_grid().size()) + " points";
  return v;
}

Verdict ac3_power_set() {
  std::mt19937_64 eng(2024);
  std::uniform_real_distribution<double> s_dist(0.2, 4.0), a_dist(0.0, 1.0), d_dist(0.0, 10.0),
      p_dist(0.05, 0.95);
  std::uniform_int_distribution<int> n_dist(1, 12);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    auto cfg = config(n_dist(eng), s_dist(eng), a_dist(eng), d_dist(eng));
    cfg.prior_h1 = p_dist(eng);
    const oracle::DirectModel direct{cfg.signal, cfg.noise_var, cfg.byz_frac, cfg.attack_strength};
    const double lambda = std::log(cfg.prior_h0() / cfg.prior_h1);
    const auto p = analytic_error_probs(cfg);
    worst = std::max({worst, std::abs(p.p_d - oracle::power_set_tail(direct, cfg.n_sensors, true, lambda)),
                      std::abs(p.p_f - oracle::power_set_tail(direct, cfg.n_sensors, false, lambda))});
  }
  return {worst <= 1e-12, "max |diff| = " + fmt(worst) + " over 50 configs"};
}

Verdict ac4_thm1() {
  Verdict v;
  double worst = 0.0;
  for (double d : {0.0, 2.0, 4.0, 6.0, 8.0}) {
    const auto cfg = config(10, 3.0, 0.3, d);
    const auto est = thm1_expected_transmissions(cfg, 100000, 4);
    const auto sim = run_batch(cfg, 100000, 4);
    const double se = std::hypot(est.expected_transmissions.std_error, sim.stop_k.std_error);
    const double z = std::abs(est.expected_transmissions.value - sim.stop_k.value) / se;
    worst = std::max(worst, z);
    v.detail += "D=" + fmt(d) + ": " + fmt(est.expected_transmissions.value) + " vs " +
                fmt(sim.stop_k.value) + "; ";
    if (z > 3.0) v.pass = false;
  }
  v.detail += "worst |z| = " + fmt(worst);
  return v;
}

Verdict ac5_sandwich(bool paper_scale) {
  Verdict v;
  std::vector<int> sizes{100};
  if (paper_scale) sizes.push_back(300);
  int points = 0;
  double min_lb_margin = INFINITY, min_ub_margin = INFINITY;
  for (int n : sizes) {
    for (double alpha : {0.3, 0.5}) {
      for (int d = 0; d <= 12; ++d) {
        const auto cfg = config(n, 3.0, alpha, d);
        const auto r = thm2_bounds(cfg);
        const auto sim = run_batch(cfg, 20000, 5);
        const double se = sim.saved.std_error;
        const double lb_margin = sim.saved.value - (r.lb_saved - 3 * se);
        const double ub_margin = r.ub_saved + 3 * se - sim.saved.value;
        min_lb_margin = std::min(min_lb_margin, lb_margin);
        min_ub_margin = std::min(min_ub_margin, ub_margin);
        ++points;
        if (lb_margin < 0 || ub_margin < 0 || r.lb_saved > r.ub_saved) {
          v.pass = false;
          v.detail += "[N=" + std::to_string(n) + " a=" + fmt(alpha) + " D=" + std::to_string(d) +
                      " lb=" + fmt(r.lb_saved) + " ns=" + fmt(sim.saved.value) + " ub=" + fmt(r.ub_saved) + "] ";
        }
      }
    }
  }
  v.detail += std::to_string(points) + " points, min slack below " + fmt(min_lb_margin) + ", above " +
              fmt(min_ub_margin);
  return v;
}

Verdict ac6_remark1() {
  const auto cfg = config(100, 4.0, 0.0, 0.0);
  const auto b = run_batch(cfg, 10000, 6);
  const double frac = b.saved.value / cfg.n_sensors;
  return {frac >= 0.5, "Ns/N = " + fmt(frac)};
}

struct Fig2Cache {
  std::vector<SweepResult> results;
};

const Fig2Cache& fig2() {
  static const Fig2Cache cache = [] {
    Fig2Cache c;
    for (auto spec : make_preset("fig2", false)) {
      spec.seed = 7;
      c.results.push_back(run_sweep(spec));
    }
    return c;
  }();
  return cache;
}

Verdict ac7_blinding() {
  Verdict v;
  std::mt19937_64 eng(77);
  std::uniform_real_distribution<double> s_dist(0.2, 6.0), a_dist(0.05, 1.0);
  std::uniform_int_distribution<int> n_dist(1, 300);
  double worst_dc = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto cfg = config(n_dist(eng), s_dist(eng), a_dist(eng), 0.0);
    cfg.attack_strength = optimal_attack_strength(cfg);
    worst_dc = std::max(worst_dc, std::abs(deflection_coefficient(cfg).dc));
  }
  if (worst_dc > 1e-10) v.pass = false;
  v.detail = "max |dc(D*)| = " + fmt(worst_dc) + "; ";

  const auto specs = make_preset("fig2", false);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& r = fig2().results[i];
    const double d_star = optimal_attack_strength(specs[i].base);
    const auto col_d = r.column("D"), col_ns = r.column("ns_empirical"), col_pe = r.column("pe_empirical");
    double best = INFINITY, arg = 0.0, pe0 = 0.0, pe_star = 0.0;
    for (const auto& row : r.rows) {
      const double d = *row[col_d];
      if (*row[col_ns] < best) {
        best = *row[col_ns];
        arg = d;
      }
      if (d == 0.0) pe0 = *row[col_pe];
      if (std::abs(d - d_star) < 1e-9) pe_star = *row[col_pe];
    }
    const bool ok = std::abs(arg - d_star) <= 2 * 0.5 + 1e-9 && pe_star > pe0;
    if (!ok) v.pass = false;
    v.detail += r.label + ": argmin D=" + fmt(arg) + " (D*=" + fmt(d_star) + "), Pe(0)=" + fmt(pe0) +
                " Pe(D*)=" + fmt(pe_star) + "; ";
  }
  return v;
}

Verdict ac8_fig4_shape() {
  Verdict v;
  std::vector<double> reach;
  for (auto spec : make_preset("fig4", false)) {
    spec.seed = 8;
    const auto r = run_sweep(spec);
    const auto col_d = r.column("D"), col_pe = r.column("pe_empirical"), col_se = r.column("pe_empirical_se");
    double first = NAN;
    double worst_drop = 0.0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const double pe = *r.rows[i][col_pe];
      if (std::isnan(first) && pe >= 0.45) first = *r.rows[i][col_d];
      if (i > 0) {
        const double prev = *r.rows[i - 1][col_pe];
        // SE floor for points where no error was seen.
        const double se = std::hypot(std::max(*r.rows[i][col_se], 1.0 / spec.n_trials),
                                     std::max(*r.rows[i - 1][col_se], 1.0 / spec.n_trials));
        const double drop = (prev - pe) / se;
        worst_drop = std::max(worst_drop, drop);
        if (drop > 3.0) v.pass = false;
      }
    }
    reach.push_back(first);
    v.detail += r.label + ": first D with Pe>=0.45 is " + fmt(first) + ", worst drop " + fmt(worst_drop) + " SE; ";
  }
  // reach[0] is alpha0 = 0.3, reach[1] is alpha0 = 0.5.
  if (!(reach[0] > reach[1])) v.pass = false;
  return v;
}

Verdict ac9_order_stat() {
  Verdict v;
  const auto cfg = config(10, 3.0, 0.3, 2.0);
  const Hypothesis h = Hypothesis::H1;
  const std::uint64_t n_samples = 1'000'000;
  std::vector<std::vector<double>> samples(3);
  const int ks[] = {1, 3, 10};
  for (auto& s : samples) s.reserve(n_samples);
  for (std::uint64_t t = 0; t < n_samples; ++t) {
    const auto rec = draw_trial(cfg, h, {9, t});
    for (int i = 0; i < 3; ++i) samples[i].push_back(std::abs(rec.llrs_ordered[ks[i] - 1]));
  }
  for (int i = 0; i < 3; ++i) {
    const AbsOrderStatDensity dens(cfg, h, ks[i]);
    const double top = dens.support_end();
    const double mass = dens.prob_below(top);
    const int bins = 100;
    const double lo = *std::min_element(samples[i].begin(), samples[i].end());
    const double hi = *std::max_element(samples[i].begin(), samples[i].end());
    std::vector<double> counts(bins, 0.0);
    for (double x : samples[i]) {
      const int b = std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins));
      counts[b] += 1.0;
    }
    std::vector<double> edges(bins + 1);
    for (int b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * b / bins;
    const auto cdf = dens.prob_below_sorted(edges);
    double l1 = cdf.front() + (mass - cdf.back());
    for (int b = 0; b < bins; ++b) l1 += std::abs(counts[b] / n_samples - (cdf[b + 1] - cdf[b]));
    const bool ok = std::abs(mass - 1.0) <= 1e-8 && l1 < 0.02;
    if (!ok) v.pass = false;
    v.detail += "(10," + std::to_string(ks[i]) + "): mass-1 = " + fmt(mass - 1.0) + ", L1 = " + fmt(l1) + "; ";
  }
  return v;
}

Verdict ac10_determinism() {
  auto run_all = [](unsigned threads) {
    std::string csv;
    for (auto spec : make_preset("fig2", false)) {
      spec.seed = 7;
      spec.threads = threads;
      csv += to_csv(run_sweep(spec));
    }
    return csv;
  };
  std::string reference;
  for (const auto& r : fig2().results) reference += to_csv(r);
  const std::string again = run_all(1);
  const std::string many = run_all(8);
  const bool ok = reference == again && reference == many;
  return {ok, std::string("rerun ") + (reference == again ? "identical" : "differs") + ", 1 vs 8 threads " +
                  (again == many ? "identical" : "differs") + " (" + std::to_string(reference.size()) +
                  " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  bool paper_scale = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--paper-scale") == 0) {
      paper_scale = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--paper-scale] [--only <n>]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"ordered stop decision equals full-sum decision", ac1_lemma1},
      {"analytic Pe within 3 SE of simulated Pe", ac2_pe_agreement},
      {"binomial-collapsed Pd/Pf equal power-set sums", ac3_power_set},
      {"expected transmissions estimator matches simulation", ac4_thm1},
      {"bounds sandwich simulated transmissions saved", [&] { return ac5_sandwich(paper_scale); }},
      {"honest network saves at least half", ac6_remark1},
      {"blinding strength zeroes dc and minimizes savings", ac7_blinding},
      {"Pe rises with D, earlier for larger alpha0", ac8_fig4_shape},
      {"order-statistic density normalized and matches samples", ac9_order_stat},
      {"fig2 CSV byte-identical across runs and threads", ac10_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only && id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("AC%-2d %s  %s  [%.1fs] %s\n", id, v.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
