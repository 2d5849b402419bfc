#pragma once

// Detection model: sensor configuration, per-sensor LLR distributions under
// each hypothesis, and the moments of the honest/Byzantine mixture.

#include <cstdint>
#include <string>
#include <string_view>

namespace otbyz {

enum class Hypothesis : std::uint8_t { H0 = 0, H1 = 1 };

constexpr int index_of(Hypothesis h) { return static_cast<int>(h); }
std::string_view to_string(Hypothesis h);

// Scalar parameters of the binary detection problem. Observations are
// y = n (H0) or y = s + n (H1) with n ~ N(0, noise_var). A Byzantine sensor
// shifts its observation by D toward the wrong hypothesis.
struct ModelConfig {
  int n_sensors = 10;
  double signal = 3.0;
  double noise_var = 1.0;
  double byz_frac = 0.0;
  double attack_strength = 0.0;
  double prior_h1 = 0.5;

  // Throws std::invalid_argument when any field is out of its domain.
  void validate() const;

  double prior_h0() const { return 1.0 - prior_h1; }
  double prior(Hypothesis h) const {
    return h == Hypothesis::H1 ? prior_h1 : prior_h0();
  }
  // Bayesian threshold ln(pi0 / pi1) on the summed LLR.
  double threshold() const;
  // Per-sensor LLR variance s^2 / sigma^2.
  double beta() const { return signal * signal / noise_var; }

  // Canonical single-line rendering, stable across runs; used for hashing.
  std::string canonical() const;
};

// Two-component Gaussian mixture of one sensor's LLR under a hypothesis:
// weight_byz * N(mean_byz, variance) + (1 - weight_byz) * N(mean_honest, variance).
struct LlrMixture {
  double weight_byz = 0.0;
  double mean_honest = 0.0;
  double mean_byz = 0.0;
  double variance = 1.0;

  double stddev() const;
};

struct PopulationMoments {
  double mean_h0 = 0.0;
  double mean_h1 = 0.0;
  double var_h0 = 0.0;
  double var_h1 = 0.0;

  double mean(Hypothesis h) const { return h == Hypothesis::H1 ? mean_h1 : mean_h0; }
  double var(Hypothesis h) const { return h == Hypothesis::H1 ? var_h1 : var_h0; }
};

// LLR of a received observation, (2 y s - s^2) / (2 sigma^2).
double observation_llr(const ModelConfig& config, double y);

LlrMixture llr_mixture(const ModelConfig& config, Hypothesis h);

double mixture_pdf(const LlrMixture& m, double l);

// P(|L| <= x). Throws std::domain_error for negative x.
double abs_llr_cdf(const LlrMixture& m, double x);

// P(|L| > x), computed from the tails directly so it stays accurate when
// abs_llr_cdf is close to one. Throws std::domain_error for negative x.
double abs_llr_sf(const LlrMixture& m, double x);

// Density of |L| at x >= 0: mixture_pdf(x) + mixture_pdf(-x).
double abs_llr_pdf(const LlrMixture& m, double x);

PopulationMoments population_moments(const ModelConfig& config);

}  // namespace otbyz
