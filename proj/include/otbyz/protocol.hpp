#pragma once

// Ordered-transmission fusion: sensors report LLRs in descending magnitude and
// the fusion center stops as soon as the not-yet-received LLRs can no longer
// flip the sign of the full sum against the threshold.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "otbyz/model.hpp"
#include "otbyz/rng.hpp"
#include "otbyz/stats.hpp"

namespace otbyz {

enum class StopAction : std::uint8_t { kContinue, kDecideH0, kDecideH1 };

struct TrialRecord {
  Hypothesis truth = Hypothesis::H0;
  // Received LLRs sorted by descending magnitude, ties by sensor index.
  std::vector<double> llrs_ordered;
  // sensor_order[i] is the sensor index that transmitted i-th.
  std::vector<int> sensor_order;
  // Indexed by sensor, before ordering.
  std::vector<bool> byz_mask;
  int stop_k = 0;
  Hypothesis decision = Hypothesis::H0;
  double full_sum = 0.0;
};

struct PartialSumBounds {
  double z_lower = 0.0;
  double z_upper = 0.0;
  StopAction action = StopAction::kContinue;
};

struct StopResult {
  int stop_k = 0;
  Hypothesis decision = Hypothesis::H0;
};

// Range [z_lower, z_upper] that contains the full sum of any N-sensor
// completion of a magnitude-sorted prefix, and whether the fusion center can
// already decide. Throws std::invalid_argument for an empty or unsorted
// prefix, or a prefix longer than n_total.
PartialSumBounds partial_sum_bounds(std::span<const double> prefix, int n_total, double lambda);

// Smallest k at which the ordered prefix forces a decision. If no prefix
// decides strictly, returns k = N with the full-sum decision (ties to H0).
// Throws std::invalid_argument if the input is empty or not sorted by
// descending magnitude.
StopResult stopping_rule(std::span<const double> ordered_llrs, double lambda);

// Full-sum Bayesian decision: H1 iff sum > lambda.
Hypothesis full_sum_decision(double full_sum, double lambda);

// Simulates one ordered-transmission round. Each sensor is Byzantine with
// probability byz_frac, independently.
TrialRecord draw_trial(const ModelConfig& config, Hypothesis truth, RngSpec rng);

struct BatchOptions {
  unsigned threads = 0;
  // Fixes the true hypothesis instead of drawing it from the prior.
  std::optional<Hypothesis> forced_truth;
};

struct BatchSummary {
  std::uint64_t n_trials = 0;
  std::uint64_t n_h1 = 0;
  EstimateWithError error_rate;
  EstimateWithError stop_k;
  EstimateWithError saved;
  // Survival function Pr(k* >= k), k = 1..N, indexed by k - 1.
  std::vector<double> stop_survival;
};

// Runs n_trials independent trials; trial t uses stream t of `seed`. The
// result is identical for any thread count. Throws std::invalid_argument for
// n_trials == 0 or an invalid config.
BatchSummary run_batch(const ModelConfig& config, std::uint64_t n_trials, std::uint64_t seed,
                       const BatchOptions& options = {});

}  // namespace otbyz
