#include "otbyz/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "otbyz/parallel.hpp"

namespace otbyz {
namespace {

constexpr std::uint32_t kTrialSubstream = 0;
constexpr std::uint32_t kTruthSubstream = 1;
constexpr std::size_t kBatchChunk = 512;

void require_magnitude_sorted(std::span<const double> llrs, const char* what) {
  for (std::size_t i = 1; i < llrs.size(); ++i) {
    if (std::abs(llrs[i - 1]) < std::abs(llrs[i])) {
      throw std::invalid_argument(std::string(what) +
                                  ": LLRs are not sorted by descending magnitude");
    }
  }
}

// prefix_sum holds the sum of the first k ordered LLRs and last_abs = |L_[k]|.
PartialSumBounds bounds_from_prefix(double prefix_sum, double last_abs, int k, int n_total,
                                    double lambda) {
  const double slack = static_cast<double>(n_total - k) * last_abs;
  PartialSumBounds b{prefix_sum - slack, prefix_sum + slack, StopAction::kContinue};
  if (b.z_upper < lambda) {
    b.action = StopAction::kDecideH0;
  } else if (b.z_lower > lambda) {
    b.action = StopAction::kDecideH1;
  }
  return b;
}

StopResult stop_unchecked(std::span<const double> ordered, double lambda) {
  const int n = static_cast<int>(ordered.size());
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    sum += ordered[k - 1];
    const auto b = bounds_from_prefix(sum, std::abs(ordered[k - 1]), k, n, lambda);
    if (b.action == StopAction::kDecideH1) return {k, Hypothesis::H1};
    if (b.action == StopAction::kDecideH0) return {k, Hypothesis::H0};
  }
  return {n, full_sum_decision(sum, lambda)};
}

Hypothesis draw_truth(const ModelConfig& config, RngSpec rng) {
  PhiloxEngine engine(rng, kTruthSubstream);
  std::bernoulli_distribution coin(config.prior_h1);
  return coin(engine) ? Hypothesis::H1 : Hypothesis::H0;
}

struct BatchAcc {
  RunningStats error;
  RunningStats stop_k;
  std::uint64_t n_h1 = 0;
  std::vector<std::uint64_t> stop_hist;

  static void merge(BatchAcc& into, const BatchAcc& from) {
    into.error.merge(from.error);
    into.stop_k.merge(from.stop_k);
    into.n_h1 += from.n_h1;
    if (into.stop_hist.size() < from.stop_hist.size()) into.stop_hist.resize(from.stop_hist.size());
    for (std::size_t i = 0; i < from.stop_hist.size(); ++i) into.stop_hist[i] += from.stop_hist[i];
  }
};

}  // namespace

Hypothesis full_sum_decision(double full_sum, double lambda) {
  return full_sum > lambda ? Hypothesis::H1 : Hypothesis::H0;
}

PartialSumBounds partial_sum_bounds(std::span<const double> prefix, int n_total, double lambda) {
  if (prefix.empty()) throw std::invalid_argument("partial_sum_bounds: empty prefix");
  if (static_cast<std::size_t>(n_total) < prefix.size() || n_total < 1)
    throw std::invalid_argument("partial_sum_bounds: prefix longer than n_total");
  require_magnitude_sorted(prefix, "partial_sum_bounds");
  const double sum = std::accumulate(prefix.begin(), prefix.end(), 0.0);
  return bounds_from_prefix(sum, std::abs(prefix.back()), static_cast<int>(prefix.size()),
                            n_total, lambda);
}

StopResult stopping_rule(std::span<const double> ordered_llrs, double lambda) {
  if (ordered_llrs.empty()) throw std::invalid_argument("stopping_rule: no LLRs");
  require_magnitude_sorted(ordered_llrs, "stopping_rule");
  return stop_unchecked(ordered_llrs, lambda);
}

TrialRecord draw_trial(const ModelConfig& config, Hypothesis truth, RngSpec rng) {
  config.validate();
  const int n = config.n_sensors;
  PhiloxEngine engine(rng, kTrialSubstream);
  std::bernoulli_distribution byzantine(config.byz_frac);
  std::normal_distribution<double> noise(0.0, std::sqrt(config.noise_var));

  const double clean_mean = truth == Hypothesis::H1 ? config.signal : 0.0;
  const double attack = truth == Hypothesis::H1 ? -config.attack_strength : config.attack_strength;

  TrialRecord rec;
  rec.truth = truth;
  rec.byz_mask.resize(n);
  std::vector<double> llrs(n);
  for (int i = 0; i < n; ++i) {
    const bool byz = byzantine(engine);
    double y = clean_mean + noise(engine);
    if (byz) y += attack;
    rec.byz_mask[i] = byz;
    llrs[i] = observation_llr(config, y);
  }

  rec.sensor_order.resize(n);
  std::iota(rec.sensor_order.begin(), rec.sensor_order.end(), 0);
  std::stable_sort(rec.sensor_order.begin(), rec.sensor_order.end(),
                   [&](int a, int b) { return std::abs(llrs[a]) > std::abs(llrs[b]); });
  rec.llrs_ordered.resize(n);
  for (int i = 0; i < n; ++i) rec.llrs_ordered[i] = llrs[rec.sensor_order[i]];

  const double lambda = config.threshold();
  const StopResult stop = stop_unchecked(rec.llrs_ordered, lambda);
  rec.stop_k = stop.stop_k;
  rec.decision = stop.decision;
  rec.full_sum = std::accumulate(rec.llrs_ordered.begin(), rec.llrs_ordered.end(), 0.0);
  return rec;
}

BatchSummary run_batch(const ModelConfig& config, std::uint64_t n_trials, std::uint64_t seed,
                       const BatchOptions& options) {
  config.validate();
  if (n_trials == 0) throw std::invalid_argument("run_batch: n_trials must be >= 1");
  const int n = config.n_sensors;

  auto work = [&](std::size_t begin, std::size_t end) {
    BatchAcc acc;
    acc.stop_hist.assign(n + 1, 0);
    for (std::size_t t = begin; t < end; ++t) {
      const RngSpec rng{seed, t};
      const Hypothesis truth = options.forced_truth ? *options.forced_truth : draw_truth(config, rng);
      const TrialRecord rec = draw_trial(config, truth, rng);
      acc.error.push(rec.decision != truth ? 1.0 : 0.0);
      acc.stop_k.push(static_cast<double>(rec.stop_k));
      acc.n_h1 += truth == Hypothesis::H1;
      ++acc.stop_hist[rec.stop_k];
    }
    return acc;
  };
  const BatchAcc acc =
      chunked_reduce<BatchAcc>(n_trials, kBatchChunk, options.threads, work, BatchAcc::merge);

  BatchSummary out;
  out.n_trials = n_trials;
  out.n_h1 = acc.n_h1;
  out.error_rate = acc.error.estimate();
  out.stop_k = acc.stop_k.estimate();
  out.saved = {static_cast<double>(n) - out.stop_k.value, out.stop_k.std_error, n_trials};
  out.stop_survival.resize(n);
  std::uint64_t at_least = n_trials;
  for (int k = 1; k <= n; ++k) {
    out.stop_survival[k - 1] = static_cast<double>(at_least) / static_cast<double>(n_trials);
    at_least -= acc.stop_hist[k];
  }
  return out;
}

}  // namespace otbyz
