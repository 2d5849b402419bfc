#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "otbyz/analysis.hpp"
#include "otbyz/parallel.hpp"
#include "otbyz/rng.hpp"
#include "sampling.hpp"

namespace otbyz {
namespace {

constexpr std::size_t kSampleChunk = 256;
constexpr std::uint32_t kBoundsSubstream = 4;

struct GPair {
  double lower;
  double upper;
};

// Cauchy bound on the sum of the k largest-magnitude LLRs in terms of the
// mean and the (N-1)-normalized variance of all N.
GPair cauchy_bounds(int k, int n, double mean, double sample_var) {
  const double r = std::sqrt(indicator_centered_ss(k, n) * (n - 1) * sample_var);
  return {k * mean - r, k * mean + r};
}

void population_bounds(const ModelConfig& config, const BoundsOptions& options, BoundsReport& out) {
  const int n = config.n_sensors;
  const double lambda = config.threshold();
  const PopulationMoments moments = population_moments(config);

  std::array<std::vector<double>, 2> lb_terms, ub_terms;
  for (int h = 0; h < 2; ++h) {
    lb_terms[h].assign(n - 1, 0.0);
    ub_terms[h].assign(n - 1, 0.0);
  }

  // Tasks are (k, h) pairs; each writes its own slot so scheduling order is
  // irrelevant.
  parallel_for(static_cast<std::size_t>(2 * (n - 1)), options.threads, [&](std::size_t task) {
    const int k = static_cast<int>(task / 2) + 1;
    const Hypothesis h = task % 2 ? Hypothesis::H1 : Hypothesis::H0;
    const int hi = index_of(h);
    const double sample_var = static_cast<double>(n) / (n - 1) * moments.var(h);
    const GPair g = cauchy_bounds(k, n, moments.mean(h), sample_var);
    out.g_lower_per_k[hi][k - 1] = g.lower;
    out.g_upper_per_k[hi][k - 1] = g.upper;

    const double remaining = n - k;
    // Decide H1 early for sure: g_L > lambda + (N-k)|L_[k]|; decide H0 for
    // sure: g_U < lambda - (N-k)|L_[k]|. At most one limit is positive.
    const double lb_h1 = (g.lower - lambda) / remaining;
    const double lb_h0 = (lambda - g.upper) / remaining;
    // Necessary conditions for an early decision.
    const double ub_h1 = (g.upper - lambda) / remaining;
    const double ub_h0 = (lambda - g.lower) / remaining;

    const double lb_limit = std::max(lb_h1, lb_h0);
    // P(A) + P(B) - P(min(A, B)) of two threshold events on the same
    // variable is the probability at the larger threshold.
    const double ub_limit = std::max(ub_h1, ub_h0);

    const AbsOrderStatDensity density(config, h, k);
    const auto probs = density.prob_below_sorted({lb_limit, ub_limit});
    lb_terms[hi][k - 1] = lb_limit > 0.0 ? probs[0] : 0.0;
    ub_terms[hi][k - 1] = ub_limit > 0.0 ? probs[1] : 0.0;
  });

  for (int k = 1; k < n; ++k) {
    double lb = 0.0;
    double ub = 0.0;
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
      lb += config.prior(h) * lb_terms[index_of(h)][k - 1];
      ub += config.prior(h) * ub_terms[index_of(h)][k - 1];
    }
    out.lb_per_k[k - 1] = lb;
    out.ub_per_k[k - 1] = ub;
    out.lb_saved += lb;
    out.ub_saved += ub;
  }
}

struct McAcc {
  RunningStats lb_total;
  RunningStats ub_total;
  std::vector<double> lb_hits;
  std::vector<double> ub_hits;
  std::vector<double> g_lower_sum;
  std::vector<double> g_upper_sum;

  static void merge(McAcc& into, const McAcc& from) {
    into.lb_total.merge(from.lb_total);
    into.ub_total.merge(from.ub_total);
    auto add = [](std::vector<double>& a, const std::vector<double>& b) {
      if (a.size() < b.size()) a.resize(b.size(), 0.0);
      for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    };
    add(into.lb_hits, from.lb_hits);
    add(into.ub_hits, from.ub_hits);
    add(into.g_lower_sum, from.g_lower_sum);
    add(into.g_upper_sum, from.g_upper_sum);
  }
};

void monte_carlo_bounds(const ModelConfig& config, const BoundsOptions& options, BoundsReport& out) {
  if (options.n_samples < 2) throw std::invalid_argument("thm2_bounds: need >= 2 samples");
  const int n = config.n_sensors;
  const double lambda = config.threshold();
  double lb_var = 0.0;
  double ub_var = 0.0;

  for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
    const LlrMixture mixture = llr_mixture(config, h);
    const auto substream = kBoundsSubstream + static_cast<std::uint32_t>(index_of(h));

    auto work = [&](std::size_t begin, std::size_t end) {
      McAcc acc;
      acc.lb_hits.assign(n - 1, 0.0);
      acc.ub_hits.assign(n - 1, 0.0);
      acc.g_lower_sum.assign(n - 1, 0.0);
      acc.g_upper_sum.assign(n - 1, 0.0);
      detail::MixtureSampler sampler(mixture);
      std::vector<double> mags(n);
      for (std::size_t j = begin; j < end; ++j) {
        PhiloxEngine engine({options.seed, j}, substream);
        RunningStats sample;
        for (int i = 0; i < n; ++i) {
          const double l = sampler(engine);
          sample.push(l);
          mags[i] = std::abs(l);
        }
        std::sort(mags.begin(), mags.end(), std::greater<>());
        double lb_count = 0.0;
        double ub_count = 0.0;
        for (int k = 1; k < n; ++k) {
          const GPair g = cauchy_bounds(k, n, sample.mean(), sample.variance());
          const double slack = (n - k) * mags[k - 1];
          const bool lb_hit = g.lower > lambda + slack || g.upper < lambda - slack;
          const bool ub_hit = g.upper > lambda + slack || g.lower < lambda - slack;
          acc.lb_hits[k - 1] += lb_hit;
          acc.ub_hits[k - 1] += ub_hit;
          acc.g_lower_sum[k - 1] += g.lower;
          acc.g_upper_sum[k - 1] += g.upper;
          lb_count += lb_hit;
          ub_count += ub_hit;
        }
        acc.lb_total.push(lb_count);
        acc.ub_total.push(ub_count);
      }
      return acc;
    };
    const McAcc acc = chunked_reduce<McAcc>(options.n_samples, kSampleChunk, options.threads, work,
                                            McAcc::merge);

    const int hi = index_of(h);
    const double prior = config.prior(h);
    const double m = static_cast<double>(options.n_samples);
    for (int k = 1; k < n; ++k) {
      out.g_lower_per_k[hi][k - 1] = acc.g_lower_sum[k - 1] / m;
      out.g_upper_per_k[hi][k - 1] = acc.g_upper_sum[k - 1] / m;
      out.lb_per_k[k - 1] += prior * acc.lb_hits[k - 1] / m;
      out.ub_per_k[k - 1] += prior * acc.ub_hits[k - 1] / m;
    }
    out.lb_saved += prior * acc.lb_total.mean();
    out.ub_saved += prior * acc.ub_total.mean();
    lb_var += prior * prior * acc.lb_total.std_error() * acc.lb_total.std_error();
    ub_var += prior * prior * acc.ub_total.std_error() * acc.ub_total.std_error();
  }
  out.lb_std_error = std::sqrt(lb_var);
  out.ub_std_error = std::sqrt(ub_var);
}

}  // namespace

BoundsReport thm2_bounds(const ModelConfig& config, const BoundsOptions& options) {
  config.validate();
  if (config.n_sensors < 2) throw std::invalid_argument("thm2_bounds: n_sensors must be >= 2");
  const int n = config.n_sensors;

  BoundsReport out;
  out.k_grid.resize(n - 1);
  for (int k = 1; k < n; ++k) out.k_grid[k - 1] = k;
  for (int h = 0; h < 2; ++h) {
    out.g_lower_per_k[h].assign(n - 1, 0.0);
    out.g_upper_per_k[h].assign(n - 1, 0.0);
  }
  out.lb_per_k.assign(n - 1, 0.0);
  out.ub_per_k.assign(n - 1, 0.0);

  if (options.mode == BoundsMode::kPopulation) {
    population_bounds(config, options, out);
  } else {
    monte_carlo_bounds(config, options, out);
  }
  return out;
}

}  // namespace otbyz
