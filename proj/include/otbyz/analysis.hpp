#pragma once

// Closed-form and semi-analytic performance of ordered-transmission fusion:
// error probabilities of the full-sum test, the expected number of
// transmissions, order statistics of |L|, and bounds on transmissions saved.

#include <array>
#include <cstdint>
#include <vector>

#include "otbyz/model.hpp"
#include "otbyz/stats.hpp"

namespace otbyz {

struct ErrorProbabilities {
  double p_d = 0.0;
  double p_f = 0.0;
  double p_e = 0.0;
  double threshold = 0.0;
};

// P_d and P_f of the full-sum test Z > ln(pi0/pi1). The sum over honest
// subsets is collapsed over the Byzantine count m, since the mean of Z given
// the subset depends only on m. Requires n_sensors <= 10^6.
ErrorProbabilities analytic_error_probs(const ModelConfig& config);

// ln C(n, j) for j = 0..n.
std::vector<double> log_binomial_row(int n);

struct TransmissionEstimate {
  EstimateWithError expected_transmissions;
  // Pr(k* >= k | H_h) for k = 1..N, indexed [h][k - 1].
  std::array<std::vector<EstimateWithError>, 2> survival;
};

// Importance-sampling estimate of the expected stop time. For each k, i.i.d.
// draws of k - 1 LLRs are weighted by C(N, k-1) F_|L|(min |l|)^(N-k+1) on the
// event that the first k - 1 ordered LLRs leave the decision open. Each
// sample path reuses its prefix across k, so the per-sample total gives the
// standard error of the sum directly. Throws std::invalid_argument for
// n_samples < 1000.
TransmissionEstimate thm1_expected_transmissions(const ModelConfig& config,
                                                 std::uint64_t n_samples, std::uint64_t seed,
                                                 unsigned threads = 0);

// Density of the k-th largest of N i.i.d. |L| values.
class AbsOrderStatDensity {
 public:
  // Throws std::invalid_argument unless 1 <= k <= n_sensors.
  AbsOrderStatDensity(const ModelConfig& config, Hypothesis h, int k);

  double operator()(double x) const;
  // Pr(|L_[k]| < w) by quadrature of the density over [0, w]; zero for w <= 0.
  double prob_below(double w) const;
  // Pr(|L_[k]| < w) at several ascending limits, integrating each gap once so
  // the results are nondecreasing.
  std::vector<double> prob_below_sorted(const std::vector<double>& ascending) const;

  // Cell width used by the quadrature, small enough to resolve the peak.
  double cell_width() const { return cell_; }
  // Beyond this magnitude the density is negligible (< 1e-30 in mass).
  double support_end() const { return support_end_; }

 private:
  LlrMixture mixture_;
  int n_;
  int k_;
  double log_coeff_;
  double cell_;
  double support_end_;
};

// Throws std::invalid_argument for k outside [1, N] and std::domain_error for
// negative x.
double abs_order_stat_pdf(const ModelConfig& config, Hypothesis h, int k, double x);

// sum_i (c_i - mean(c))^2 for c = (1,...,1,0,...,0) with k ones among n.
double indicator_centered_ss(int k, int n);

enum class BoundsMode {
  // Population mean/variance replace the sample ones; probabilities by
  // quadrature of the order-statistic density.
  kPopulation,
  // Sample mean/variance per simulated realization; probabilities by
  // counting events.
  kMonteCarlo,
};

struct BoundsOptions {
  BoundsMode mode = BoundsMode::kPopulation;
  std::uint64_t n_samples = 20000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct BoundsReport {
  std::vector<int> k_grid;
  double lb_saved = 0.0;
  double ub_saved = 0.0;
  // Zero in population mode.
  double lb_std_error = 0.0;
  double ub_std_error = 0.0;
  // Indexed [h][k - 1]. In Monte-Carlo mode these are sample averages.
  std::array<std::vector<double>, 2> g_lower_per_k;
  std::array<std::vector<double>, 2> g_upper_per_k;
  // Prior-weighted contribution of each k to the bounds.
  std::vector<double> lb_per_k;
  std::vector<double> ub_per_k;
};

// Lower and upper bounds on the expected number of transmissions saved.
// Throws std::invalid_argument for n_sensors < 2.
BoundsReport thm2_bounds(const ModelConfig& config, const BoundsOptions& options = {});

}  // namespace otbyz
