#include "otbyz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "otbyz/gaussian.hpp"
#include "otbyz/parallel.hpp"
#include "otbyz/quadrature.hpp"
#include "otbyz/rng.hpp"
#include "sampling.hpp"

namespace otbyz {
namespace {

constexpr int kMaxAnalyticSensors = 1'000'000;
constexpr std::uint64_t kMinThm1Samples = 1000;
constexpr std::size_t kSampleChunk = 1024;
constexpr std::uint32_t kThm1Substream = 2;

double log_binomial(int n, int j) {
  double r = 0.0;
  for (int i = 1; i <= j; ++i) r += std::log(static_cast<double>(n - j + i) / i);
  return r;
}

// Pr(m of n sensors are Byzantine).
std::vector<double> byzantine_count_pmf(int n, double alpha) {
  std::vector<double> pmf(n + 1, 0.0);
  if (alpha <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (alpha >= 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const auto log_c = log_binomial_row(n);
  const double log_a = std::log(alpha);
  const double log_h = std::log1p(-alpha);
  for (int m = 0; m <= n; ++m) pmf[m] = std::exp(log_c[m] + m * log_a + (n - m) * log_h);
  return pmf;
}

struct Thm1Acc {
  RunningStats total;
  std::vector<RunningStats> per_k;

  static void merge(Thm1Acc& into, const Thm1Acc& from) {
    into.total.merge(from.total);
    if (into.per_k.size() < from.per_k.size()) into.per_k.resize(from.per_k.size());
    for (std::size_t i = 0; i < from.per_k.size(); ++i) into.per_k[i].merge(from.per_k[i]);
  }
};

}  // namespace

std::vector<double> log_binomial_row(int n) {
  std::vector<double> row(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    row[j + 1] = row[j] + std::log(static_cast<double>(n - j)) - std::log(static_cast<double>(j + 1));
  }
  return row;
}

ErrorProbabilities analytic_error_probs(const ModelConfig& config) {
  config.validate();
  if (config.n_sensors > kMaxAnalyticSensors)
    throw std::invalid_argument("analytic_error_probs: n_sensors exceeds 10^6");
  const int n = config.n_sensors;
  const double lambda = config.threshold();
  const double sd_z = std::sqrt(n * config.beta());
  const auto pmf = byzantine_count_pmf(n, config.byz_frac);
  const LlrMixture m1 = llr_mixture(config, Hypothesis::H1);
  const LlrMixture m0 = llr_mixture(config, Hypothesis::H0);

  ErrorProbabilities out;
  out.threshold = lambda;
  for (int m = 0; m <= n; ++m) {
    if (pmf[m] == 0.0) continue;
    const double mean1 = (n - m) * m1.mean_honest + m * m1.mean_byz;
    const double mean0 = (n - m) * m0.mean_honest + m * m0.mean_byz;
    out.p_d += pmf[m] * q_function((lambda - mean1) / sd_z);
    out.p_f += pmf[m] * q_function((lambda - mean0) / sd_z);
  }
  out.p_d = std::clamp(out.p_d, 0.0, 1.0);
  out.p_f = std::clamp(out.p_f, 0.0, 1.0);
  out.p_e = config.prior_h1 * (1.0 - out.p_d) + config.prior_h0() * out.p_f;
  return out;
}

TransmissionEstimate thm1_expected_transmissions(const ModelConfig& config,
                                                 std::uint64_t n_samples, std::uint64_t seed,
                                                 unsigned threads) {
  config.validate();
  if (n_samples < kMinThm1Samples)
    throw std::invalid_argument("thm1_expected_transmissions: need at least 1000 samples");
  const int n = config.n_sensors;
  const double lambda = config.threshold();
  const auto log_c = log_binomial_row(n);

  TransmissionEstimate out;
  double mean = 0.0;
  double var = 0.0;
  for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
    const LlrMixture mixture = llr_mixture(config, h);
    const auto substream = kThm1Substream + static_cast<std::uint32_t>(index_of(h));

    auto work = [&](std::size_t begin, std::size_t end) {
      Thm1Acc acc;
      acc.per_k.resize(n > 1 ? n - 1 : 0);
      detail::MixtureSampler sampler(mixture);
      for (std::size_t j = begin; j < end; ++j) {
        PhiloxEngine engine({seed, j}, substream);
        double total = 1.0;
        double sum = 0.0;
        double min_abs = std::numeric_limits<double>::infinity();
        // After k - 1 draws, the smallest magnitude is |l_[k-1]| of the
        // sorted prefix; the continue event only needs it and the sum.
        for (int k = 2; k <= n; ++k) {
          const double l = sampler(engine);
          sum += l;
          min_abs = std::min(min_abs, std::abs(l));
          const int remaining = n - k + 1;
          double w = 0.0;
          if (std::abs(sum - lambda) <= remaining * min_abs) {
            const double f = abs_llr_cdf(mixture, min_abs);
            if (f > 0.0) w = std::exp(log_c[k - 1] + remaining * std::log(f));
          }
          acc.per_k[k - 2].push(w);
          total += w;
        }
        acc.total.push(total);
      }
      return acc;
    };
    const Thm1Acc acc = chunked_reduce<Thm1Acc>(n_samples, kSampleChunk, threads, work, Thm1Acc::merge);

    auto& surv = out.survival[index_of(h)];
    surv.reserve(n);
    surv.push_back({1.0, 0.0, n_samples});
    for (const auto& s : acc.per_k) surv.push_back(s.estimate());

    const double prior = config.prior(h);
    mean += prior * acc.total.mean();
    var += prior * prior * acc.total.std_error() * acc.total.std_error();
  }
  out.expected_transmissions = {mean, std::sqrt(var), n_samples};
  return out;
}

AbsOrderStatDensity::AbsOrderStatDensity(const ModelConfig& config, Hypothesis h, int k)
    : mixture_(llr_mixture(config, h)), n_(config.n_sensors), k_(k) {
  config.validate();
  if (k < 1 || k > n_) throw std::invalid_argument("order statistic index k out of [1, N]");
  log_coeff_ = std::log(static_cast<double>(n_)) + log_binomial(n_ - 1, k_ - 1);
  const double sd = mixture_.stddev();
  cell_ = sd / (4.0 * std::sqrt(static_cast<double>(n_)));
  support_end_ = std::max(std::abs(mixture_.mean_honest), std::abs(mixture_.mean_byz)) + 12.0 * sd;
}

double AbsOrderStatDensity::operator()(double x) const {
  if (x < 0.0) return 0.0;
  const double f = abs_llr_pdf(mixture_, x);
  if (f <= 0.0) return 0.0;
  double r = log_coeff_ + std::log(f);
  if (n_ > k_) {
    const double below = abs_llr_cdf(mixture_, x);
    if (below <= 0.0) return 0.0;
    r += (n_ - k_) * std::log(below);
  }
  if (k_ > 1) {
    const double above = abs_llr_sf(mixture_, x);
    if (above <= 0.0) return 0.0;
    r += (k_ - 1) * std::log(above);
  }
  return std::exp(r);
}

double AbsOrderStatDensity::prob_below(double w) const { return prob_below_sorted({w}).front(); }

std::vector<double> AbsOrderStatDensity::prob_below_sorted(const std::vector<double>& ascending) const {
  std::vector<double> out(ascending.size(), 0.0);
  double reached = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    if (i > 0 && ascending[i] < ascending[i - 1])
      throw std::invalid_argument("prob_below_sorted: limits must be ascending");
    const double upper = std::min(ascending[i], support_end_);
    if (upper > reached) {
      mass += integrate_cells(*this, reached, upper, cell_);
      reached = upper;
    }
    out[i] = std::clamp(mass, 0.0, 1.0);
  }
  return out;
}

double abs_order_stat_pdf(const ModelConfig& config, Hypothesis h, int k, double x) {
  if (!(x >= 0.0)) throw std::domain_error("abs_order_stat_pdf: x must be >= 0");
  return AbsOrderStatDensity(config, h, k)(x);
}

double indicator_centered_ss(int k, int n) {
  return static_cast<double>(k) * static_cast<double>(n - k) / static_cast<double>(n);
}

}  // namespace otbyz
