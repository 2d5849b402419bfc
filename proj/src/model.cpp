#include "otbyz/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "otbyz/gaussian.hpp"

namespace otbyz {

std::string_view to_string(Hypothesis h) { return h == Hypothesis::H1 ? "H1" : "H0"; }

void ModelConfig::validate() const {
  if (n_sensors < 1) throw std::invalid_argument("n_sensors must be >= 1");
  if (!(signal > 0.0) || !std::isfinite(signal))
    throw std::invalid_argument("signal must be finite and > 0");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw std::invalid_argument("noise_var must be finite and > 0");
  if (!(byz_frac >= 0.0 && byz_frac <= 1.0))
    throw std::invalid_argument("byz_frac must lie in [0, 1]");
  if (!(attack_strength >= 0.0) || !std::isfinite(attack_strength))
    throw std::invalid_argument("attack_strength must be finite and >= 0");
  if (!(prior_h1 > 0.0 && prior_h1 < 1.0))
    throw std::invalid_argument("prior_h1 must lie in (0, 1)");
}

double ModelConfig::threshold() const { return std::log(prior_h0() / prior_h1); }

std::string ModelConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "N=" << n_sensors << ";s=" << signal << ";sigma2=" << noise_var
     << ";alpha0=" << byz_frac << ";D=" << attack_strength << ";prior_h1=" << prior_h1;
  return os.str();
}

double LlrMixture::stddev() const { return std::sqrt(variance); }

double observation_llr(const ModelConfig& config, double y) {
  const double s = config.signal;
  return (2.0 * y * s - s * s) / (2.0 * config.noise_var);
}

LlrMixture llr_mixture(const ModelConfig& config, Hypothesis h) {
  const double s = config.signal;
  const double two_var = 2.0 * config.noise_var;
  const double honest = s * s / two_var;
  // Byzantine shift of D toward the wrong hypothesis moves the LLR mean by
  // D s / sigma^2 toward it.
  const double byz = (s * s - 2.0 * config.attack_strength * s) / two_var;
  const double sign = h == Hypothesis::H1 ? 1.0 : -1.0;
  return LlrMixture{config.byz_frac, sign * honest, sign * byz, config.beta()};
}

double mixture_pdf(const LlrMixture& m, double l) {
  double p = 0.0;
  if (m.weight_byz > 0.0) p += m.weight_byz * normal_pdf(l, m.mean_byz, m.variance);
  if (m.weight_byz < 1.0) p += (1.0 - m.weight_byz) * normal_pdf(l, m.mean_honest, m.variance);
  return p;
}

namespace {

// P(-x <= X <= x) for X ~ N(mean, sd^2).
double symmetric_interval(double x, double mean, double sd) {
  return q_function((-x - mean) / sd) - q_function((x - mean) / sd);
}

double symmetric_tails(double x, double mean, double sd) {
  return q_function((x - mean) / sd) + q_function((x + mean) / sd);
}

}  // namespace

double abs_llr_cdf(const LlrMixture& m, double x) {
  if (!(x >= 0.0)) throw std::domain_error("abs_llr_cdf: x must be >= 0");
  const double sd = m.stddev();
  double p = 0.0;
  if (m.weight_byz > 0.0) p += m.weight_byz * symmetric_interval(x, m.mean_byz, sd);
  if (m.weight_byz < 1.0) p += (1.0 - m.weight_byz) * symmetric_interval(x, m.mean_honest, sd);
  return p;
}

double abs_llr_sf(const LlrMixture& m, double x) {
  if (!(x >= 0.0)) throw std::domain_error("abs_llr_sf: x must be >= 0");
  const double sd = m.stddev();
  double p = 0.0;
  if (m.weight_byz > 0.0) p += m.weight_byz * symmetric_tails(x, m.mean_byz, sd);
  if (m.weight_byz < 1.0) p += (1.0 - m.weight_byz) * symmetric_tails(x, m.mean_honest, sd);
  return p;
}

double abs_llr_pdf(const LlrMixture& m, double x) {
  if (x < 0.0) return 0.0;
  return mixture_pdf(m, x) + mixture_pdf(m, -x);
}

PopulationMoments population_moments(const ModelConfig& config) {
  PopulationMoments out;
  for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
    const LlrMixture m = llr_mixture(config, h);
    const double a = m.weight_byz;
    const double mean = a * m.mean_byz + (1.0 - a) * m.mean_honest;
    const double second = m.variance + a * m.mean_byz * m.mean_byz +
                          (1.0 - a) * m.mean_honest * m.mean_honest;
    const double var = second - mean * mean;
    if (h == Hypothesis::H1) {
      out.mean_h1 = mean;
      out.var_h1 = var;
    } else {
      out.mean_h0 = mean;
      out.var_h0 = var;
    }
  }
  return out;
}

}  // namespace otbyz
