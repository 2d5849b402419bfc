#include "otbyz/attack.hpp"

#include <algorithm>
#include <stdexcept>

namespace otbyz {

AttackAssessment deflection_coefficient(const ModelConfig& config) {
  config.validate();
  const double n = static_cast<double>(config.n_sensors);
  const double s = config.signal;
  const double a = config.byz_frac;
  const double d = config.attack_strength;
  const double two_var = 2.0 * config.noise_var;

  AttackAssessment out;
  out.mean_z_h1 = n * (s * s - 2.0 * d * s * a) / two_var;
  out.mean_z_h0 = n * (2.0 * d * s * a - s * s) / two_var;
  out.var_z_h0 = n * population_moments(config).var_h0;
  const double sep = out.mean_z_h1 - out.mean_z_h0;
  out.dc = sep * sep / out.var_z_h0;
  if (a > 0.0) out.d_star = s / (2.0 * a);
  return out;
}

double optimal_attack_strength(const ModelConfig& config) {
  config.validate();
  if (config.byz_frac <= 0.0)
    throw std::domain_error("FC cannot be blinded: byz_frac is zero");
  return config.signal / (2.0 * config.byz_frac);
}

ByzFraction optimal_byz_fraction(const ModelConfig& config, double given_d) {
  config.validate();
  if (!(given_d > 0.0)) throw std::invalid_argument("optimal_byz_fraction: D must be > 0");
  const double needed = config.signal / (2.0 * given_d);
  return {std::min(1.0, needed), needed <= 1.0};
}

}  // namespace otbyz
