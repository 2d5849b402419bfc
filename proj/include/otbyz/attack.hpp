#pragma once

// Deflection-coefficient view of the unordered global statistic Z = sum L_i,
// and the attack parameters that blind the fusion center.

#include <optional>

#include "otbyz/model.hpp"

namespace otbyz {

struct AttackAssessment {
  double dc = 0.0;
  double mean_z_h1 = 0.0;
  double mean_z_h0 = 0.0;
  double var_z_h0 = 0.0;
  // Minimum blinding strength s / (2 alpha0); empty when alpha0 == 0.
  std::optional<double> d_star;
};

AttackAssessment deflection_coefficient(const ModelConfig& config);

// s / (2 alpha0). Throws std::domain_error when alpha0 == 0 (the fusion
// center cannot be blinded).
double optimal_attack_strength(const ModelConfig& config);

struct ByzFraction {
  double fraction = 0.0;
  // False when s / (2 D) > 1, i.e. even an all-Byzantine network cannot blind
  // the fusion center at this strength; fraction is then capped at 1.
  bool attainable = false;
};

// Smallest Byzantine fraction that zeroes the deflection coefficient at
// attack strength given_d. Throws std::invalid_argument for given_d <= 0.
ByzFraction optimal_byz_fraction(const ModelConfig& config, double given_d);

}  // namespace otbyz
