#pragma once

#include <random>

#include "otbyz/model.hpp"

namespace otbyz::detail {

// One draw from the honest/Byzantine LLR mixture.
class MixtureSampler {
 public:
  explicit MixtureSampler(const LlrMixture& m)
      : mixture_(m), byzantine_(m.weight_byz), sd_(m.stddev()) {}

  template <typename Engine>
  double operator()(Engine& engine) {
    const bool byz = byzantine_(engine);
    const double mean = byz ? mixture_.mean_byz : mixture_.mean_honest;
    return mean + sd_ * normal_(engine);
  }

 private:
  LlrMixture mixture_;
  std::bernoulli_distribution byzantine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double sd_;
};

}  // namespace otbyz::detail
