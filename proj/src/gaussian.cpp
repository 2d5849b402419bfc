#include "otbyz/gaussian.hpp"

#include <cmath>

namespace otbyz {

double q_function(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_pdf(double x, double mean, double variance) {
  const double z = x - mean;
  return kInvSqrt2Pi / std::sqrt(variance) * std::exp(-0.5 * z * z / variance);
}

}  // namespace otbyz
