#pragma once

namespace otbyz {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Upper tail of the standard normal, P(X > x).
double q_function(double x);

// Lower tail of the standard normal, P(X <= x).
double normal_cdf(double x);

// Density of N(mean, variance) at x.
double normal_pdf(double x, double mean, double variance);

}  // namespace otbyz
