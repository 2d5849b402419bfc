#pragma once

#include <cmath>
#include <cstdint>

namespace otbyz {

// Monte-Carlo estimate of a mean with its standard error.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
};

// Welford accumulator with Chan's pairwise merge. Merging in a fixed order
// gives results independent of how the samples were split across threads.
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(n_);
    const double n_b = static_cast<double>(other.n_);
    const double n = n_a + n_b;
    const double delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    n_ += other.n_;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Unbiased sample variance; zero with fewer than two samples.
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }
  EstimateWithError estimate() const { return {mean(), std_error(), n_}; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace otbyz
