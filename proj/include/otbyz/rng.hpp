#pragma once

// Counter-based random streams. Every (seed, stream, substream) triple names an
// independent sequence, so trials can be generated in any order or on any
// thread and still reproduce bit-for-bit.

#include <array>
#include <cstdint>
#include <limits>

namespace otbyz {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Philox4x32-10 (Salmon et al., SC'11) as a pure function of counter and key.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// UniformRandomBitGenerator over one Philox stream. The key is the seed; the
// counter is (block, substream, stream_lo, stream_hi).
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  explicit PhiloxEngine(RngSpec spec, std::uint32_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

 private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter buffer_{};
  int index_ = 4;
};

}  // namespace otbyz
