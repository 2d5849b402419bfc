#include "otbyz/rng.hpp"

namespace otbyz {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxEngine::PhiloxEngine(RngSpec spec, std::uint32_t substream)
    : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
      counter_{0, substream, static_cast<std::uint32_t>(spec.stream),
               static_cast<std::uint32_t>(spec.stream >> 32)} {}

void PhiloxEngine::refill() {
  buffer_ = philox4x32_10(counter_, key_);
  // 2^32 blocks per substream is far beyond any single trial's needs; carry
  // into the substream word anyway so the sequence never repeats.
  if (++counter_[0] == 0) ++counter_[1];
  index_ = 0;
}

}  // namespace otbyz
