#pragma once

#include <array>
#include <cstdint>

namespace fsc {

// Philox4x32-10 (Salmon et al., SC'11). Stream format version 1:
//   key     = (seed low word, seed high word)
//   counter = (sample index low, sample index high, coordinate, block)
// Each block yields two doubles in the open interval (0,1) built from 53 bits.
inline constexpr int kRngStreamVersion = 1;

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t sample, std::uint32_t coordinate);

  double uniform();
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  double buf_[2] = {0.0, 0.0};
  int pos_ = 2;
};

}  // namespace fsc
