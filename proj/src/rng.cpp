#include "fsc/rng.hpp"

#include <cmath>
#include <numbers>

namespace fsc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint32_t a, std::uint32_t b) {
  std::uint64_t bits = (static_cast<std::uint64_t>(a) << 21) ^ (b >> 11);
  bits &= (std::uint64_t{1} << 53) - 1;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t sample, std::uint32_t coordinate)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), coordinate,
           0u} {}

void CounterStream::refill() {
  auto r = philox4x32(ctr_, key_);
  ++ctr_[3];
  buf_[0] = to_open_unit(r[0], r[1]);
  buf_[1] = to_open_unit(r[2], r[3]);
  pos_ = 0;
}

double CounterStream::uniform() {
  if (pos_ >= 2) refill();
  return buf_[pos_++];
}

double CounterStream::normal() {
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fsc
