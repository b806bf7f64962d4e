#include "sds/rng.hpp"

#include <cmath>

namespace sds {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;
constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
  std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
  std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t path_index, StreamRole role) {
  std::uint64_t state = seed;
  std::uint64_t k = splitmix64(state);
  state = k ^ (0x5851F42D4C957F2Dull * (static_cast<std::uint64_t>(role) + 1));
  std::uint64_t mixed = splitmix64(state);
  key0_ = static_cast<std::uint32_t>(mixed);
  key1_ = static_cast<std::uint32_t>(mixed >> 32);
  path_lo_ = static_cast<std::uint32_t>(path_index);
  path_hi_ = static_cast<std::uint32_t>(path_index >> 32);
}

std::array<std::uint32_t, 4> RngStream::block() {
  std::array<std::uint32_t, 4> c = {static_cast<std::uint32_t>(counter_),
                                    static_cast<std::uint32_t>(counter_ >> 32),
                                    path_lo_, path_hi_};
  std::uint32_t k0 = key0_;
  std::uint32_t k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kWeylA;
    k1 += kWeylB;
  }
  ++counter_;
  return c;
}

std::uint64_t RngStream::next_u64() {
  if (buf_pos_ >= 4) {
    buf_ = block();
    buf_pos_ = 0;
  }
  std::uint64_t lo = buf_[buf_pos_];
  std::uint64_t hi = buf_[buf_pos_ + 1];
  buf_pos_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

double RngStream::exponential(double rate) {
  return -std::log(uniform()) / rate;
}

}  // namespace sds
