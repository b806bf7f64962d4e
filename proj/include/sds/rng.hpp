#ifndef SDS_RNG_HPP
#define SDS_RNG_HPP

#include <array>
#include <cstdint>

namespace sds {

// Stream roles keep the chain jumps and the Brownian increments on
// disjoint random streams for the same (seed, path) pair.
enum class StreamRole : std::uint32_t {
  ChainJumps = 0,
  Brownian = 1,
  Auxiliary = 2,
};

// Counter-based generator (Philox4x32-10, Salmon et al. 2011) keyed by
// (seed, path_index, role). Draws are reproducible regardless of thread
// scheduling: the stream is a pure function of the key and a running
// 64-bit block counter.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t path_index, StreamRole role);

  std::uint64_t next_u64();

  // Uniform on (0, 1]; never returns 0 so logs are always finite.
  double uniform();

  // Standard normal via Box-Muller; second value of each pair is cached.
  double normal();

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate);

 private:
  std::array<std::uint32_t, 4> block();

  std::uint32_t key0_, key1_;
  std::uint32_t path_lo_, path_hi_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace sds

#endif
