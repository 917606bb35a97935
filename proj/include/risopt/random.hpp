#pragma once

#include <array>
#include <cstdint>

namespace risopt {

/// Noise sources drawn per trial. Each one gets its own stream so that
/// changing how one source is consumed never shifts another.
enum class Purpose : std::uint64_t {
  channel = 1,
  psn = 2,
  random_config = 3,
  random_compensator = 4,
};

/// Stream id for (trial, purpose). The low byte carries the purpose tag.
constexpr std::uint64_t stream_id(std::uint64_t trial, Purpose purpose) {
  return (trial << 8) | static_cast<std::uint64_t>(purpose);
}

/// Counter-based generator (Philox4x32-10). The key is the seed, the upper
/// half of the 128-bit counter is the stream id and the lower half counts
/// blocks, so any (seed, stream) is addressable without warm-up.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on [lo, hi). Throws std::invalid_argument unless lo < hi.
  double uniform(double lo, double hi);

  double standard_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t id() const { return stream_; }

  /// Number of 64-bit words consumed so far.
  std::uint64_t words_drawn() const { return words_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // 64-bit words left in buffer_
  std::uint64_t words_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

inline RandomStream make_stream(std::uint64_t seed, std::uint64_t stream) {
  return RandomStream(seed, stream);
}

inline double draw_uniform(RandomStream& s, double lo, double hi) {
  return s.uniform(lo, hi);
}

inline double draw_standard_normal(RandomStream& s) {
  return s.standard_normal();
}

/// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace risopt
