#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace icsel::rng {

/// Philox4x32-10 block function (Salmon et al., Random123).
using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;
Counter philox4x32_10(Counter ctr, Key key);

/// SplitMix64 finalizer, used to fold substream labels into 64 bits.
std::uint64_t mix64(std::uint64_t x);

/// A counter-based stream: the 64-bit key is the experiment seed, the upper
/// half of the counter names the substream, the lower half counts blocks.
/// Two streams with different (seed, substream) never share blocks.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t substream);

  /// Substream for a labelled tuple, e.g. (scenario, n, run).
  static Stream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box–Muller; the second deviate is cached.
  double normal();
  /// Gamma(shape, 1) by Marsaglia–Tsang.
  double gamma(double shape);
  double chi_square(double df) { return 2.0 * gamma(0.5 * df); }
  /// Index drawn from nonnegative weights (need not be normalized).
  std::size_t categorical(const double* weights, std::size_t count);

 private:
  void refill();

  Key key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  Counter buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace icsel::rng
