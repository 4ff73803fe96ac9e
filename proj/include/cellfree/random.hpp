#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cellfree {

/// Independent sub-streams of one simulation run. A trial's draws for each
/// purpose come from their own stream so that, for example, two scenarios
/// sharing a seed see the same AP layouts even if they consume a different
/// number of small-scale draws.
enum class StreamPurpose : std::uint32_t {
  Generic = 0,
  Layout = 1,
  Grouping = 2,
  Shadow = 3,
  SmallScale = 4,
  Oracle = 5,
};

/// Random stream keyed by (seed, purpose, index). The key is expanded through
/// std::seed_seq into the full 19937-bit Mersenne Twister state, which makes
/// every trial's stream reproducible no matter which worker runs it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed,
                        StreamPurpose purpose = StreamPurpose::Generic,
                        std::uint64_t index = 0);

  double uniform();
  double uniform(double lo, double hi);
  double normal();
  /// Circularly-symmetric complex Gaussian CN(0, variance).
  std::complex<double> complex_normal(double variance = 1.0);
  std::uint64_t poisson(double mean);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace cellfree
