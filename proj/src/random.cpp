#include "cellfree/random.hpp"

#include <cmath>

namespace cellfree {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(purpose), lo(index), hi(index),
                    0x63656c6cu};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index)
    : engine_(seeded_engine(seed, purpose, index)) {}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

std::complex<double> RandomStream::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {scale * re, scale * im};
}

std::uint64_t RandomStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine_);
}

std::size_t RandomStream::index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace cellfree
