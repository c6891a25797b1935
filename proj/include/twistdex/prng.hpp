#pragma once

#include <complex>
#include <cstdint>

namespace twistdex {

// splitmix64. Chosen over <random> engines because its output, and the
// doubles derived from it below, are bit-identical on every platform, which
// the deterministic-report requirements depend on.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1].
  double uniformSym() { return 2.0 * uniform01() - 1.0; }

  std::complex<double> complexSym() {
    const double re = uniformSym();
    const double im = uniformSym();
    return {re, im};
  }

  // Uniform integer in [0, n). n must be positive and small; modulo bias is
  // irrelevant at the sizes used here but determinism matters.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Derive an independent stream; used to give sub-tasks stable sub-seeds.
  std::uint64_t fork() { return next() ^ 0xa5a5a5a55a5a5a5aULL; }

 private:
  std::uint64_t state_;
};

}  // namespace twistdex
