#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace qcl {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Derives a child seed from a global seed and a stable instance index path.
/// Used so that independent experiment instances get independent, fully
/// reproducible streams.
inline std::uint64_t mix_seed(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = detail::splitmix64(seed);
  for (std::uint64_t part : parts) {
    h = detail::splitmix64(h ^ detail::splitmix64(part + 0x9e3779b97f4a7c15ULL));
  }
  return h;
}

/// Seeded random source. Built on mt19937_64, whose output sequence the
/// C++ standard pins down, with hand-rolled distributions on top, so streams
/// are byte-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Number of failures before the first success, P(N = k) = (1-p)^k p.
  /// p = 1 yields 0 deterministically; requires p in (0, 1].
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 0;
    const double u = uniform01();
    return static_cast<std::uint64_t>(std::floor(std::log1p(-u) / std::log1p(-p)));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qcl
