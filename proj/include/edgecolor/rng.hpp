#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace edgecolor {

/// SplitMix64 finalizer. Used to derive independent sub-stream seeds from a
/// master seed and a list of counters, so results do not depend on the order
/// in which sub-streams are consumed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> counters) noexcept {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t c : counters) s = splitmix64(s ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

/// Uniform double in [0,1) from the top 53 bits. Bit-stable across standard
/// library implementations, unlike std::uniform_real_distribution.
inline double unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return unit_double(engine_()); }

  /// Uniform integer in [0, n). Lemire-style rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Stateless Bernoulli(p) draw keyed by (seed, counters). Lets samplers decide
/// membership of an unbounded index set lazily without storing it.
inline bool keyed_bernoulli(double p, std::uint64_t seed,
                            std::initializer_list<std::uint64_t> counters) noexcept {
  return unit_double(derive_seed(seed, counters)) < p;
}

}  // namespace edgecolor
