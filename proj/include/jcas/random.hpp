#ifndef JCAS_RANDOM_HPP_
#define JCAS_RANDOM_HPP_

// Seeded random streams. The generator is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; doubles are formed from the top 53
// bits so streams are identical on every conforming platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace jcas {

/// SplitMix64 finalizer, used to derive independent sub-seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform draw from the probability simplex of dimension n (Dirichlet(1)).
  std::vector<double> simplex(std::size_t n) {
    std::vector<double> row(n);
    double sum = 0.0;
    for (auto& v : row) {
      v = -std::log1p(-uniform());
      sum += v;
    }
    if (sum <= 0.0) {
      row.assign(n, 1.0 / static_cast<double>(n));
      return row;
    }
    for (auto& v : row) v /= sum;
    return row;
  }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace jcas

#endif // JCAS_RANDOM_HPP_
