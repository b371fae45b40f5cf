#pragma once

#include <cstdint>
#include <random>

namespace jamlab {

// splitmix64 finalizer; used to turn arbitrary 64-bit ids into well-mixed seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Random stream with stable uniform/normal generation. Uniform and normal
// draws are produced from raw engine output directly so that sequences do
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::size_t uniform_index(std::size_t n) {
    // Modulo bias is negligible for n << 2^64.
    return static_cast<std::size_t>(eng_() % n);
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the partner draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Binomial draw. Exact inversion for small n*p, otherwise the standard
  // library sampler on the underlying engine.
  std::int64_t binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::int64_t> dist(n, p);
    return dist(eng_);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives named sub-streams from a master seed. Each (id triple) yields an
// independent stream, so packet-level parallelism cannot reorder draws.
class StreamSeeder {
 public:
  explicit StreamSeeder(std::uint64_t master) : master_(master) {}

  Rng stream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return Rng(hash_combine(hash_combine(hash_combine(master_, a), b), c));
  }

  std::uint64_t master() const { return master_; }

 private:
  std::uint64_t master_;
};

}  // namespace jamlab
