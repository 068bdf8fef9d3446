#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ner {

// Seeded RNG with hand-rolled draws. std::shuffle and the distribution
// classes are implementation-defined, which would make "same seed, same
// selection" hold only per standard library; these draws are pinned to the
// mt19937_64 output stream itself.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t raw() { return gen_(); }

  /// Uniform double in [0, 1), 53 bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0. Rejection sampling, no modulo bias.
  uint64_t below(uint64_t n) {
    const uint64_t limit = n * ((~uint64_t{0}) / n);
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  /// Index drawn with probability weights[i] / sum(weights).
  /// Non-positive total weight degrades to uniform.
  size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += (w > 0.0 ? w : 0.0);
    if (!(total > 0.0)) return static_cast<size_t>(below(weights.size()));
    double r = unit() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      const double w = weights[i] > 0.0 ? weights[i] : 0.0;
      if (r < w) return i;
      r -= w;
    }
    return weights.size() - 1;  // float round-off
  }

  /// Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ner
