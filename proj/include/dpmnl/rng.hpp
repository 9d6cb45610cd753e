#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace dpmnl {

// splitmix64, used to derive well-separated child seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. The engine is mt19937_64, whose output
// sequence is fixed by the standard; all variate transformations below are
// implemented here rather than with std:: distributions, which are
// implementation-defined. Same seed, same draw sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream with an independent state, stable under call order.
  RngStream fork(std::uint64_t salt) const {
    return RngStream(mix_seed(seed_ ^ mix_seed(salt + 1)));
  }

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via the Marsaglia polar method (log/sqrt only).
  double normal() {
    for (;;) {
      double u = 2.0 * uniform() - 1.0;
      double v = 2.0 * uniform() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential() { return -std::log(uniform()); }

  // Integer in [0, n).
  std::uint64_t integer(std::uint64_t n) {
    // Rejection to kill modulo bias.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t x = gen_();
      if (x < limit) return x % n;
    }
  }

  // Draw an index proportional to exp(log_weights[k]), max-stabilized.
  int categorical_log(const std::vector<double>& log_weights);

  // Fisher-Yates shuffle of [0, n) indices.
  std::vector<int> permutation(int n) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(integer(static_cast<std::uint64_t>(i) + 1));
      std::swap(idx[i], idx[j]);
    }
    return idx;
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
};

inline int RngStream::categorical_log(const std::vector<double>& log_weights) {
  if (log_weights.empty()) throw std::invalid_argument("categorical_log: empty weights");
  double mx = log_weights[0];
  for (double w : log_weights) {
    if (std::isnan(w)) throw std::runtime_error("categorical_log: NaN weight");
    if (w > mx) mx = w;
  }
  if (!std::isfinite(mx)) throw std::runtime_error("categorical_log: all weights are -inf");
  double total = 0.0;
  std::vector<double> cum(log_weights.size());
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    total += std::exp(log_weights[k] - mx);
    cum[k] = total;
  }
  double t = uniform() * total;
  for (std::size_t k = 0; k < cum.size(); ++k) {
    if (t <= cum[k]) return static_cast<int>(k);
  }
  return static_cast<int>(cum.size()) - 1;
}

}  // namespace dpmnl
