#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <random>

namespace opsom {

// Anything the stochastic operators can draw from. Production code uses Rng;
// tests substitute sources that return fixed values.
template <typename R>
concept RandomSource = requires(R& r, std::size_t n) {
  { r.uniform() } -> std::convertible_to<double>;
  { r.index(n) } -> std::convertible_to<std::size_t>;
};

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw in [0, 1).
  double uniform() { return unit_(engine_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// run_seed = base_seed XOR (run_index * golden-ratio constant)
constexpr std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
  return base_seed ^ (run_index * 0x9E3779B97F4A7C15ULL);
}

}  // namespace opsom
