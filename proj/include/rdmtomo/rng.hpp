#pragma once

#include <cstdint>
#include <random>

namespace rdmtomo {

/// Seedable, portable normal sampler: std::mt19937_64 drives 53-bit
/// uniforms, transformed by Box-Muller. The generator identity is part of
/// the reproducibility contract.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {  // N(0, 1)
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream per sample or restart: base seed xor a scrambled index.
inline std::uint64_t derive_sample_seed(std::uint64_t base_seed, int sample_index) {
  return splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(sample_index) + 1));
}

}  // namespace rdmtomo
