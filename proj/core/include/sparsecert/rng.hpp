#pragma once

#include <cstdint>

namespace sparsecert {

/// splitmix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-trial stream seed. Folds the tuple into the master seed one field at a
/// time: h <- mix64(h ^ (field + 0x9E3779B97F4A7C15 * position)), position 1..4.
std::uint64_t seed_derive(std::uint64_t master_seed, std::uint64_t p, std::uint64_t alpha_index,
                          std::uint64_t rho_index, std::uint64_t trial_index);

/// splitmix64 generator with fixed, language-neutral derived draws:
///  - uniform():  (next() >> 11) * 2^-53, in [0, 1)
///  - normal():   Box-Muller on u1 = 1 - uniform(), u2 = uniform();
///                returns r cos(2 pi u2) and caches r sin(2 pi u2) for the next call
///  - below(m):   Lemire multiply-shift with rejection, unbiased in [0, m)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  double uniform() noexcept;
  double normal() noexcept;
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sparsecert
