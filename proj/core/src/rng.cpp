#include "sparsecert/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace sparsecert {

namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

std::uint64_t seed_derive(std::uint64_t master_seed, std::uint64_t p, std::uint64_t alpha_index,
                          std::uint64_t rho_index, std::uint64_t trial_index) {
  const std::array<std::uint64_t, 4> fields{p, alpha_index, rho_index, trial_index};
  std::uint64_t h = master_seed;
  std::uint64_t position = 1;
  for (const std::uint64_t field : fields) {
    h = mix64(h ^ (field + 0x9E3779B97F4A7C15ULL * position));
    ++position;
  }
  return h;
}

double SplitMix64::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  uint128 m = static_cast<uint128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<uint128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace sparsecert
