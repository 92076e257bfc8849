#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace heis {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A pure function of (counter, key): any draw can be recomputed without
/// touching a stream, which is what makes path generation independent of the
/// worker count.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// splitmix64 finalizer; used to derive independent keys from one master seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Master seed plus the counter layout used by every consumer of randomness.
struct SeedPolicy {
  std::uint64_t master = 0;

  /// An independent policy for a named sub-computation (bootstrap, second
  /// simulation, ...).
  SeedPolicy derive(std::uint64_t stream) const noexcept { return {mix64(master ^ mix64(stream + 1))}; }

  Philox4x32::Key key() const noexcept {
    return {static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
  }

  bool operator==(const SeedPolicy&) const = default;
};

/// Uniform in the open interval (0, 1) from the top 52 of 64 random bits:
/// (k + 0.5) * 2^-52, exact in double precision.
inline double uniform_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Two independent standard normals for (path, substep, slot), via Box-Muller.
/// Depends on nothing but the arguments; same values as the normals kernels.
std::pair<double, double> normal_pair(const SeedPolicy& seed, std::uint64_t path,
                                      std::uint32_t substep, std::uint32_t slot) noexcept;

}  // namespace heis
