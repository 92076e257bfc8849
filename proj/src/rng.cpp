#include "heis/rng.hpp"

#include "elementary.hpp"
#include "heis/kernels.hpp"

namespace heis {

namespace {

using namespace kernels::elementary;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxMulA, c[0], hi0, lo0);
    mulhilo(kPhiloxMulB, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxWeylA;
    k[1] += kPhiloxWeylB;
  }
  return c;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::pair<double, double> normal_pair(const SeedPolicy& seed, std::uint64_t path,
                                      std::uint32_t substep, std::uint32_t slot) noexcept {
  const auto key = seed.key();
  double g1, g2;
  kernels::scalar::normals(key[0], key[1], path, 1, substep, slot, &g1, &g2);
  return {g1, g2};
}

}  // namespace heis
