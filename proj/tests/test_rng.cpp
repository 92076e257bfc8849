#include "doctest.h"

#include <cmath>
#include <set>

#include "heis/rng.hpp"

using namespace heis;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms lie strictly inside the unit interval") {
  CHECK(uniform_open(0) > 0.0);
  CHECK(uniform_open(~0ull) < 1.0);
}

TEST_CASE("normal pairs are pure functions of their coordinates") {
  const SeedPolicy s{42};
  CHECK(normal_pair(s, 3, 7, 1) == normal_pair(s, 3, 7, 1));
  CHECK(normal_pair(s, 3, 7, 1) != normal_pair(s, 3, 7, 0));
  CHECK(normal_pair(s, 3, 7, 1) != normal_pair(s, 4, 7, 1));
  CHECK(normal_pair(s, 3, 7, 1) != normal_pair(SeedPolicy{43}, 3, 7, 1));
  CHECK(normal_pair(s, 1ull << 40, 0, 0) != normal_pair(s, 0, 0, 0));
}

TEST_CASE("normal moments") {
  const SeedPolicy s{2024};
  constexpr int N = 200000;
  double m1 = 0, m2 = 0, m4 = 0, cross = 0;
  for (int j = 0; j < N; ++j) {
    const auto [a, b] = normal_pair(s, j, 0, 0);
    m1 += a + b;
    m2 += a * a + b * b;
    m4 += a * a * a * a + b * b * b * b;
    cross += a * b;
  }
  m1 /= 2 * N;
  m2 /= 2 * N;
  m4 /= 2 * N;
  cross /= N;
  CHECK(std::abs(m1) < 3.0 / std::sqrt(2.0 * N) * 1.5);
  CHECK(std::abs(m2 - 1.0) < 3.0 * std::sqrt(2.0 / (2.0 * N)) * 1.5);
  CHECK(std::abs(m4 - 3.0) < 3.0 * std::sqrt(96.0 / (2.0 * N)) * 1.5);
  CHECK(std::abs(cross) < 3.0 / std::sqrt(double(N)) * 1.5);
}

TEST_CASE("derived seeds differ") {
  const SeedPolicy s{1};
  std::set<std::uint64_t> seen{s.master};
  for (std::uint64_t k = 0; k < 100; ++k) seen.insert(s.derive(k).master);
  CHECK(seen.size() == 101);
}
