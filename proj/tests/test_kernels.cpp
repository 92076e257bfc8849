#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>

#include "heis/error.hpp"
#include "heis/kernels.hpp"
#include "heis/paths.hpp"
#include "heis/polynomial.hpp"

using namespace heis;
namespace k = heis::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t size) {
  std::normal_distribution<double> g;
  std::vector<double> v(size);
  for (auto& x : v) x = g(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(k::isa_supported(k::Isa::Scalar));
  CHECK(k::kernels_for(k::Isa::Scalar).isa == k::Isa::Scalar);
}

TEST_CASE("scalar Levy step follows the left-point recursion") {
  double b[2] = {1.0, 2.0}, w[2] = {3.0, -1.0}, z[1] = {0.5};
  const double db[2] = {0.1, 0.2}, dw[2] = {-0.3, 0.4};
  k::scalar::levy_step(2, 1, b, w, z, db, dw);
  // n = 2, one lane: z += (b1 dw1 - w1 db1) + (b2 dw2 - w2 db2).
  CHECK(z[0] == doctest::Approx(0.5 + (1.0 * -0.3 - 3.0 * 0.1) + (2.0 * 0.4 - (-1.0) * 0.2)));
  CHECK(b[0] == doctest::Approx(1.1));
  CHECK(w[1] == doctest::Approx(-0.6));
}

TEST_CASE("deterministic log and sincos track libm closely") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_log = 0.0, worst_trig = 0.0;
  for (int rep = 0; rep < 200000; ++rep) {
    const double v = rep < 4 ? std::vector<double>{0x1.0p-53, 0.5, 1.0 - 0x1.0p-53, 0x1.6a09e667f3bcdp-1}[rep] : u(rng);
    if (v <= 0.0) continue;
    const double l = k::scalar::log(v);
    worst_log = std::max(worst_log, std::abs(l - std::log(v)) / std::max(1e-300, std::abs(std::log(v))));
    double s, c;
    k::scalar::sincos_turns(v, s, c);
    const double a = 2.0 * M_PI * v;
    worst_trig = std::max({worst_trig, std::abs(s - std::sin(a)), std::abs(c - std::cos(a))});
  }
  CHECK(worst_log <= 8e-16);
  CHECK(worst_trig <= 2e-15);
  CHECK(k::scalar::log(1.0) == 0.0);
  double s, c;
  k::scalar::sincos_turns(0.0, s, c);
  CHECK(s == 0.0);
  CHECK(c == 1.0);
  k::scalar::sincos_turns(0.25, s, c);
  CHECK(s == 1.0);
  CHECK(std::abs(c) == 0.0);
}

TEST_CASE("AVX2 kernels are bitwise equal to the scalar reference") {
  if (!k::isa_supported(k::Isa::Avx2)) {
    MESSAGE("AVX2 not available on this machine or build; equivalence not exercised");
    CHECK_THROWS_AS(k::kernels_for(k::Isa::Avx2), UsageError);
    return;
  }
  const auto& s = k::kernels_for(k::Isa::Scalar);
  const auto& v = k::kernels_for(k::Isa::Avx2);
  std::mt19937_64 rng(99);

  SUBCASE("levy step, full and ragged batches") {
    for (std::size_t n : {1u, 2u, 3u}) {
      for (std::size_t lanes : {1u, 3u, 8u}) {
        auto b = random_vector(rng, n * lanes), w = random_vector(rng, n * lanes), z = random_vector(rng, lanes);
        auto b2 = b, w2 = w, z2 = z;
        for (int step = 0; step < 50; ++step) {
          const auto db = random_vector(rng, n * lanes), dw = random_vector(rng, n * lanes);
          s.levy_step(n, lanes, b.data(), w.data(), z.data(), db.data(), dw.data());
          v.levy_step(n, lanes, b2.data(), w2.data(), z2.data(), db.data(), dw.data());
        }
        CHECK(bitwise_equal(b, b2));
        CHECK(bitwise_equal(w, w2));
        CHECK(bitwise_equal(z, z2));
      }
    }
  }

  SUBCASE("polynomial evaluation") {
    for (std::size_t n : {1u, 2u}) {
      const auto plan = parse_polynomial(n == 1 ? "3*z^2*x1 - 0.25*y1^4 + x1*y1 + 1.5" : "x1*y2*z - z^3 + 2*y1^2*x2", n)
                            .make_plan();
      for (std::size_t count : {1u, 5u, 8u, 13u, 64u}) {
        const auto coords = random_vector(rng, (2 * n + 1) * count);
        std::vector<double> a(count), c(count);
        s.poly_eval(plan, coords.data(), count, count, a.data());
        v.poly_eval(plan, coords.data(), count, count, c.data());
        CHECK(bitwise_equal(a, c));
      }
    }
  }

  SUBCASE("accumulate products") {
    for (std::size_t count : {1u, 4u, 7u, 33u}) {
      auto acc = random_vector(rng, count);
      auto acc2 = acc;
      const auto a = random_vector(rng, count), c = random_vector(rng, count);
      s.accumulate_products(count, acc.data(), a.data(), c.data());
      v.accumulate_products(count, acc2.data(), a.data(), c.data());
      CHECK(bitwise_equal(acc, acc2));
    }
  }

  SUBCASE("normal generation") {
    for (std::size_t lanes : {1u, 3u, 4u, 8u}) {
      for (std::uint64_t first : {0ull, 12345ull, (1ull << 32) - 2}) {
        std::vector<double> a1(lanes), a2(lanes), b1(lanes), b2(lanes);
        for (std::uint32_t step = 0; step < 200; ++step) {
          s.normals(0xdeadbeef, 42, first, lanes, step, step % 3, a1.data(), a2.data());
          v.normals(0xdeadbeef, 42, first, lanes, step, step % 3, b1.data(), b2.data());
          REQUIRE(bitwise_equal(a1, b1));
          REQUIRE(bitwise_equal(a2, b2));
        }
      }
    }
  }

  SUBCASE("whole simulations agree") {
    PathConfig cfg;
    cfg.n = 2;
    cfg.n_paths = 37;
    cfg.steps = 64;
    cfg.seed = SeedPolicy{5};
    k::select(k::Isa::Scalar);
    const auto a = simulate(cfg);
    k::select(k::Isa::Avx2);
    const auto c = simulate(cfg);
    CHECK(a == c);
  }
}
