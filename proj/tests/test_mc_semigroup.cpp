#include "doctest.h"

#include <cmath>
#include <random>

#include "heis/error.hpp"
#include "heis/mc_semigroup.hpp"

using namespace heis;
namespace fn = heis::functions;

namespace {

using P = HPolynomial;

PathConfig config(std::size_t n, std::size_t paths, std::size_t steps, std::uint64_t seed) {
  PathConfig c;
  c.n = n;
  c.n_paths = paths;
  c.steps = steps;
  c.seed = SeedPolicy{seed};
  return c;
}

bool within(const MCEstimate& e, double target, double allowance = 0.0) {
  return std::abs(e.value - target) <= 3.0 * e.std_error + allowance + 1e-12;
}

}  // namespace

TEST_CASE("q_estimate examples") {
  const auto bundle = simulate(config(1, 40000, 1024, 11), 256);
  const GroupPoint o(1);
  const auto one = q_estimate(P::constant(1, 1.0), o, 1.0, bundle);
  CHECK(one.value == 1.0);
  CHECK(one.std_error == 0.0);
  CHECK(within(q_estimate(P::x(1, 0) * P::x(1, 0), o, 1.0, bundle), 1.0));
  CHECK(within(q_estimate(P::z(1) * P::z(1), o, 1.0, bundle), 0.25, 0.25 * bundle.dt()));
  CHECK_THROWS_AS(q_estimate(P::z(1), o, 0.3, bundle), UsageError);
  CHECK_THROWS_AS(q_estimate(P::z(2), GroupPoint(2), 1.0, bundle), UsageError);
}

TEST_CASE("q_estimate agrees with the exact engine on low-weight monomials") {
  const auto bundle = simulate(config(2, 20000, 512, 12), 512);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const GroupPoint p({u(rng), u(rng)}, {u(rng), u(rng)}, u(rng));
  for (const auto& m : monomial_basis(2, 4)) {
    const double exact = poly_eval(heat_semigroup(m, 1.0), p);
    const auto poly = q_estimate(m, p, 1.0, bundle);
    const auto smooth = q_estimate(fn::from_polynomial(m, m.to_string()), p, 1.0, bundle);
    CHECK(within(poly, exact, 4.0 * bundle.dt()));
    CHECK(smooth.value == doctest::Approx(poly.value).epsilon(1e-11));
  }
}

TEST_CASE("coupled mirror check is exact per sample") {
  const auto bundle = simulate(config(2, 2000, 64, 13));
  const auto mirrored = mirror_paths(bundle);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (const auto& f : {fn::lookup("z2", 2), fn::lookup("x1z", 2), fn::gauss_bump(2)}) {
    for (int rep = 0; rep < 5; ++rep) {
      const GroupPoint p({g(rng), g(rng)}, {g(rng), g(rng)}, g(rng));
      const auto r = coupled_mirror_check(f, p, 1.0, bundle, mirrored);
      CHECK(r.pass);
      CHECK(r.max_difference <= 1e-10);
    }
  }
  const auto c = coupled_mirror_check(fn::constant(2, 1.0), GroupPoint(2), 0.5, bundle, mirrored);
  CHECK(c.max_difference == 0.0);
  const auto x = coupled_mirror_check(fn::coordinate_x(2, 1), GroupPoint(2), 1.0, bundle, mirrored);
  CHECK(x.max_difference <= 1e-10);
  CHECK(x.original.value == doctest::Approx(-q_estimate(fn::coordinate_x(2, 1), GroupPoint(2), 1.0, mirrored).value));
  CHECK_THROWS_AS(coupled_mirror_check(fn::constant(2, 1.0), GroupPoint(2), 0.5, bundle, bundle), UsageError);
}

TEST_CASE("tower property through orthogonality probes") {
  const auto bundle = mirror_paths(simulate(config(1, 40000, 1024, 14), 256));
  for (const auto& f : {P::x(1, 0), P::z(1), P::z(1) * P::z(1), P::x(1, 0) * P::y(1, 0)}) {
    for (double t : {0.25, 0.5}) {
      const auto r = tower_test(f, t, 1.0, kAllProbes, bundle);
      CHECK(r.checks.size() == 4);
      for (const auto& c : r.checks) {
        INFO(c.label, " value ", c.value, " se ", c.std_error);
        CHECK(c.pass);
      }
    }
  }
  const auto k = tower_test(P::constant(1, 2.0), 0.5, 1.0, kAllProbes, bundle);
  for (const auto& c : k.checks) CHECK(c.value == 0.0);
  CHECK_THROWS_AS(tower_test(P::z(1), 1.0, 0.5, kAllProbes, bundle), UsageError);
}

TEST_CASE("martingale test") {
  const auto bundle = simulate(config(1, 40000, 1024, 15), 256);
  const std::vector<double> times{0.0, 0.25, 0.5, 0.75};

  SUBCASE("constant images are exact") {
    const auto r = martingale_test(P::x(1, 0), FieldId::X(1), times, bundle);
    CHECK(r.pass);
    for (const auto& m : r.means) CHECK(m.value == 1.0);
  }
  SUBCASE("right-field images of the semigroup are martingales") {
    for (const auto& f : {P::z(1) * P::z(1), P::x(1, 0) * P::y(1, 0), P::x(1, 0) * P::z(1)}) {
      for (auto field : {FieldId::Xhat(1), FieldId::Yhat(1)}) {
        const auto r = martingale_test(f, field, times, bundle);
        for (const auto& c : r.orthogonality) {
          INFO(f.to_string(), " ", c.label, " ", c.value, " se ", c.std_error);
          CHECK(c.pass);
        }
        CHECK(r.pass);
      }
    }
  }
  SUBCASE("left-field image of z^2 has mean zero but a drift of -b") {
    const auto r = martingale_test(P::z(1) * P::z(1), FieldId::X(1), times, bundle);
    CHECK(all_pass(r.mean_checks));
    // E[(M_t - M_s) b_s] = -(t - s) s for consecutive times.
    CHECK(r.orthogonality[4 + 1].value == doctest::Approx(-0.0625).epsilon(0.1));
    CHECK_FALSE(r.pass);
  }
  CHECK_THROWS_AS(martingale_test(fn::gauss_bump(1), FieldId::X(1), times, bundle), CapabilityError);
  const std::vector<double> bad{0.5, 0.25};
  CHECK_THROWS_AS(martingale_test(P::z(1), FieldId::X(1), bad, bundle), UsageError);
}

TEST_CASE("stochastic integral representation") {
  const auto cfg = config(1, 4000, 256, 16);
  const auto x = representation_check(P::x(1, 0), cfg);
  CHECK(x.max_abs == 0.0);
  const auto z2 = representation_check(P::z(1) * P::z(1), cfg);
  CHECK(std::abs(z2.mean_residual.value) <= 3.0 * z2.mean_residual.std_error);
  const auto ref = representation_refinement(P::z(1) * P::z(1), cfg);
  CHECK(ref.fine.steps == 256);
  CHECK(ref.coarse.steps == 128);
  CHECK(ref.ratio > 1.2);
  auto cfg2 = cfg;
  cfg2.n = 2;
  const auto r2 = representation_check(parse_polynomial("x1*y2*z + z^2", 2), cfg2);
  CHECK(std::abs(r2.mean_residual.value) <= 3.0 * r2.mean_residual.std_error);
}
