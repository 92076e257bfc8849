#include "doctest.h"

#include <cmath>

#include "heis/error.hpp"
#include "heis/inequality.hpp"

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

const PathBundle& bundle_n1() {
  static const PathBundle b = simulate(config(1, 40000, 1024, 21), 1024);
  return b;
}

}  // namespace

TEST_CASE("Dirichlet form examples") {
  const auto& b = bundle_n1();
  const auto c = dirichlet_rhs(fn::constant(1, 4.0), b);
  CHECK(c.value == 0.0);
  CHECK(c.std_error == 0.0);
  const auto x = dirichlet_rhs(fn::coordinate_x(1, 1), b);
  CHECK(x.value == 1.0);
  CHECK(x.std_error == 0.0);
  const auto z = dirichlet_rhs(fn::coordinate_z(1), b);
  CHECK(std::abs(z.value - 0.5) <= 3.0 * z.std_error);
  const SmoothFunction bare("bare", 1, [](const GroupPoint& p) { return p.z(); });
  CHECK_THROWS_AS(dirichlet_rhs(bare, b), CapabilityError);
}

TEST_CASE("Poincare examples") {
  const auto& b = bundle_n1();
  const auto x = poincare_check(fn::coordinate_x(1, 1), b, CheckMode::Equality);
  CHECK(x.pass);
  CHECK(x.rhs.value == 1.0);
  const auto z = poincare_check(fn::coordinate_z(1), b);
  CHECK(z.pass);
  CHECK(z.lhs.value == doctest::Approx(0.25).epsilon(0.05));
  CHECK(z.slack > 3.0 * z.slack_std_error);
  const auto c = poincare_check(fn::constant(1, 2.0), b);
  CHECK(c.pass);
  CHECK(c.lhs.value == 0.0);
  CHECK(c.rhs.value == 0.0);
  for (const auto& f : fn::battery(1)) {
    INFO(f.name());
    CHECK(poincare_check(f, b).pass);
  }
}

TEST_CASE("Poincare verdict is scale equivariant") {
  const auto& b = bundle_n1();
  for (const auto& f : fn::battery(1)) {
    const auto base = poincare_check(f, b);
    for (double c : {0.1, 3.0}) {
      const auto r = poincare_check(scaled(f, c), b);
      CHECK(r.pass == base.pass);
      CHECK(r.lhs.value == doctest::Approx(c * c * base.lhs.value).epsilon(1e-10));
      CHECK(r.rhs.value == doctest::Approx(c * c * base.rhs.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("entropy estimator") {
  std::vector<double> ones(1000, 1.0);
  const auto e = entropy_estimate(ones, SeedPolicy{1});
  CHECK(e.value == 0.0);
  REQUIRE(e.interval);
  CHECK(e.interval->lo <= e.value);
  CHECK(e.interval->hi >= e.value);

  const auto& b = bundle_n1();
  std::vector<double> g(b.n_paths());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::exp(b.b(j, b.steps(), 0));
  const auto h = entropy_estimate(g, SeedPolicy{2});
  const double exact = 0.5 * std::exp(0.5);
  REQUIRE(h.interval);
  CHECK(h.interval->lo <= exact);
  CHECK(h.interval->hi >= exact);
  CHECK(std::abs(h.value - exact) <= 3.0 * h.std_error);
  CHECK(entropy_estimate(g, SeedPolicy{2}).interval->lo == h.interval->lo);

  std::vector<double> bump(b.n_paths());
  const auto gb = fn::gauss_bump(1);
  for (std::size_t j = 0; j < bump.size(); ++j) bump[j] = 2.0 * gb(point_at(b, j, b.steps()));
  const auto eb = entropy_estimate(bump, SeedPolicy{3}, 200);
  CHECK(eb.value >= -3.0 * eb.std_error);

  std::vector<double> neg{1.0, -0.5};
  CHECK_THROWS_AS(entropy_estimate(neg, SeedPolicy{}), DomainError);
  std::vector<double> zeros(10, 0.0);
  CHECK_THROWS_AS(entropy_estimate(zeros, SeedPolicy{}), DomainError);
}

TEST_CASE("log-Sobolev examples") {
  const auto& b = bundle_n1();
  const auto c = logsobolev_check(fn::constant(1, 3.0), b);
  CHECK(c.pass);
  CHECK(c.lhs.value == doctest::Approx(0.0).epsilon(1e-12));
  const auto e = logsobolev_check(fn::exp_linear(1, 1.0), b, CheckMode::Equality);
  CHECK(e.pass);
  CHECK(e.outside_hypotheses);
  CHECK(e.rhs.value == doctest::Approx(0.5 * std::exp(0.5)).epsilon(0.05));
  const auto g = logsobolev_check(fn::gauss_bump(1), b);
  CHECK(g.pass);
  CHECK(g.slack > 3.0 * g.slack_std_error);
  for (const auto& f : fn::battery(1)) {
    INFO(f.name());
    CHECK(logsobolev_check(f, b).pass);
  }
}

TEST_CASE("equality suite") {
  const auto reports = equality_suite(bundle_n1());
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    INFO(r.kind, " ", r.function, " lhs ", r.lhs.value, " rhs ", r.rhs.value);
    CHECK(r.pass);
    CHECK(r.mode == CheckMode::Equality);
  }
}

TEST_CASE("exact Poincare terms") {
  const auto z = exact_poincare(P::z(1), 1.0);
  CHECK(z.variance == doctest::Approx(0.25));
  CHECK(z.dirichlet == doctest::Approx(0.5));
  const auto x = exact_poincare(P::x(2, 0), 1.0);
  CHECK(x.variance == doctest::Approx(1.0));
  CHECK(x.dirichlet == doctest::Approx(1.0));
}

TEST_CASE("Girsanov mechanics, constant density") {
  GirsanovConfig cfg;
  cfg.paths = config(1, 500, 64, 22);
  const auto r = girsanov_diagnostics(P::constant(1, 3.0), cfg);
  CHECK(r.normalization == 3.0);
  CHECK(r.fine.residual_rms == 0.0);
  CHECK(r.fine.max_terminal_error == 0.0);
  CHECK(r.fine.half_energy.value == 0.0);
  CHECK(r.fine.entropy.value == 0.0);
  CHECK(r.pass);
}

TEST_CASE("Girsanov mechanics for (1 + x^2)/2") {
  GirsanovConfig cfg;
  cfg.paths = config(1, 20000, 512, 23);
  const P f = (P::constant(1, 1.0) + P::x(1, 0) * P::x(1, 0)) * 0.5;
  const auto r = girsanov_diagnostics(f, cfg);
  CHECK(r.normalization == doctest::Approx(1.0));
  CHECK(r.fine.max_terminal_error <= 1e-10);
  CHECK(r.fine.min_l > 0.0);
  for (const auto& c : r.checks) {
    INFO(c.label, " value ", c.value, " target ", c.target, " se ", c.std_error);
    CHECK(c.pass);
  }
  // z-free density: both integrand conventions coincide.
  cfg.integrand = GirsanovIntegrand::LeftFields;
  const auto left = girsanov_diagnostics(f, cfg);
  CHECK(left.fine.residual_rms == doctest::Approx(r.fine.residual_rms).epsilon(1e-12));
}

TEST_CASE("Girsanov rejects non-positive densities") {
  GirsanovConfig cfg;
  cfg.paths = config(1, 100, 32, 24);
  CHECK_THROWS_AS(girsanov_diagnostics(P::x(1, 0), cfg), DomainError);
  CHECK_THROWS_AS(girsanov_diagnostics(P::x(1, 0) * P::x(1, 0) - P::constant(1, 0.5), cfg), DomainError);
}
