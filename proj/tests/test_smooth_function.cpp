#include "doctest.h"

#include <cmath>
#include <random>

#include "heis/error.hpp"
#include "heis/smooth_function.hpp"

using namespace heis;
namespace fn = heis::functions;

namespace {

GroupPoint random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(2 * n + 1);
  for (auto& v : c) v = u(rng);
  return GroupPoint::from_coordinates(c);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::vector<SmoothFunction> analytic_set(std::size_t n) {
  auto out = fn::battery(n);
  out.push_back(fn::exp_linear(n, 0.7));
  out.push_back(fn::lookup("poly:x1^2*z - y1*z^2 + 0.5*x1*y1", n));
  return out;
}

}  // namespace

TEST_CASE("field action examples") {
  const GroupPoint p({0.0}, {2.0}, 5.0);
  CHECK(apply_field(FieldId::X(1), fn::coordinate_x(1, 1), p) == 1.0);
  CHECK(apply_field(FieldId::X(1), fn::coordinate_z(1), p) == -1.0);
  CHECK(apply_field(FieldId::Xhat(1), fn::coordinate_z(1), p) == 1.0);
  const SmoothFunction bare("bare", 1, [](const GroupPoint& q) { return q.z(); });
  CHECK_THROWS_AS(apply_field(FieldId::X(1), bare, p), CapabilityError);
  CHECK(apply_field(FieldId::X(1), bare, p, FiniteDifference::Enabled) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("generator examples") {
  std::mt19937_64 rng(1);
  const auto p = random_point(rng, 2);
  CHECK(generator_apply(fn::coordinate_x(2, 1), p) == 0.0);
  CHECK(generator_apply(fn::lookup("z2", 1), GroupPoint({2.0}, {0.0}, 0.0)) == doctest::Approx(1.0));
  CHECK(generator_apply(fn::lookup("poly:x1^2", 2), p) == doctest::Approx(1.0));
  const SmoothFunction grad_only("g", 1, [](const GroupPoint& q) { return q.z() * q.z(); },
                                 [](const GroupPoint& q) { return std::vector<double>{0.0, 0.0, 2.0 * q.z()}; });
  CHECK_THROWS_AS(generator_apply(grad_only, p), CapabilityError);
  CHECK(generator_apply(grad_only, GroupPoint({2.0}, {0.0}, 0.0), FiniteDifference::Enabled) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("horizontal gradient examples") {
  const auto g = horizontal_gradient(fn::coordinate_z(1), GroupPoint({1.0}, {1.0}, 0.0));
  CHECK(g == std::vector<double>{-0.5, 0.5});
  CHECK(squared_norm(g) == 0.5);
  CHECK(squared_norm(horizontal_gradient(fn::constant(2, 3.0), GroupPoint(2))) == 0.0);
  CHECK(horizontal_gradient(fn::coordinate_x(2, 1), GroupPoint(2)) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("analytic gradients agree with central differences") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 2u}) {
    for (const auto& f : analytic_set(n)) {
      for (int rep = 0; rep < 10; ++rep) {
        const auto p = random_point(rng, n);
        const auto g = f.gradient(p);
        const auto fd = finite_difference_gradient(f, p);
        for (std::size_t k = 0; k < g.size(); ++k) CHECK(rel(g[k], fd[k]) <= 1e-5);
      }
    }
  }
}

TEST_CASE("bracket relations on functions with Hessians") {
  std::mt19937_64 rng(3);
  for (const auto& f : analytic_set(2)) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto p = random_point(rng, 2);
      const double zf = apply_field(FieldId::Z(), f, p);
      for (std::size_t i = 1; i <= 2; ++i) {
        for (std::size_t j = 1; j <= 2; ++j) {
          const double br = apply_field_pair(FieldId::X(i), FieldId::Y(j), f, p) -
                            apply_field_pair(FieldId::Y(j), FieldId::X(i), f, p);
          CHECK(rel(br, i == j ? zf : 0.0) <= 1e-8);
        }
        for (auto v : {FieldId::X(i), FieldId::Y(i)}) {
          const double br = apply_field_pair(v, FieldId::Z(), f, p) - apply_field_pair(FieldId::Z(), v, f, p);
          CHECK(std::abs(br) <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("left fields are left invariant, right fields right invariant") {
  std::mt19937_64 rng(4);
  for (const auto& f : analytic_set(2)) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto p = random_point(rng, 2), q = random_point(rng, 2);
      const auto lf = compose_left_translate(f, p);
      const auto rf = compose_right_translate(f, p);
      for (std::size_t i = 1; i <= 2; ++i) {
        CHECK(rel(apply_field(FieldId::X(i), lf, q), apply_field(FieldId::X(i), f, star(p, q))) <= 1e-10);
        CHECK(rel(apply_field(FieldId::Y(i), lf, q), apply_field(FieldId::Y(i), f, star(p, q))) <= 1e-10);
        CHECK(rel(apply_field(FieldId::Xhat(i), rf, q), apply_field(FieldId::Xhat(i), f, star(q, p))) <= 1e-10);
        CHECK(rel(apply_field(FieldId::Yhat(i), rf, q), apply_field(FieldId::Yhat(i), f, star(q, p))) <= 1e-10);
      }
      CHECK(rel(generator_apply(lf, q), generator_apply(f, star(p, q))) <= 1e-10);
    }
  }
}

TEST_CASE("mirror composition and the left-field intertwining") {
  std::mt19937_64 rng(5);
  for (const auto& f : analytic_set(2)) {
    const auto fa = compose_mirror(f);
    for (int rep = 0; rep < 5; ++rep) {
      const auto p = random_point(rng, 2);
      CHECK(fa(p) == f(mirror(p)));
      for (std::size_t i = 1; i <= 2; ++i) {
        CHECK(rel(apply_field(FieldId::X(i), f, mirror(p)), -apply_field(FieldId::X(i), fa, p)) <= 1e-10);
        CHECK(rel(apply_field(FieldId::Y(i), f, mirror(p)), -apply_field(FieldId::Y(i), fa, p)) <= 1e-10);
      }
      CHECK(rel(generator_apply(fa, p), generator_apply(f, mirror(p))) <= 1e-10);
    }
  }
}

TEST_CASE("registry lookup") {
  CHECK(fn::lookup("x1", 2)(GroupPoint({3.0, 4.0}, {0.0, 0.0}, 0.0)) == 3.0);
  CHECK(fn::lookup("y2", 2)(GroupPoint({0.0, 0.0}, {1.0, 5.0}, 0.0)) == 5.0);
  CHECK(fn::lookup("const:2.5", 1)(GroupPoint(1)) == 2.5);
  CHECK(fn::lookup("exp_linear:2", 1).unbounded());
  CHECK_FALSE(fn::lookup("gauss_bump", 1).unbounded());
  CHECK(fn::lookup("gauss_bump", 1)(GroupPoint(1)) == 1.0);
  CHECK_THROWS_AS(fn::lookup("nope", 1), UsageError);
  CHECK(fn::battery(1).size() == 6);
}
