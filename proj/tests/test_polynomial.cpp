#include "doctest.h"

#include <cmath>
#include <random>

#include "heis/error.hpp"
#include "heis/polynomial.hpp"

using namespace heis;

namespace {

using P = HPolynomial;

bool is_zero(const P& p) { return p.is_zero(); }

std::vector<FieldId> fields(std::size_t n) {
  std::vector<FieldId> out;
  for (std::size_t i = 1; i <= n; ++i) {
    for (auto f : {FieldId::X(i), FieldId::Y(i), FieldId::Xhat(i), FieldId::Yhat(i)}) out.push_back(f);
  }
  return out;
}

GroupPoint random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<double> c(2 * n + 1);
  for (auto& v : c) v = u(rng);
  return GroupPoint::from_coordinates(c);
}

}  // namespace

TEST_CASE("weights and pruning") {
  const P z = P::z(2);
  CHECK(z.weight() == 2);
  CHECK((P::x(2, 0) * P::y(2, 1) * z).weight() == 4);
  CHECK(P(1).weight() == -1);
  P q = P::x(1, 0) + P::constant(1, 1e-20);
  q.prune();
  CHECK(q == P::x(1, 0));
}

TEST_CASE("field images of coordinates") {
  CHECK(poly_apply_field(FieldId::X(1), P::x(1, 0)) == P::constant(1, 1.0));
  CHECK(poly_apply_field(FieldId::X(1), P::z(1)) == P::y(1, 0) * -0.5);
  CHECK(poly_apply_field(FieldId::Xhat(1), P::z(1)) == P::y(1, 0) * 0.5);
  CHECK(poly_apply_field(FieldId::Y(1), P::z(1)) == P::x(1, 0) * 0.5);
  CHECK(poly_apply_field(FieldId::Yhat(1), P::z(1)) == P::x(1, 0) * -0.5);
}

TEST_CASE("generator examples") {
  CHECK(is_zero(poly_generator(P::x(1, 0))));
  const P z2 = P::z(1) * P::z(1);
  const P quarter = (P::x(1, 0) * P::x(1, 0) + P::y(1, 0) * P::y(1, 0)) * 0.25;
  CHECK(approx_equal(poly_generator(z2), quarter, 1e-15));
  CHECK(poly_generator(P::x(1, 0) * P::x(1, 0)) == P::constant(1, 1.0));
}

TEST_CASE("generator lowers weight by two and is nilpotent") {
  for (std::size_t n : {1u, 2u, 3u}) {
    for (const auto& m : monomial_basis(n, 8)) {
      const int w = m.weight();
      P cur = m;
      for (int k = 0; k <= w / 2; ++k) {
        const P next = poly_generator(cur);
        if (!next.is_zero()) CHECK(next.weight() <= cur.weight() - 2);
        cur = next;
      }
      CHECK(cur.is_zero());
    }
  }
}

TEST_CASE("heat semigroup examples") {
  const GroupPoint o(1);
  CHECK(heat_semigroup(P::x(1, 0), 3.0) == P::x(1, 0));
  CHECK(poly_eval(heat_semigroup(P::z(1) * P::z(1), 1.0), o) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(poly_eval(heat_semigroup(P::x(1, 0) * P::x(1, 0), 1.0), o) == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t n : {1u, 2u, 3u}) {
    const P z2 = P::z(n) * P::z(n);
    CHECK(poly_eval(heat_semigroup(z2, 2.0), GroupPoint(n)) == doctest::Approx(n * 4.0 / 4.0));
  }
  CHECK_THROWS_AS(heat_semigroup(P::z(1), -0.1), UsageError);
}

TEST_CASE("semigroup law, generator consistency and mirror commutation") {
  for (const auto& m : monomial_basis(2, 6)) {
    for (double s : {0.3, 1.0}) {
      for (double t : {0.5, 2.0}) {
        CHECK(relative_difference(heat_semigroup(heat_semigroup(m, s), t), heat_semigroup(m, s + t)) <= 1e-12);
      }
    }
    for (double t : {0.5, 1.0, 2.0}) {
      CHECK(relative_difference(poly_mirror(heat_semigroup(m, t)), heat_semigroup(poly_mirror(m), t)) <= 1e-12);
    }
  }
  // (Q_h P - P)/h - LP = O(h): halving h halves the error.
  const P p = P::z(1) * P::z(1) * P::x(1, 0);
  const P lp = poly_generator(p);
  double prev = 0.0;
  for (double h : {1e-1, 5e-2, 2.5e-2}) {
    const double err = relative_difference((heat_semigroup(p, h) - p) * (1.0 / h), lp);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("right fields commute with the generator") {
  for (std::size_t n : {1u, 2u}) {
    for (const auto& m : monomial_basis(n, 8)) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (auto f : {FieldId::Xhat(i), FieldId::Yhat(i)}) {
          CHECK(relative_difference(poly_generator(poly_apply_field(f, m)), poly_apply_field(f, poly_generator(m))) <=
                1e-12);
        }
      }
    }
  }
}

TEST_CASE("bracket relations") {
  for (std::size_t n : {1u, 2u}) {
    for (const auto& m : monomial_basis(n, 6)) {
      const P zm = poly_apply_field(FieldId::Z(), m);
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
          const P br = poly_apply_field(FieldId::X(i), poly_apply_field(FieldId::Y(j), m)) -
                       poly_apply_field(FieldId::Y(j), poly_apply_field(FieldId::X(i), m));
          CHECK(relative_difference(br, i == j ? zm : P(n)) <= 1e-14);
        }
        for (auto f : {FieldId::X(i), FieldId::Y(i)}) {
          const P br = poly_apply_field(f, zm) - poly_apply_field(FieldId::Z(), poly_apply_field(f, m));
          CHECK(br.is_zero());
        }
      }
    }
  }
}

TEST_CASE("mirror substitution") {
  CHECK(poly_mirror(P::z(1)) == P::z(1));
  const P xz = P::x(1, 0) * P::z(1);
  CHECK(poly_mirror(xz) == xz * -1.0);
  const P xyz = P::x(1, 0) * P::y(1, 0) * P::z(1);
  CHECK(poly_mirror(xyz) == xyz);
  CHECK(poly_mirror(poly_mirror(xz)) == xz);
}

TEST_CASE("translations follow the group law") {
  const GroupPoint p({1.0}, {0.0}, 0.0);
  CHECK(poly_left_translate(P::z(1), GroupPoint(1)) == P::z(1));
  CHECK(poly_left_translate(P::z(1), p) == P::z(1) + P::y(1, 0) * 0.5);
  CHECK(poly_left_translate(P::x(1, 0), p) == P::x(1, 0) + P::constant(1, 1.0));
  CHECK_THROWS_AS(poly_left_translate(P::z(1), GroupPoint(2)), UsageError);

  std::mt19937_64 rng(3);
  for (const auto& m : monomial_basis(2, 6)) {
    const auto a = random_point(rng, 2), q = random_point(rng, 2);
    CHECK(poly_eval(poly_left_translate(m, a), q) == doctest::Approx(poly_eval(m, star(a, q))).epsilon(1e-12));
    CHECK(poly_eval(poly_right_translate(m, a), q) == doctest::Approx(poly_eval(m, star(q, a))).epsilon(1e-12));
    CHECK(relative_difference(heat_semigroup(poly_left_translate(m, a), 0.7),
                              poly_left_translate(heat_semigroup(m, 0.7), a)) <= 1e-12);
  }
}

TEST_CASE("evaluation examples") {
  CHECK(poly_eval(P(1), GroupPoint({3.0}, {1.0}, 2.0)) == 0.0);
  CHECK(poly_eval(P::z(1) + P::y(1, 0) * 0.5, GroupPoint({0.0}, {2.0}, 5.0)) == 6.0);
  const P q = (P::x(1, 0) * P::x(1, 0) + P::y(1, 0) * P::y(1, 0)) * 0.25;
  CHECK(poly_eval(q, GroupPoint({2.0}, {0.0}, 0.0)) == 1.0);
  CHECK_THROWS_AS(poly_eval(q, GroupPoint(2)), UsageError);
}

TEST_CASE("batch evaluation agrees with pointwise evaluation") {
  std::mt19937_64 rng(5);
  const P m = parse_polynomial("0.5*x1^2*z - 2*y2*z^2 + x1*y1*x2 + 3", 2);
  constexpr std::size_t count = 37;
  std::vector<double> coords(5 * count);
  std::vector<GroupPoint> pts;
  for (std::size_t j = 0; j < count; ++j) {
    pts.push_back(random_point(rng, 2));
    for (std::size_t v = 0; v < 5; ++v) coords[v * count + j] = pts.back().coordinates()[v];
  }
  std::vector<double> out(count);
  poly_eval_batch(m, coords.data(), count, count, out.data());
  for (std::size_t j = 0; j < count; ++j) CHECK(out[j] == doctest::Approx(poly_eval(m, pts[j])).epsilon(1e-14));
}

TEST_CASE("series plans evaluate Q_s P for any s") {
  const P m = parse_polynomial("z^2*x1 + y1^3", 1);
  const SemigroupSeries series(m);
  const SeriesPlan plan(series);
  std::vector<double> coords{0.4, -0.3, 1.1}, out(1), scratch(1);
  for (double s : {0.0, 0.25, 1.7}) {
    plan.eval(s, coords.data(), 1, 1, out.data(), scratch.data());
    CHECK(out[0] == doctest::Approx(poly_eval(heat_semigroup(m, s), GroupPoint({0.4}, {-0.3}, 1.1))).epsilon(1e-13));
  }
}

TEST_CASE("parser") {
  CHECK(parse_polynomial("x1*y1", 1) == P::x(1, 0) * P::y(1, 0));
  CHECK(parse_polynomial("z^2", 1) == P::z(1) * P::z(1));
  CHECK(parse_polynomial("0.5 + 0.5*x1^2", 1) == P::constant(1, 0.5) + P::x(1, 0) * P::x(1, 0) * 0.5);
  CHECK(parse_polynomial("x - y", 1) == P::x(1, 0) - P::y(1, 0));
  CHECK_THROWS_AS(parse_polynomial("x3", 2), UsageError);
  CHECK_THROWS_AS(parse_polynomial("x1 +* y1", 1), UsageError);
}

TEST_CASE("intertwining of left fields with the mirror, as stated") {
  // mirror(X_i P) + Xhat_i(mirror P) = 0 holds only for P with no z-dependence
  // in the relevant terms; the left-field form mirror(X_i P) + X_i(mirror P) = 0
  // is the identity that actually holds.
  for (const auto& m : monomial_basis(1, 6)) {
    for (auto [left, right] : {std::pair{FieldId::X(1), FieldId::Xhat(1)}, std::pair{FieldId::Y(1), FieldId::Yhat(1)}}) {
      (void)right;
      const P sum = poly_mirror(poly_apply_field(left, m)) + poly_apply_field(left, poly_mirror(m));
      CHECK(sum.is_zero());
    }
  }
  const P z = P::z(1);
  const P stated = poly_mirror(poly_apply_field(FieldId::X(1), z)) + poly_apply_field(FieldId::Xhat(1), poly_mirror(z));
  CHECK_FALSE(stated.is_zero());
}

TEST_CASE("field images never raise the weight") {
  for (const auto& m : monomial_basis(2, 8)) {
    for (const auto& f : fields(2)) {
      const P img = poly_apply_field(f, m);
      CHECK(img.weight() <= m.weight() - 1);
    }
  }
}
