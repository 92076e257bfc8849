#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/kernels.hpp"

namespace heis {

/// Sparse polynomial in x_1..x_n, y_1..y_n, z with real coefficients.
///
/// Variables are indexed like GroupPoint coordinates: 0..n-1 are x, n..2n-1
/// are y and 2n is z. The Heisenberg weight of x^a y^b z^c is
/// sum a + sum b + 2c; under that grading every left or right invariant field
/// lowers weight by one and the generator by two.
class HPolynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, double>;

  static constexpr double kPruneRelative = 1e-14;

  explicit HPolynomial(std::size_t n);

  static HPolynomial constant(std::size_t n, double c);
  static HPolynomial variable(std::size_t n, std::size_t var);
  static HPolynomial x(std::size_t n, std::size_t i) { return variable(n, i); }
  static HPolynomial y(std::size_t n, std::size_t i) { return variable(n, n + i); }
  static HPolynomial z(std::size_t n) { return variable(n, 2 * n); }
  static HPolynomial monomial(std::size_t n, const Exponents& e, double c = 1.0);

  std::size_t dim() const noexcept { return n_; }
  std::size_t n_vars() const noexcept { return 2 * n_ + 1; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Heisenberg weight of the heaviest stored monomial; -1 for the zero polynomial.
  int weight() const;
  double coefficient(const Exponents& e) const;
  double max_abs_coefficient() const;

  /// Adds c to the coefficient of e (no pruning).
  void add_term(const Exponents& e, double c);
  /// Drops coefficients with |c| <= rel * max|c| (and exact zeros).
  HPolynomial& prune(double rel = kPruneRelative);

  HPolynomial& operator+=(const HPolynomial& o);
  HPolynomial& operator-=(const HPolynomial& o);
  HPolynomial& operator*=(double s);
  friend HPolynomial operator+(HPolynomial a, const HPolynomial& b) { return a += b; }
  friend HPolynomial operator-(HPolynomial a, const HPolynomial& b) { return a -= b; }
  friend HPolynomial operator*(HPolynomial a, double s) { return a *= s; }
  friend HPolynomial operator*(double s, HPolynomial a) { return a *= s; }
  friend HPolynomial operator*(const HPolynomial& a, const HPolynomial& b);

  HPolynomial derivative(std::size_t var) const;
  HPolynomial times_variable(std::size_t var) const;

  /// Flattened form for the evaluation kernels (terms in map order).
  kernels::PolyPlan make_plan() const;

  std::string to_string() const;

  bool operator==(const HPolynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

 private:
  void check_same_dim(const HPolynomial& o) const;

  std::size_t n_;
  Terms terms_;
};

int monomial_weight(const HPolynomial::Exponents& e, std::size_t n);

/// All monomials x^a y^b z^c of H_n with weight <= max_weight (constant included).
std::vector<HPolynomial> monomial_basis(std::size_t n, int max_weight);

/// max |coefficient of a - b| <= rel * max(1, scale(a), scale(b)).
bool approx_equal(const HPolynomial& a, const HPolynomial& b, double rel);
/// max |coefficient| of a - b divided by max(1, scale(a), scale(b)).
double relative_difference(const HPolynomial& a, const HPolynomial& b);

HPolynomial poly_apply_field(const FieldId& field, const HPolynomial& p);

/// L P = 1/2 sum_i (X_i^2 + Y_i^2) P.
HPolynomial poly_generator(const HPolynomial& p);

/// The finite Taylor series of e^{tL}: term k is L^k P / k!.
class SemigroupSeries {
 public:
  explicit SemigroupSeries(const HPolynomial& p);

  const std::vector<HPolynomial>& terms() const noexcept { return terms_; }
  std::size_t dim() const noexcept { return terms_.front().dim(); }

  /// Q_t P as a polynomial.
  HPolynomial at(double t) const;

 private:
  std::vector<HPolynomial> terms_;
};

/// Compiled SemigroupSeries: evaluates Q_s P at many points for any s by
/// Horner's rule in s over the precompiled terms.
class SeriesPlan {
 public:
  SeriesPlan() = default;
  explicit SeriesPlan(const SemigroupSeries& series);
  /// Terms c_k, evaluated as sum_k s^k c_k.
  explicit SeriesPlan(const std::vector<HPolynomial>& terms);

  /// out[j] = (Q_s P)(point j); scratch must hold `count` doubles.
  void eval(double s, const double* coords, std::size_t stride, std::size_t count, double* out,
            double* scratch) const;

  std::size_t order() const noexcept { return terms_.size(); }

 private:
  std::vector<kernels::PolyPlan> terms_;
};

/// Q_t P = sum_{k <= weight/2} t^k L^k P / k!. Throws UsageError for t < 0.
HPolynomial heat_semigroup(const HPolynomial& p, double t);

/// P o A: x -> -x, y -> -y, z -> z.
HPolynomial poly_mirror(const HPolynomial& p);

/// q -> P(p * q).
HPolynomial poly_left_translate(const HPolynomial& poly, const GroupPoint& p);
/// q -> P(q * p).
HPolynomial poly_right_translate(const HPolynomial& poly, const GroupPoint& p);

double poly_eval(const HPolynomial& poly, const GroupPoint& p);
double poly_eval(const kernels::PolyPlan& plan, const GroupPoint& p);

/// Evaluates at `count` points stored variable-major (coords[v*stride + j]).
void poly_eval_batch(const HPolynomial& poly, const double* coords, std::size_t stride,
                     std::size_t count, double* out);

/// Parses expressions like "z^2", "x1*y1", "0.5 + 0.5*x1^2", "x1 z - 2 y2".
HPolynomial parse_polynomial(const std::string& text, std::size_t n);

}  // namespace heis
