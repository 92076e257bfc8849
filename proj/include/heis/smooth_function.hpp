#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/polynomial.hpp"

namespace heis {

/// Dense symmetric (2n+1) x (2n+1) matrix of second partials, row-major.
struct Hessian {
  std::size_t size = 0;
  std::vector<double> a;

  explicit Hessian(std::size_t d = 0) : size(d), a(d * d, 0.0) {}
  double operator()(std::size_t i, std::size_t j) const { return a[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a[i * size + j]; }
};

enum class FiniteDifference { Disabled, Enabled };

/// A differentiable test function on H_n with optional analytic derivatives.
///
/// Gradients are ordered (d/dx_1..d/dx_n, d/dy_1..d/dy_n, d/dz). When a
/// derivative is missing the caller may opt into central differences with step
/// h = eps^{1/3} * max(1, |coordinate|).
class SmoothFunction {
 public:
  using ValueFn = std::function<double(const GroupPoint&)>;
  using GradientFn = std::function<std::vector<double>(const GroupPoint&)>;
  using HessianFn = std::function<Hessian(const GroupPoint&)>;

  SmoothFunction(std::string name, std::size_t n, ValueFn value, GradientFn gradient = {},
                 HessianFn hessian = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return n_; }
  bool has_gradient() const noexcept { return static_cast<bool>(gradient_); }
  bool has_hessian() const noexcept { return static_cast<bool>(hessian_); }

  /// Set when the function is known to violate the bounded-derivative
  /// hypotheses of the functional inequalities (e.g. exponentials).
  bool unbounded() const noexcept { return unbounded_; }
  SmoothFunction& mark_unbounded(bool v = true) {
    unbounded_ = v;
    return *this;
  }

  double operator()(const GroupPoint& p) const;
  std::vector<double> gradient(const GroupPoint& p,
                               FiniteDifference fd = FiniteDifference::Disabled) const;
  Hessian hessian(const GroupPoint& p, FiniteDifference fd = FiniteDifference::Disabled) const;

 private:
  void check_point(const GroupPoint& p) const;

  std::string name_;
  std::size_t n_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  bool unbounded_ = false;
};

/// Central-difference gradient of the value alone.
std::vector<double> finite_difference_gradient(const SmoothFunction& f, const GroupPoint& p);

/// First-order action of an invariant field: sum_k a_k(p) d_k f(p).
double apply_field(const FieldId& field, const SmoothFunction& f, const GroupPoint& p,
                   FiniteDifference fd = FiniteDifference::Disabled);

/// Second-order action V(W f)(p) = sum a^V_k a^W_l d_kl f + sum a^V_k (d_k a^W_l) d_l f.
double apply_field_pair(const FieldId& outer, const FieldId& inner, const SmoothFunction& f,
                        const GroupPoint& p, FiniteDifference fd = FiniteDifference::Disabled);

/// (L f)(p) with L = 1/2 sum_i (X_i^2 + Y_i^2). Needs a Hessian unless fd is enabled.
double generator_apply(const SmoothFunction& f, const GroupPoint& p,
                       FiniteDifference fd = FiniteDifference::Disabled);

/// (X_1 f, ..., X_n f, Y_1 f, ..., Y_n f) at p.
std::vector<double> horizontal_gradient(const SmoothFunction& f, const GroupPoint& p);

double squared_norm(const std::vector<double>& v);

/// f o A with gradients and Hessians propagated through the constant Jacobian of A.
SmoothFunction compose_mirror(const SmoothFunction& f);
/// q -> f(p * q).
SmoothFunction compose_left_translate(const SmoothFunction& f, const GroupPoint& p);
/// q -> f(q * p).
SmoothFunction compose_right_translate(const SmoothFunction& f, const GroupPoint& p);

/// c * f, used for scale-equivariance checks.
SmoothFunction scaled(const SmoothFunction& f, double c);

namespace functions {

SmoothFunction constant(std::size_t n, double c);
SmoothFunction coordinate_x(std::size_t n, std::size_t i);  // 1-based
SmoothFunction coordinate_y(std::size_t n, std::size_t i);
SmoothFunction coordinate_z(std::size_t n);
/// Polynomial with exact polynomial derivatives.
SmoothFunction from_polynomial(const HPolynomial& p, std::string name);
/// exp(-|x|^2 - |y|^2 - z^2).
SmoothFunction gauss_bump(std::size_t n);
/// exp(lambda x_1 / 2).
SmoothFunction exp_linear(std::size_t n, double lambda);

/// Named functions: "x1", "y2", "z", "z2", "x1y1", "x1z", "gauss_bump",
/// "exp_linear:<lambda>", "const:<c>", or any polynomial expression accepted by
/// parse_polynomial prefixed with "poly:".
SmoothFunction lookup(const std::string& name, std::size_t n);

/// The inequality battery {x1, y1, z, z2, x1y1, gauss_bump}.
std::vector<SmoothFunction> battery(std::size_t n);

}  // namespace functions

}  // namespace heis
