#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace heis {

/// Point (x, y, z) of the Heisenberg group H_n = R^n x R^n x R.
///
/// Coordinates are stored contiguously as (x_1..x_n, y_1..y_n, z), the same
/// ordering used for gradients and polynomial variables.
class GroupPoint {
 public:
  /// Identity element of H_n.
  explicit GroupPoint(std::size_t n);
  GroupPoint(std::vector<double> x, std::vector<double> y, double z);

  /// Build from the packed layout (length 2n+1).
  static GroupPoint from_coordinates(std::span<const double> coords);

  std::size_t dim() const noexcept { return n_; }

  double x(std::size_t i) const { return c_[i]; }
  double y(std::size_t i) const { return c_[n_ + i]; }
  double z() const noexcept { return c_[2 * n_]; }

  std::span<const double> xs() const noexcept { return {c_.data(), n_}; }
  std::span<const double> ys() const noexcept { return {c_.data() + n_, n_}; }
  /// The horizontal block v = (x, y), length 2n.
  std::span<const double> horizontal() const noexcept { return {c_.data(), 2 * n_}; }
  std::span<const double> coordinates() const noexcept { return c_; }

  bool operator==(const GroupPoint&) const = default;

 private:
  std::size_t n_;
  std::vector<double> c_;
};

/// Symplectic form sum_i (x_i y'_i - x'_i y_i) on (x, y) blocks of length 2n.
double omega(std::span<const double> v, std::span<const double> v_prime);

/// Group law (v + v', z + z' + omega(v, v')/2).
GroupPoint star(const GroupPoint& p, const GroupPoint& q);

GroupPoint inverse(const GroupPoint& p);

/// The mirror isometry A(x, y, z) = (-x, -y, z). An automorphism and an involution.
GroupPoint mirror(const GroupPoint& p);

double max_abs_difference(const GroupPoint& p, const GroupPoint& q);

enum class FieldKind { X, Y, Z, Xhat, Yhat, Zhat };

/// One of the left (X_i, Y_i, Z) or right (Xhat_i, Yhat_i, Zhat) invariant
/// vector fields. The index is 1-based, matching X_1..X_n; it is ignored for
/// Z and Zhat.
struct FieldId {
  FieldKind kind;
  std::size_t index = 1;

  static FieldId X(std::size_t i) { return {FieldKind::X, i}; }
  static FieldId Y(std::size_t i) { return {FieldKind::Y, i}; }
  static FieldId Z() { return {FieldKind::Z, 1}; }
  static FieldId Xhat(std::size_t i) { return {FieldKind::Xhat, i}; }
  static FieldId Yhat(std::size_t i) { return {FieldKind::Yhat, i}; }
  static FieldId Zhat() { return {FieldKind::Zhat, 1}; }

  bool is_vertical() const noexcept { return kind == FieldKind::Z || kind == FieldKind::Zhat; }
  std::string name() const;

  bool operator==(const FieldId&) const = default;
};

/// Throws UsageError unless the index lies in 1..n (or the field is vertical).
void validate_field(const FieldId& field, std::size_t n);

/// Parses names such as "X_1", "Yhat_2", "Z".
FieldId parse_field(const std::string& name);

/// Coefficients a(p) of the field written as sum_k a_k(p) d_k, length 2n+1.
std::vector<double> field_coefficients(const FieldId& field, const GroupPoint& p);

/// Constant Jacobian d a_k / d coord_j of the field coefficients, row-major
/// (2n+1) x (2n+1) indexed [k][j]. All six fields have affine coefficients.
std::vector<double> field_coefficient_jacobian(const FieldId& field, std::size_t n);

}  // namespace heis
