#include "heis/group.hpp"

#include <algorithm>
#include <cmath>

#include "heis/error.hpp"

namespace heis {

namespace {

void require_finite(std::span<const double> c) {
  for (double v : c) {
    if (!std::isfinite(v)) throw UsageError("group point has a non-finite coordinate");
  }
}

void require_same_dim(const GroupPoint& p, const GroupPoint& q) {
  if (p.dim() != q.dim()) {
    throw UsageError("dimension mismatch: H_" + std::to_string(p.dim()) + " vs H_" +
                     std::to_string(q.dim()));
  }
}

}  // namespace

GroupPoint::GroupPoint(std::size_t n) : n_(n), c_(2 * n + 1, 0.0) {
  if (n == 0) throw UsageError("H_n requires n >= 1");
}

GroupPoint::GroupPoint(std::vector<double> x, std::vector<double> y, double z) : n_(x.size()) {
  if (n_ == 0) throw UsageError("H_n requires n >= 1");
  if (y.size() != n_) throw UsageError("x and y blocks differ in length");
  c_.reserve(2 * n_ + 1);
  c_.insert(c_.end(), x.begin(), x.end());
  c_.insert(c_.end(), y.begin(), y.end());
  c_.push_back(z);
  require_finite(c_);
}

GroupPoint GroupPoint::from_coordinates(std::span<const double> coords) {
  if (coords.size() < 3 || coords.size() % 2 == 0) {
    throw UsageError("packed coordinates must have odd length 2n+1 >= 3");
  }
  const std::size_t n = (coords.size() - 1) / 2;
  GroupPoint p(n);
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  require_finite(p.c_);
  return p;
}

double omega(std::span<const double> v, std::span<const double> v_prime) {
  if (v.size() != v_prime.size() || v.size() % 2 != 0 || v.empty()) {
    throw UsageError("omega needs two (x, y) vectors of equal even length");
  }
  const std::size_t n = v.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += v[i] * v_prime[n + i] - v_prime[i] * v[n + i];
  }
  return s;
}

GroupPoint star(const GroupPoint& p, const GroupPoint& q) {
  require_same_dim(p, q);
  const std::size_t n = p.dim();
  std::vector<double> c(2 * n + 1);
  for (std::size_t k = 0; k < 2 * n; ++k) c[k] = p.coordinates()[k] + q.coordinates()[k];
  c[2 * n] = p.z() + q.z() + 0.5 * omega(p.horizontal(), q.horizontal());
  return GroupPoint::from_coordinates(c);
}

GroupPoint inverse(const GroupPoint& p) {
  std::vector<double> c(p.coordinates().begin(), p.coordinates().end());
  for (double& v : c) v = -v;
  return GroupPoint::from_coordinates(c);
}

GroupPoint mirror(const GroupPoint& p) {
  std::vector<double> c(p.coordinates().begin(), p.coordinates().end());
  for (std::size_t k = 0; k < 2 * p.dim(); ++k) c[k] = -c[k];
  return GroupPoint::from_coordinates(c);
}

double max_abs_difference(const GroupPoint& p, const GroupPoint& q) {
  require_same_dim(p, q);
  double m = 0.0;
  for (std::size_t k = 0; k < p.coordinates().size(); ++k) {
    m = std::max(m, std::abs(p.coordinates()[k] - q.coordinates()[k]));
  }
  return m;
}

std::string FieldId::name() const {
  switch (kind) {
    case FieldKind::X: return "X_" + std::to_string(index);
    case FieldKind::Y: return "Y_" + std::to_string(index);
    case FieldKind::Z: return "Z";
    case FieldKind::Xhat: return "Xhat_" + std::to_string(index);
    case FieldKind::Yhat: return "Yhat_" + std::to_string(index);
    case FieldKind::Zhat: return "Zhat";
  }
  return "?";
}

void validate_field(const FieldId& field, std::size_t n) {
  if (field.is_vertical()) return;
  if (field.index < 1 || field.index > n) {
    throw UsageError("field " + field.name() + " out of range for H_" + std::to_string(n));
  }
}

FieldId parse_field(const std::string& name) {
  if (name == "Z") return FieldId::Z();
  if (name == "Zhat") return FieldId::Zhat();
  const auto us = name.find('_');
  if (us == std::string::npos) throw UsageError("unknown field name '" + name + "'");
  const std::string head = name.substr(0, us);
  std::size_t index = 0;
  try {
    index = static_cast<std::size_t>(std::stoul(name.substr(us + 1)));
  } catch (const std::exception&) {
    throw UsageError("bad field index in '" + name + "'");
  }
  if (head == "X") return FieldId::X(index);
  if (head == "Y") return FieldId::Y(index);
  if (head == "Xhat") return FieldId::Xhat(index);
  if (head == "Yhat") return FieldId::Yhat(index);
  throw UsageError("unknown field name '" + name + "'");
}

std::vector<double> field_coefficients(const FieldId& field, const GroupPoint& p) {
  const std::size_t n = p.dim();
  validate_field(field, n);
  std::vector<double> a(2 * n + 1, 0.0);
  const std::size_t i = field.index - 1;
  const std::size_t zc = 2 * n;
  switch (field.kind) {
    case FieldKind::X:
      a[i] = 1.0;
      a[zc] = -0.5 * p.y(i);
      break;
    case FieldKind::Y:
      a[n + i] = 1.0;
      a[zc] = 0.5 * p.x(i);
      break;
    case FieldKind::Xhat:
      a[i] = 1.0;
      a[zc] = 0.5 * p.y(i);
      break;
    case FieldKind::Yhat:
      a[n + i] = 1.0;
      a[zc] = -0.5 * p.x(i);
      break;
    case FieldKind::Z:
    case FieldKind::Zhat:
      a[zc] = 1.0;
      break;
  }
  return a;
}

std::vector<double> field_coefficient_jacobian(const FieldId& field, std::size_t n) {
  validate_field(field, n);
  const std::size_t d = 2 * n + 1;
  std::vector<double> jac(d * d, 0.0);
  const std::size_t i = field.index - 1;
  const std::size_t zrow = (d - 1) * d;
  switch (field.kind) {
    case FieldKind::X: jac[zrow + n + i] = -0.5; break;
    case FieldKind::Y: jac[zrow + i] = 0.5; break;
    case FieldKind::Xhat: jac[zrow + n + i] = 0.5; break;
    case FieldKind::Yhat: jac[zrow + i] = -0.5; break;
    case FieldKind::Z:
    case FieldKind::Zhat: break;
  }
  return jac;
}

}  // namespace heis
