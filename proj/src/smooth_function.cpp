#include "heis/smooth_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "heis/error.hpp"

namespace heis {

namespace {

double fd_step(double coordinate) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(coordinate));
}

GroupPoint shifted(const GroupPoint& p, std::size_t k, double h) {
  std::vector<double> c(p.coordinates().begin(), p.coordinates().end());
  c[k] += h;
  return GroupPoint::from_coordinates(c);
}

}  // namespace

SmoothFunction::SmoothFunction(std::string name, std::size_t n, ValueFn value, GradientFn gradient,
                               HessianFn hessian)
    : name_(std::move(name)),
      n_(n),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (n == 0) throw UsageError("H_n requires n >= 1");
  if (!value_) throw UsageError("smooth function '" + name_ + "' has no value map");
}

void SmoothFunction::check_point(const GroupPoint& p) const {
  if (p.dim() != n_) {
    throw UsageError("function '" + name_ + "' lives on H_" + std::to_string(n_) +
                     ", point on H_" + std::to_string(p.dim()));
  }
}

double SmoothFunction::operator()(const GroupPoint& p) const {
  check_point(p);
  return value_(p);
}

std::vector<double> SmoothFunction::gradient(const GroupPoint& p, FiniteDifference fd) const {
  check_point(p);
  if (gradient_) return gradient_(p);
  if (fd == FiniteDifference::Disabled) {
    throw CapabilityError("function '" + name_ + "' has no gradient");
  }
  return finite_difference_gradient(*this, p);
}

Hessian SmoothFunction::hessian(const GroupPoint& p, FiniteDifference fd) const {
  check_point(p);
  if (hessian_) return hessian_(p);
  if (fd == FiniteDifference::Disabled) {
    throw CapabilityError("function '" + name_ + "' has no Hessian");
  }
  const std::size_t d = 2 * n_ + 1;
  Hessian h(d);
  if (gradient_) {
    for (std::size_t k = 0; k < d; ++k) {
      const double step = fd_step(p.coordinates()[k]);
      const auto gp = gradient_(shifted(p, k, step));
      const auto gm = gradient_(shifted(p, k, -step));
      for (std::size_t l = 0; l < d; ++l) h(l, k) = (gp[l] - gm[l]) / (2.0 * step);
    }
  } else {
    static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    const double f0 = value_(p);
    for (std::size_t k = 0; k < d; ++k) {
      const double hk = base * std::max(1.0, std::abs(p.coordinates()[k]));
      for (std::size_t l = k; l < d; ++l) {
        const double hl = base * std::max(1.0, std::abs(p.coordinates()[l]));
        double v;
        if (k == l) {
          v = (value_(shifted(p, k, hk)) - 2.0 * f0 + value_(shifted(p, k, -hk))) / (hk * hk);
        } else {
          auto q = [&](double sk, double sl) { return value_(shifted(shifted(p, k, sk * hk), l, sl * hl)); };
          v = (q(1, 1) - q(1, -1) - q(-1, 1) + q(-1, -1)) / (4.0 * hk * hl);
        }
        h(k, l) = v;
        h(l, k) = v;
      }
    }
    return h;
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l) {
      const double s = 0.5 * (h(k, l) + h(l, k));
      h(k, l) = s;
      h(l, k) = s;
    }
  }
  return h;
}

std::vector<double> finite_difference_gradient(const SmoothFunction& f, const GroupPoint& p) {
  const std::size_t d = p.coordinates().size();
  std::vector<double> g(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double step = fd_step(p.coordinates()[k]);
    g[k] = (f(shifted(p, k, step)) - f(shifted(p, k, -step))) / (2.0 * step);
  }
  return g;
}

double apply_field(const FieldId& field, const SmoothFunction& f, const GroupPoint& p,
                   FiniteDifference fd) {
  const auto a = field_coefficients(field, p);
  const auto g = f.gradient(p, fd);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * g[k];
  return s;
}

double apply_field_pair(const FieldId& outer, const FieldId& inner, const SmoothFunction& f,
                        const GroupPoint& p, FiniteDifference fd) {
  const std::size_t d = p.coordinates().size();
  const auto av = field_coefficients(outer, p);
  const auto aw = field_coefficients(inner, p);
  const auto jw = field_coefficient_jacobian(inner, p.dim());
  const Hessian h = f.hessian(p, fd);
  const auto g = f.gradient(p, fd == FiniteDifference::Enabled ? fd : FiniteDifference::Disabled);
  double second = 0.0;
  double first = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    if (av[k] == 0.0) continue;
    for (std::size_t l = 0; l < d; ++l) {
      second += av[k] * aw[l] * h(k, l);
      first += av[k] * jw[l * d + k] * g[l];
    }
  }
  return second + first;
}

double generator_apply(const SmoothFunction& f, const GroupPoint& p, FiniteDifference fd) {
  if (!f.has_hessian() && fd == FiniteDifference::Disabled) {
    throw CapabilityError("generator needs a Hessian for '" + f.name() + "'");
  }
  double s = 0.0;
  for (std::size_t i = 1; i <= p.dim(); ++i) {
    s += apply_field_pair(FieldId::X(i), FieldId::X(i), f, p, fd);
    s += apply_field_pair(FieldId::Y(i), FieldId::Y(i), f, p, fd);
  }
  return 0.5 * s;
}

std::vector<double> horizontal_gradient(const SmoothFunction& f, const GroupPoint& p) {
  const std::size_t n = p.dim();
  const auto g = f.gradient(p);
  std::vector<double> out(2 * n);
  const double gz = g[2 * n];
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = g[i] - 0.5 * p.y(i) * gz;
    out[n + i] = g[n + i] + 0.5 * p.x(i) * gz;
  }
  return out;
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

namespace {

// f o T for an affine map T with constant Jacobian jac (row-major, [image][source]).
SmoothFunction compose_affine(const SmoothFunction& f, std::string name,
                              std::function<GroupPoint(const GroupPoint&)> map,
                              std::vector<double> jac) {
  const std::size_t n = f.dim();
  const std::size_t d = 2 * n + 1;
  auto value = [f, map](const GroupPoint& q) { return f(map(q)); };
  SmoothFunction::GradientFn grad;
  SmoothFunction::HessianFn hess;
  if (f.has_gradient()) {
    grad = [f, map, jac, d](const GroupPoint& q) {
      const auto g = f.gradient(map(q));
      std::vector<double> out(d, 0.0);
      for (std::size_t s = 0; s < d; ++s) {
        for (std::size_t i = 0; i < d; ++i) out[s] += jac[i * d + s] * g[i];
      }
      return out;
    };
  }
  if (f.has_hessian()) {
    hess = [f, map, jac, d](const GroupPoint& q) {
      const Hessian h = f.hessian(map(q));
      Hessian tmp(d), out(d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t s = 0; s < d; ++s) {
          double v = 0.0;
          for (std::size_t j = 0; j < d; ++j) v += h(i, j) * jac[j * d + s];
          tmp(i, s) = v;
        }
      }
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t s = 0; s < d; ++s) {
          double v = 0.0;
          for (std::size_t i = 0; i < d; ++i) v += jac[i * d + r] * tmp(i, s);
          out(r, s) = v;
        }
      }
      return out;
    };
  }
  SmoothFunction out(std::move(name), n, value, grad, hess);
  out.mark_unbounded(f.unbounded());
  return out;
}

std::vector<double> identity_matrix(std::size_t d) {
  std::vector<double> m(d * d, 0.0);
  for (std::size_t k = 0; k < d; ++k) m[k * d + k] = 1.0;
  return m;
}

}  // namespace

SmoothFunction compose_mirror(const SmoothFunction& f) {
  const std::size_t n = f.dim();
  const std::size_t d = 2 * n + 1;
  auto jac = identity_matrix(d);
  for (std::size_t k = 0; k < 2 * n; ++k) jac[k * d + k] = -1.0;
  return compose_affine(f, "mirror(" + f.name() + ")", [](const GroupPoint& q) { return mirror(q); }, jac);
}

SmoothFunction compose_left_translate(const SmoothFunction& f, const GroupPoint& p) {
  const std::size_t n = f.dim();
  if (p.dim() != n) throw UsageError("dimension mismatch in left translation");
  const std::size_t d = 2 * n + 1;
  auto jac = identity_matrix(d);
  for (std::size_t i = 0; i < n; ++i) {
    jac[(d - 1) * d + i] = -0.5 * p.y(i);
    jac[(d - 1) * d + n + i] = 0.5 * p.x(i);
  }
  return compose_affine(f, "left(" + f.name() + ")", [p](const GroupPoint& q) { return star(p, q); }, jac);
}

SmoothFunction compose_right_translate(const SmoothFunction& f, const GroupPoint& p) {
  const std::size_t n = f.dim();
  if (p.dim() != n) throw UsageError("dimension mismatch in right translation");
  const std::size_t d = 2 * n + 1;
  auto jac = identity_matrix(d);
  for (std::size_t i = 0; i < n; ++i) {
    jac[(d - 1) * d + i] = 0.5 * p.y(i);
    jac[(d - 1) * d + n + i] = -0.5 * p.x(i);
  }
  return compose_affine(f, "right(" + f.name() + ")", [p](const GroupPoint& q) { return star(q, p); }, jac);
}

SmoothFunction scaled(const SmoothFunction& f, double c) {
  SmoothFunction::GradientFn grad;
  SmoothFunction::HessianFn hess;
  if (f.has_gradient()) {
    grad = [f, c](const GroupPoint& p) {
      auto g = f.gradient(p);
      for (double& v : g) v *= c;
      return g;
    };
  }
  if (f.has_hessian()) {
    hess = [f, c](const GroupPoint& p) {
      auto h = f.hessian(p);
      for (double& v : h.a) v *= c;
      return h;
    };
  }
  SmoothFunction out(f.name(), f.dim(), [f, c](const GroupPoint& p) { return c * f(p); }, grad, hess);
  out.mark_unbounded(f.unbounded());
  return out;
}

namespace functions {

SmoothFunction constant(std::size_t n, double c) {
  return from_polynomial(HPolynomial::constant(n, c), "const");
}

SmoothFunction coordinate_x(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) throw UsageError("coordinate index out of range");
  return from_polynomial(HPolynomial::x(n, i - 1), "x" + std::to_string(i));
}

SmoothFunction coordinate_y(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) throw UsageError("coordinate index out of range");
  return from_polynomial(HPolynomial::y(n, i - 1), "y" + std::to_string(i));
}

SmoothFunction coordinate_z(std::size_t n) { return from_polynomial(HPolynomial::z(n), "z"); }

SmoothFunction from_polynomial(const HPolynomial& p, std::string name) {
  struct Derivatives {
    kernels::PolyPlan value;
    std::vector<kernels::PolyPlan> first;
    std::vector<kernels::PolyPlan> second;  // row-major, symmetric
  };
  const std::size_t d = p.n_vars();
  auto data = std::make_shared<Derivatives>();
  data->value = p.make_plan();
  std::vector<HPolynomial> first;
  for (std::size_t k = 0; k < d; ++k) {
    first.push_back(p.derivative(k));
    data->first.push_back(first.back().make_plan());
  }
  data->second.resize(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) data->second[k * d + l] = first[k].derivative(l).make_plan();
  }
  auto value = [data](const GroupPoint& q) { return poly_eval(data->value, q); };
  auto grad = [data, d](const GroupPoint& q) {
    std::vector<double> g(d);
    for (std::size_t k = 0; k < d; ++k) g[k] = poly_eval(data->first[k], q);
    return g;
  };
  auto hess = [data, d](const GroupPoint& q) {
    Hessian h(d);
    for (std::size_t k = 0; k < d * d; ++k) h.a[k] = poly_eval(data->second[k], q);
    return h;
  };
  return SmoothFunction(std::move(name), p.dim(), value, grad, hess);
}

SmoothFunction gauss_bump(std::size_t n) {
  const std::size_t d = 2 * n + 1;
  auto value = [](const GroupPoint& p) {
    double r = 0.0;
    for (double c : p.coordinates()) r += c * c;
    return std::exp(-r);
  };
  auto grad = [value](const GroupPoint& p) {
    const double g = value(p);
    std::vector<double> out;
    for (double c : p.coordinates()) out.push_back(-2.0 * c * g);
    return out;
  };
  auto hess = [value, d](const GroupPoint& p) {
    const double g = value(p);
    const auto c = p.coordinates();
    Hessian h(d);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t l = 0; l < d; ++l) {
        h(k, l) = g * (4.0 * c[k] * c[l] - (k == l ? 2.0 : 0.0));
      }
    }
    return h;
  };
  return SmoothFunction("gauss_bump", n, value, grad, hess);
}

SmoothFunction exp_linear(std::size_t n, double lambda) {
  const std::size_t d = 2 * n + 1;
  const double half = 0.5 * lambda;
  auto value = [half](const GroupPoint& p) { return std::exp(half * p.x(0)); };
  auto grad = [half, d](const GroupPoint& p) {
    std::vector<double> g(d, 0.0);
    g[0] = half * std::exp(half * p.x(0));
    return g;
  };
  auto hess = [half, d](const GroupPoint& p) {
    Hessian h(d);
    h(0, 0) = half * half * std::exp(half * p.x(0));
    return h;
  };
  std::ostringstream name;
  name << "exp_linear:" << lambda;
  SmoothFunction f(name.str(), n, value, grad, hess);
  f.mark_unbounded();
  return f;
}

SmoothFunction lookup(const std::string& name, std::size_t n) {
  auto starts = [&](const char* prefix) { return name.rfind(prefix, 0) == 0; };
  auto number_after = [&](std::size_t pos) {
    try {
      return std::stod(name.substr(pos));
    } catch (const std::exception&) {
      throw UsageError("bad numeric parameter in function name '" + name + "'");
    }
  };
  if (name == "gauss_bump") return gauss_bump(n);
  if (name == "z") return coordinate_z(n);
  if (name == "z2") return from_polynomial(parse_polynomial("z^2", n), "z2");
  if (name == "x1y1") return from_polynomial(parse_polynomial("x1*y1", n), "x1y1");
  if (name == "x1z") return from_polynomial(parse_polynomial("x1*z", n), "x1z");
  if (starts("exp_linear:")) return exp_linear(n, number_after(11));
  if (starts("const:")) return constant(n, number_after(6));
  if (starts("poly:")) return from_polynomial(parse_polynomial(name.substr(5), n), name);
  if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'y') &&
      name.find_first_not_of("0123456789", 1) == std::string::npos) {
    const std::size_t i = std::stoul(name.substr(1));
    return name[0] == 'x' ? coordinate_x(n, i) : coordinate_y(n, i);
  }
  throw UsageError("unknown function '" + name + "'");
}

std::vector<SmoothFunction> battery(std::size_t n) {
  std::vector<SmoothFunction> out;
  for (const char* name : {"x1", "y1", "z", "z2", "x1y1", "gauss_bump"}) out.push_back(lookup(name, n));
  return out;
}

}  // namespace functions

}  // namespace heis
