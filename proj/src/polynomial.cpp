#include "heis/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "heis/error.hpp"

namespace heis {

HPolynomial::HPolynomial(std::size_t n) : n_(n) {
  if (n == 0) throw UsageError("H_n requires n >= 1");
}

HPolynomial HPolynomial::constant(std::size_t n, double c) {
  HPolynomial p(n);
  if (c != 0.0) p.terms_[Exponents(2 * n + 1, 0)] = c;
  return p;
}

HPolynomial HPolynomial::variable(std::size_t n, std::size_t var) {
  HPolynomial p(n);
  if (var >= p.n_vars()) throw UsageError("variable index out of range");
  Exponents e(2 * n + 1, 0);
  e[var] = 1;
  p.terms_[e] = 1.0;
  return p;
}

HPolynomial HPolynomial::monomial(std::size_t n, const Exponents& e, double c) {
  HPolynomial p(n);
  p.add_term(e, c);
  return p.prune(0.0);
}

int monomial_weight(const HPolynomial::Exponents& e, std::size_t n) {
  int w = 0;
  for (std::size_t v = 0; v < 2 * n; ++v) w += e[v];
  return w + 2 * e[2 * n];
}

int HPolynomial::weight() const {
  int w = -1;
  for (const auto& [e, c] : terms_) w = std::max(w, monomial_weight(e, n_));
  return w;
}

double HPolynomial::coefficient(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double HPolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void HPolynomial::add_term(const Exponents& e, double c) {
  if (e.size() != n_vars()) throw UsageError("exponent vector has wrong length");
  for (int a : e) {
    if (a < 0) throw UsageError("negative exponent");
  }
  if (c == 0.0) return;
  terms_[e] += c;
}

HPolynomial& HPolynomial::prune(double rel) {
  const double cut = rel * max_abs_coefficient();
  std::erase_if(terms_, [cut](const auto& kv) { return kv.second == 0.0 || std::abs(kv.second) <= cut; });
  return *this;
}

void HPolynomial::check_same_dim(const HPolynomial& o) const {
  if (n_ != o.n_) throw UsageError("polynomials live on different H_n");
}

HPolynomial& HPolynomial::operator+=(const HPolynomial& o) {
  check_same_dim(o);
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  return prune();
}

HPolynomial& HPolynomial::operator-=(const HPolynomial& o) {
  check_same_dim(o);
  for (const auto& [e, c] : o.terms_) terms_[e] -= c;
  return prune();
}

HPolynomial& HPolynomial::operator*=(double s) {
  for (auto& [e, c] : terms_) c *= s;
  return prune();
}

HPolynomial operator*(const HPolynomial& a, const HPolynomial& b) {
  a.check_same_dim(b);
  HPolynomial out(a.n_);
  HPolynomial::Exponents e(a.n_vars());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
      out.terms_[e] += ca * cb;
    }
  }
  return out.prune();
}

HPolynomial HPolynomial::derivative(std::size_t var) const {
  if (var >= n_vars()) throw UsageError("variable index out of range");
  HPolynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.terms_[d] += c * e[var];
  }
  return out.prune();
}

HPolynomial HPolynomial::times_variable(std::size_t var) const {
  if (var >= n_vars()) throw UsageError("variable index out of range");
  HPolynomial out(n_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d[var] += 1;
    out.terms_[d] = c;
  }
  return out;
}

kernels::PolyPlan HPolynomial::make_plan() const {
  kernels::PolyPlan plan;
  plan.n_vars = n_vars();
  plan.coefficients.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    plan.coefficients.push_back(c);
    for (std::size_t v = 0; v < e.size(); ++v) {
      for (int k = 0; k < e[v]; ++k) plan.factors.push_back(static_cast<std::uint16_t>(v));
    }
    plan.offsets.push_back(static_cast<std::uint32_t>(plan.factors.size()));
  }
  return plan;
}

std::string HPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double mag = std::abs(c);
    bool wrote = false;
    if (mag != 1.0 || std::all_of(e.begin(), e.end(), [](int a) { return a == 0; })) {
      os << mag;
      wrote = true;
    }
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (wrote) os << "*";
      if (v < n_) os << "x" << v + 1;
      else if (v < 2 * n_) os << "y" << v - n_ + 1;
      else os << "z";
      if (e[v] > 1) os << "^" << e[v];
      wrote = true;
    }
  }
  return os.str();
}

std::vector<HPolynomial> monomial_basis(std::size_t n, int max_weight) {
  std::vector<HPolynomial> out;
  const std::size_t nv = 2 * n + 1;
  HPolynomial::Exponents e(nv, 0);
  // odometer over exponents, bounded by the weight budget
  auto rec = [&](auto&& self, std::size_t v, int budget) -> void {
    if (v == nv) {
      out.push_back(HPolynomial::monomial(n, e));
      return;
    }
    const int unit = (v == nv - 1) ? 2 : 1;
    for (int a = 0; a * unit <= budget; ++a) {
      e[v] = a;
      self(self, v + 1, budget - a * unit);
    }
    e[v] = 0;
  };
  rec(rec, 0, max_weight);
  return out;
}

double relative_difference(const HPolynomial& a, const HPolynomial& b) {
  if (a.dim() != b.dim()) throw UsageError("polynomials live on different H_n");
  HPolynomial d = a;
  for (const auto& [e, c] : b.terms()) d.add_term(e, -c);
  double m = 0.0;
  for (const auto& [e, c] : d.terms()) m = std::max(m, std::abs(c));
  const double scale = std::max({1.0, a.max_abs_coefficient(), b.max_abs_coefficient()});
  return m / scale;
}

bool approx_equal(const HPolynomial& a, const HPolynomial& b, double rel) {
  return relative_difference(a, b) <= rel;
}

HPolynomial poly_apply_field(const FieldId& field, const HPolynomial& p) {
  const std::size_t n = p.dim();
  validate_field(field, n);
  const std::size_t i = field.index - 1;
  const std::size_t zv = 2 * n;
  switch (field.kind) {
    case FieldKind::X: return p.derivative(i) - 0.5 * p.derivative(zv).times_variable(n + i);
    case FieldKind::Y: return p.derivative(n + i) + 0.5 * p.derivative(zv).times_variable(i);
    case FieldKind::Xhat: return p.derivative(i) + 0.5 * p.derivative(zv).times_variable(n + i);
    case FieldKind::Yhat: return p.derivative(n + i) - 0.5 * p.derivative(zv).times_variable(i);
    case FieldKind::Z:
    case FieldKind::Zhat: return p.derivative(zv);
  }
  return HPolynomial(n);
}

HPolynomial poly_generator(const HPolynomial& p) {
  const std::size_t n = p.dim();
  HPolynomial acc(n);
  for (std::size_t i = 1; i <= n; ++i) {
    acc += poly_apply_field(FieldId::X(i), poly_apply_field(FieldId::X(i), p));
    acc += poly_apply_field(FieldId::Y(i), poly_apply_field(FieldId::Y(i), p));
  }
  return acc * 0.5;
}

SemigroupSeries::SemigroupSeries(const HPolynomial& p) {
  terms_.push_back(p);
  // L lowers weight by 2, so this stops after at most weight/2 + 1 rounds.
  for (int k = 1;; ++k) {
    HPolynomial next = poly_generator(terms_.back()) * (1.0 / k);
    if (next.is_zero()) break;
    terms_.push_back(std::move(next));
  }
}

HPolynomial SemigroupSeries::at(double t) const {
  if (!(t >= 0.0)) throw UsageError("semigroup time must be >= 0");
  HPolynomial out = terms_.front();
  double tk = 1.0;
  for (std::size_t k = 1; k < terms_.size(); ++k) {
    tk *= t;
    out += terms_[k] * tk;
  }
  return out;
}

SeriesPlan::SeriesPlan(const SemigroupSeries& series) : SeriesPlan(series.terms()) {}

SeriesPlan::SeriesPlan(const std::vector<HPolynomial>& terms) {
  for (const auto& t : terms) terms_.push_back(t.make_plan());
}

void SeriesPlan::eval(double s, const double* coords, std::size_t stride, std::size_t count, double* out,
                      double* scratch) const {
  const auto& kern = kernels::active();
  std::fill(out, out + count, 0.0);
  for (std::size_t k = terms_.size(); k-- > 0;) {
    kern.poly_eval(terms_[k], coords, stride, count, scratch);
    for (std::size_t j = 0; j < count; ++j) out[j] = out[j] * s + scratch[j];
  }
}

HPolynomial heat_semigroup(const HPolynomial& p, double t) {
  if (!(t >= 0.0)) throw UsageError("semigroup time must be >= 0");
  return SemigroupSeries(p).at(t);
}

HPolynomial poly_mirror(const HPolynomial& p) {
  const std::size_t n = p.dim();
  HPolynomial out(n);
  for (const auto& [e, c] : p.terms()) {
    int horizontal = 0;
    for (std::size_t v = 0; v < 2 * n; ++v) horizontal += e[v];
    out.add_term(e, horizontal % 2 == 0 ? c : -c);
  }
  return out;
}

namespace {

// Substitutes variable v -> images[v] in every monomial of `poly`.
HPolynomial substitute(const HPolynomial& poly, const std::vector<HPolynomial>& images) {
  const std::size_t n = poly.dim();
  const std::size_t nv = 2 * n + 1;
  std::vector<std::vector<HPolynomial>> powers(nv);
  for (std::size_t v = 0; v < nv; ++v) powers[v].push_back(HPolynomial::constant(n, 1.0));
  auto power = [&](std::size_t v, int k) -> const HPolynomial& {
    while (static_cast<int>(powers[v].size()) <= k) powers[v].push_back(powers[v].back() * images[v]);
    return powers[v][static_cast<std::size_t>(k)];
  };
  HPolynomial out(n);
  for (const auto& [e, c] : poly.terms()) {
    HPolynomial term = HPolynomial::constant(n, c);
    for (std::size_t v = 0; v < nv; ++v) {
      if (e[v] > 0) term = term * power(v, e[v]);
    }
    for (const auto& [te, tc] : term.terms()) out.add_term(te, tc);
  }
  return out.prune();
}

std::vector<HPolynomial> translation_images(const HPolynomial& poly, const GroupPoint& p, bool left) {
  const std::size_t n = poly.dim();
  if (p.dim() != n) throw UsageError("dimension mismatch between polynomial and group point");
  std::vector<HPolynomial> img;
  img.reserve(2 * n + 1);
  for (std::size_t v = 0; v < 2 * n; ++v) {
    img.push_back(HPolynomial::variable(n, v) + HPolynomial::constant(n, p.coordinates()[v]));
  }
  // left:  (p*q).z = z_q + z_p + 1/2 sum (x_p y_q - x_q y_p)
  // right: (q*p).z = z_q + z_p + 1/2 sum (x_q y_p - x_p y_q)
  const double sign = left ? 1.0 : -1.0;
  HPolynomial zimg = HPolynomial::z(n) + HPolynomial::constant(n, p.z());
  for (std::size_t i = 0; i < n; ++i) {
    zimg += HPolynomial::y(n, i) * (0.5 * sign * p.x(i));
    zimg -= HPolynomial::x(n, i) * (0.5 * sign * p.y(i));
  }
  img.push_back(std::move(zimg));
  return img;
}

}  // namespace

HPolynomial poly_left_translate(const HPolynomial& poly, const GroupPoint& p) {
  return substitute(poly, translation_images(poly, p, true));
}

HPolynomial poly_right_translate(const HPolynomial& poly, const GroupPoint& p) {
  return substitute(poly, translation_images(poly, p, false));
}

double poly_eval(const kernels::PolyPlan& plan, const GroupPoint& p) {
  if (p.coordinates().size() != plan.n_vars) {
    throw UsageError("dimension mismatch between polynomial and group point");
  }
  double out = 0.0;
  kernels::scalar::poly_eval(plan, p.coordinates().data(), 1, 1, &out);
  return out;
}

double poly_eval(const HPolynomial& poly, const GroupPoint& p) {
  if (p.dim() != poly.dim()) throw UsageError("dimension mismatch between polynomial and group point");
  return poly_eval(poly.make_plan(), p);
}

void poly_eval_batch(const HPolynomial& poly, const double* coords, std::size_t stride,
                     std::size_t count, double* out) {
  const auto plan = poly.make_plan();
  kernels::active().poly_eval(plan, coords, stride, count, out);
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& s, std::size_t n) : s_(s), n_(n) {}

  HPolynomial parse() {
    HPolynomial out(n_);
    skip();
    if (pos_ == s_.size()) throw UsageError("empty polynomial expression");
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
        skip();
      } else if (!first) {
        throw error("expected '+' or '-'");
      }
      first = false;
      auto [e, c] = term();
      out.add_term(e, sign * c);
      skip();
    }
    return out.prune(0.0);
  }

 private:
  UsageError error(const std::string& what) const {
    return UsageError("cannot parse polynomial '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::pair<HPolynomial::Exponents, double> term() {
    HPolynomial::Exponents e(2 * n_ + 1, 0);
    double c = 1.0;
    factor(e, c);
    for (;;) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] == '+' || s_[pos_] == '-') break;
      if (s_[pos_] != '*') throw error("expected '*'");
      ++pos_;
      factor(e, c);
    }
    return {e, c};
  }

  void factor(HPolynomial::Exponents& e, double& c) {
    skip();
    if (pos_ >= s_.size()) throw error("missing factor");
    const char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      c *= number<double>([](const std::string& t, std::size_t* used) { return std::stod(t, used); });
    } else if (ch == 'x' || ch == 'y' || ch == 'z') {
      ++pos_;
      std::size_t var = 2 * n_;
      if (ch != 'z') {
        std::size_t idx = 1;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          idx = number<std::size_t>([](const std::string& t, std::size_t* used) { return std::stoul(t, used); });
        }
        if (idx < 1 || idx > n_) throw error("coordinate index out of range");
        var = (ch == 'x' ? 0 : n_) + idx - 1;
      }
      int power = 1;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) throw error("expected exponent");
        power = number<int>([](const std::string& t, std::size_t* used) { return std::stoi(t, used); });
      }
      e[var] += power;
    } else {
      throw error(std::string("unexpected character '") + ch + "'");
    }
  }

  template <class T, class Conv>
  T number(Conv conv) {
    std::size_t used = 0;
    T v{};
    try {
      v = conv(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      throw error("malformed number");
    }
    pos_ += used;
    return v;
  }

  const std::string& s_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

HPolynomial parse_polynomial(const std::string& text, std::size_t n) { return PolyParser(text, n).parse(); }

}  // namespace heis
