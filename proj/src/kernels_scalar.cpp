#include "heis/kernels.hpp"

#include <bit>
#include <cmath>

#include "elementary.hpp"
#include "heis/rng.hpp"

namespace heis::kernels::scalar {

namespace el = elementary;

void levy_step(std::size_t n, std::size_t lanes, double* b, double* w, double* z,
               const double* db, const double* dw) {
  for (std::size_t l = 0; l < lanes; ++l) {
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = i * lanes + l;
      const double bw = b[k] * dw[k];
      const double wb = w[k] * db[k];
      area = area + (bw - wb);
    }
    z[l] = z[l] + area;
  }
  for (std::size_t k = 0; k < n * lanes; ++k) {
    b[k] = b[k] + db[k];
    w[k] = w[k] + dw[k];
  }
}

void poly_eval(const PolyPlan& plan, const double* coords, std::size_t stride, std::size_t count,
               double* out) {
  const std::size_t m_count = plan.size();
  for (std::size_t j = 0; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
      double term = plan.coefficients[m];
      for (std::uint32_t f = plan.offsets[m]; f < plan.offsets[m + 1]; ++f) {
        term = term * coords[plan.factors[f] * stride + j];
      }
      acc = acc + term;
    }
    out[j] = acc;
  }
}

void accumulate_products(std::size_t count, double* acc, const double* a, const double* c) {
  for (std::size_t j = 0; j < count; ++j) acc[j] = acc[j] + a[j] * c[j];
}

double log(double u) {
  const auto bits = std::bit_cast<std::uint64_t>(u);
  double e = static_cast<double>(bits >> 52) - 1023.0;
  double m = std::bit_cast<double>((bits & 0x000fffffffffffffull) | 0x3ff0000000000000ull);
  if (m > el::kSqrt2) {
    m = m * 0.5;
    e = e + 1.0;
  }
  const double s = (m - 1.0) / (m + 1.0);
  const double t = s * s;
  double p = el::kAtanhSeries.back();
  for (std::size_t k = el::kAtanhSeries.size() - 1; k-- > 0;) p = p * t + el::kAtanhSeries[k];
  const double lm = (s + s) * p;
  return e * el::kLn2Hi + (e * el::kLn2Lo + lm);
}

void sincos_turns(double v, double& s, double& c) {
  const double q = std::nearbyint(v * 4.0);
  const double x = (v - q * 0.25) * el::kTwoPi;
  const double x2 = x * x;
  double ps = el::kSin.back();
  for (std::size_t k = el::kSin.size() - 1; k-- > 0;) ps = ps * x2 + el::kSin[k];
  double pc = el::kCos.back();
  for (std::size_t k = el::kCos.size() - 1; k-- > 0;) pc = pc * x2 + el::kCos[k];
  const double sr = x + (x * x2) * ps;
  const double cr = 1.0 + x2 * pc;
  switch (static_cast<int>(q) & 3) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

void normals(std::uint32_t key0, std::uint32_t key1, std::uint64_t first_path, std::size_t lanes,
             std::uint32_t substep, std::uint32_t slot, double* g1, double* g2) {
  for (std::size_t l = 0; l < lanes; ++l) {
    const std::uint64_t path = first_path + l;
    const auto r = Philox4x32::block(
        {substep, slot, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)}, {key0, key1});
    const double u1 = uniform_open((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
    const double u2 = uniform_open((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
    const double radius = std::sqrt(-2.0 * log(u1));
    double sn, cs;
    sincos_turns(u2, sn, cs);
    g1[l] = radius * cs;
    g2[l] = radius * sn;
  }
}

}  // namespace heis::kernels::scalar
