#include <immintrin.h>

#include "elementary.hpp"
#include "heis/kernels.hpp"

// Compiled with -mavx2 only. Mirrors kernels_scalar.cpp operation by
// operation; the tails fall back to the scalar loops.

namespace heis::kernels::avx2 {

void levy_step(std::size_t n, std::size_t lanes, double* b, double* w, double* z,
               const double* db, const double* dw) {
  std::size_t l = 0;
  for (; l + 4 <= lanes; l += 4) {
    __m256d area = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = i * lanes + l;
      const __m256d bw = _mm256_mul_pd(_mm256_loadu_pd(b + k), _mm256_loadu_pd(dw + k));
      const __m256d wb = _mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(db + k));
      area = _mm256_add_pd(area, _mm256_sub_pd(bw, wb));
    }
    _mm256_storeu_pd(z + l, _mm256_add_pd(_mm256_loadu_pd(z + l), area));
  }
  for (; l < lanes; ++l) {
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = i * lanes + l;
      area = area + (b[k] * dw[k] - w[k] * db[k]);
    }
    z[l] = z[l] + area;
  }

  const std::size_t total = n * lanes;
  std::size_t k = 0;
  for (; k + 4 <= total; k += 4) {
    _mm256_storeu_pd(b + k, _mm256_add_pd(_mm256_loadu_pd(b + k), _mm256_loadu_pd(db + k)));
    _mm256_storeu_pd(w + k, _mm256_add_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(dw + k)));
  }
  for (; k < total; ++k) {
    b[k] = b[k] + db[k];
    w[k] = w[k] + dw[k];
  }
}

void poly_eval(const PolyPlan& plan, const double* coords, std::size_t stride, std::size_t count,
               double* out) {
  const std::size_t m_count = plan.size();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t m = 0; m < m_count; ++m) {
      __m256d term = _mm256_set1_pd(plan.coefficients[m]);
      for (std::uint32_t f = plan.offsets[m]; f < plan.offsets[m + 1]; ++f) {
        term = _mm256_mul_pd(term, _mm256_loadu_pd(coords + plan.factors[f] * stride + j));
      }
      acc = _mm256_add_pd(acc, term);
    }
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < count; ++j) {
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
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(c + j));
    _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), prod));
  }
  for (; j < count; ++j) acc[j] = acc[j] + a[j] * c[j];
}

namespace {

namespace el = elementary;

// Four 64-bit lanes, each holding a 32-bit Philox word in its low half.
inline __m256i mask32() { return _mm256_set1_epi64x(0xffffffffll); }

inline __m256d u64_to_double(__m256i k) {
  // Exact for k < 2^52.
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(k, magic)), _mm256_set1_pd(0x1.0p52));
}

inline __m256d uniform(__m256i hi, __m256i lo) {
  const __m256i bits = _mm256_or_si256(_mm256_slli_epi64(hi, 32), lo);
  const __m256d k = u64_to_double(_mm256_srli_epi64(bits, 12));
  return _mm256_mul_pd(_mm256_add_pd(k, _mm256_set1_pd(0.5)), _mm256_set1_pd(el::kUniformScale));
}

inline __m256d log4(__m256d u) {
  const __m256i bits = _mm256_castpd_si256(u);
  __m256d e = _mm256_sub_pd(u64_to_double(_mm256_srli_epi64(bits, 52)), _mm256_set1_pd(1023.0));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffll)),
                                                  _mm256_set1_epi64x(0x3ff0000000000000ll)));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(el::kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d t = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(el::kAtanhSeries.back());
  for (std::size_t k = el::kAtanhSeries.size() - 1; k-- > 0;) {
    p = _mm256_add_pd(_mm256_mul_pd(p, t), _mm256_set1_pd(el::kAtanhSeries[k]));
  }
  const __m256d lm = _mm256_mul_pd(_mm256_add_pd(s, s), p);
  return _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(el::kLn2Hi)),
                       _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(el::kLn2Lo)), lm));
}

inline void sincos_turns4(__m256d v, __m256d& s, __m256d& c) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(v, _mm256_set1_pd(4.0)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d x = _mm256_mul_pd(_mm256_sub_pd(v, _mm256_mul_pd(q, _mm256_set1_pd(0.25))), _mm256_set1_pd(el::kTwoPi));
  const __m256d x2 = _mm256_mul_pd(x, x);
  __m256d ps = _mm256_set1_pd(el::kSin.back());
  for (std::size_t k = el::kSin.size() - 1; k-- > 0;) ps = _mm256_add_pd(_mm256_mul_pd(ps, x2), _mm256_set1_pd(el::kSin[k]));
  __m256d pc = _mm256_set1_pd(el::kCos.back());
  for (std::size_t k = el::kCos.size() - 1; k-- > 0;) pc = _mm256_add_pd(_mm256_mul_pd(pc, x2), _mm256_set1_pd(el::kCos[k]));
  const __m256d sr = _mm256_add_pd(x, _mm256_mul_pd(_mm256_mul_pd(x, x2), ps));
  const __m256d cr = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(x2, pc));

  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d q1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  const __m256d q2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  const __m256d q3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(q1, q3);
  const __m256d s_base = _mm256_blendv_pd(sr, cr, swap);
  const __m256d c_base = _mm256_blendv_pd(cr, sr, swap);
  s = _mm256_xor_pd(s_base, _mm256_and_pd(sign, _mm256_or_pd(q2, q3)));
  c = _mm256_xor_pd(c_base, _mm256_and_pd(sign, _mm256_or_pd(q1, q2)));
}

}  // namespace

void normals(std::uint32_t key0, std::uint32_t key1, std::uint64_t first_path, std::size_t lanes,
             std::uint32_t substep, std::uint32_t slot, double* g1, double* g2) {
  const __m256i lo32 = mask32();
  const __m256i mul_a = _mm256_set1_epi64x(el::kPhiloxMulA);
  const __m256i mul_b = _mm256_set1_epi64x(el::kPhiloxMulB);
  std::size_t l = 0;
  for (; l + 4 <= lanes; l += 4) {
    const std::uint64_t p = first_path + l;
    __m256i c0 = _mm256_set1_epi64x(substep);
    __m256i c1 = _mm256_set1_epi64x(slot);
    __m256i c2 = _mm256_set_epi64x(static_cast<std::uint32_t>(p + 3), static_cast<std::uint32_t>(p + 2),
                                   static_cast<std::uint32_t>(p + 1), static_cast<std::uint32_t>(p));
    __m256i c3 = _mm256_set_epi64x((p + 3) >> 32, (p + 2) >> 32, (p + 1) >> 32, p >> 32);
    std::uint32_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
      const __m256i p0 = _mm256_mul_epu32(c0, mul_a);
      const __m256i p1 = _mm256_mul_epu32(c2, mul_b);
      const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1), _mm256_set1_epi64x(k0));
      const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3), _mm256_set1_epi64x(k1));
      c1 = _mm256_and_si256(p1, lo32);
      c3 = _mm256_and_si256(p0, lo32);
      c0 = n0;
      c2 = n2;
      k0 += el::kPhiloxWeylA;
      k1 += el::kPhiloxWeylB;
    }
    const __m256d u1 = uniform(c0, c1);
    const __m256d u2 = uniform(c2, c3);
    const __m256d radius = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), log4(u1)));
    __m256d sn, cs;
    sincos_turns4(u2, sn, cs);
    _mm256_storeu_pd(g1 + l, _mm256_mul_pd(radius, cs));
    _mm256_storeu_pd(g2 + l, _mm256_mul_pd(radius, sn));
  }
  if (l < lanes) scalar::normals(key0, key1, first_path + l, lanes - l, substep, slot, g1 + l, g2 + l);
}

}  // namespace heis::kernels::avx2
