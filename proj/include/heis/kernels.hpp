#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and
// an AVX2 version; the AVX2 code performs the same IEEE operations in the same
// order (no FMA contraction), so the two are bitwise identical and either may
// be selected at runtime without affecting reproducibility.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace heis::kernels {

/// Paths advanced together by the simulator.
inline constexpr std::size_t kLanes = 8;

enum class Isa { Scalar, Avx2 };

/// Flattened sparse polynomial. Monomial m contributes
/// coefficients[m] * prod_{f in [offsets[m], offsets[m+1])} x[factors[f]],
/// with a variable repeated once per unit of its exponent.
struct PolyPlan {
  std::size_t n_vars = 0;
  std::vector<double> coefficients;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint16_t> factors;

  std::size_t size() const noexcept { return coefficients.size(); }
};

/// out[j] = P(coords[0*stride + j], ..., coords[(n_vars-1)*stride + j]), j < count.
using PolyEvalFn = void (*)(const PolyPlan& plan, const double* coords, std::size_t stride,
                            std::size_t count, double* out);

/// One left-point step of the driver/Levy-area recursion for `lanes` paths.
/// Arrays are component-major: b[i*lanes + l]. Updates
///   z += sum_i (b_i dw_i - w_i db_i);  b += db;  w += dw.
using LevyStepFn = void (*)(std::size_t n, std::size_t lanes, double* b, double* w, double* z,
                            const double* db, const double* dw);

/// acc[j] += a[j] * c[j].
using AccumulateFn = void (*)(std::size_t count, double* acc, const double* a, const double* c);

/// Standard normal pairs for paths first_path .. first_path+lanes-1: Philox4x32-10
/// on counter (substep, slot, path_lo, path_hi) with key (key0, key1), then
/// Box-Muller with the deterministic log/sincos below. g1 = r cos, g2 = r sin.
using NormalsFn = void (*)(std::uint32_t key0, std::uint32_t key1, std::uint64_t first_path,
                           std::size_t lanes, std::uint32_t substep, std::uint32_t slot, double* g1,
                           double* g2);

struct KernelTable {
  Isa isa;
  const char* name;
  LevyStepFn levy_step;
  PolyEvalFn poly_eval;
  AccumulateFn accumulate_products;
  NormalsFn normals;
};

bool isa_supported(Isa isa) noexcept;

/// Kernel table for a specific instruction set; throws UsageError if the CPU
/// (or the build) does not support it.
const KernelTable& kernels_for(Isa isa);

/// Table chosen at first use: the best supported ISA, unless HEIS_ISA=scalar|avx2
/// says otherwise.
const KernelTable& active();

/// Overrides the active table for the rest of the process.
void select(Isa isa);

namespace scalar {
void levy_step(std::size_t n, std::size_t lanes, double* b, double* w, double* z,
               const double* db, const double* dw);
void poly_eval(const PolyPlan& plan, const double* coords, std::size_t stride, std::size_t count,
               double* out);
void accumulate_products(std::size_t count, double* acc, const double* a, const double* c);
void normals(std::uint32_t key0, std::uint32_t key1, std::uint64_t first_path, std::size_t lanes,
             std::uint32_t substep, std::uint32_t slot, double* g1, double* g2);

/// Natural log of a positive normal double, argument reduction to
/// [sqrt(1/2), sqrt(2)) and an atanh series; a few ulp from libm.
double log(double u);
/// sin and cos of 2*pi*v for v in [0, 1], by quadrant reduction and Taylor
/// polynomials on [-pi/4, pi/4].
void sincos_turns(double v, double& s, double& c);
}  // namespace scalar

#if defined(HEIS_HAVE_AVX2)
namespace avx2 {
void levy_step(std::size_t n, std::size_t lanes, double* b, double* w, double* z,
               const double* db, const double* dw);
void poly_eval(const PolyPlan& plan, const double* coords, std::size_t stride, std::size_t count,
               double* out);
void accumulate_products(std::size_t count, double* acc, const double* a, const double* c);
void normals(std::uint32_t key0, std::uint32_t key1, std::uint64_t first_path, std::size_t lanes,
             std::uint32_t substep, std::uint32_t slot, double* g1, double* g2);
}  // namespace avx2
#endif

}  // namespace heis::kernels
