#include "heis/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "heis/error.hpp"

namespace heis::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::Scalar, "scalar", &scalar::levy_step, &scalar::poly_eval,
                                   &scalar::accumulate_products, &scalar::normals};
#if defined(HEIS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::Avx2, "avx2", &avx2::levy_step, &avx2::poly_eval,
                                 &avx2::accumulate_products, &avx2::normals};
#endif

const KernelTable* initial_table() {
  if (const char* env = std::getenv("HEIS_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &kScalarTable;
    if (want == "avx2" && isa_supported(Isa::Avx2)) return &kernels_for(Isa::Avx2);
  }
  return isa_supported(Isa::Avx2) ? &kernels_for(Isa::Avx2) : &kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(HEIS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) throw UsageError("requested instruction set is not available");
#if defined(HEIS_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace heis::kernels
