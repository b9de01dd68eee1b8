#include <cstdlib>
#include <string>

#include "cargen/simd.hpp"

namespace cargen::simd {

#if defined(CARGEN_HAVE_AVX2)
namespace avx2 {
Nearest nearest(const double*, const double*, const double*, std::size_t, double, double, double);
void squared_distances(const double*, const double*, const double*, std::size_t, double, double, double,
                       double*);
}  // namespace avx2
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
namespace neon {
Nearest nearest(const double*, const double*, const double*, std::size_t, double, double, double);
void squared_distances(const double*, const double*, const double*, std::size_t, double, double, double,
                       double*);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::nearest, &scalar::squared_distances};
#if defined(CARGEN_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::nearest, &avx2::squared_distances};
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::nearest, &neon::squared_distances};
#endif

const KernelTable& select() {
  if (const char* env = std::getenv("CARGEN_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa)) {
        if (const KernelTable* t = kernels_for(isa)) return *t;
      }
    }
  }
  if (const KernelTable* t = kernels_for(Isa::avx2)) return *t;
  if (const KernelTable* t = kernels_for(Isa::neon)) return *t;
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &kScalar;
    case Isa::avx2:
#if defined(CARGEN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      if (__builtin_cpu_supports("avx2")) return &kAvx2;
#endif
      return nullptr;
    case Isa::neon:
#if defined(__aarch64__) && defined(__ARM_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace cargen::simd
