#include <cstdlib>
#include <cstring>

#include "sgw/errors.hpp"
#include "sgw/simd/kernels.hpp"

namespace sgw::simd {

extern const Kernels kScalarKernels;
#if defined(SGW_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(SGW_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw InvalidParameter(std::string("instruction set not available: ") +
                                                  std::string(to_string(isa)));
#if defined(SGW_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2Kernels;
#endif
  return kScalarKernels;
}

namespace {

const Kernels& select() {
  const char* env = std::getenv("SGW_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return kScalarKernels;
  if (isa_available(Isa::avx2)) return kernels_for(Isa::avx2);
  return kScalarKernels;
}

}  // namespace

const Kernels& kernels() {
  static const Kernels& chosen = select();
  return chosen;
}

}  // namespace sgw::simd
