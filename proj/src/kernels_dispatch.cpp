#include <cstdlib>
#include <string_view>

#include "cnfet/kernels.hpp"

namespace cnfet::kernels {

#if defined(CNFET_HAVE_AVX2)
namespace avx2_impl {
extern const KernelTable kTable;
}
#endif

const KernelTable* avx2() {
#if defined(CNFET_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_impl::kTable : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("CNFET_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar();
    const KernelTable* vec = avx2();
    return vec != nullptr ? vec : &scalar();
  }();
  return *chosen;
}

}  // namespace cnfet::kernels
