#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// The variant is chosen once at startup from CPUID; setting the environment
// variable CNFET_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cnfet::kernels {

// Tag value held by invalid lines; real tags never reach it.
inline constexpr std::uint64_t kInvalidTag = ~std::uint64_t{0};

struct KernelTable {
  std::string_view name;

  // Index of the first i with tags[i] == tag, or -1.
  int (*find_tag)(const std::uint64_t* tags, std::size_t n, std::uint64_t tag);

  // out[i] = clamp(ceil(scale / strength[i]), lo, hi); strength 0 -> hi.
  void (*quantize_latency)(const double* strength, std::size_t n, double scale,
                           std::uint32_t lo, std::uint32_t hi, std::uint32_t* out);

  // out[g] = max(values[g*width .. g*width+width)); n is a multiple of width.
  void (*group_max)(const std::uint32_t* values, std::size_t n, std::size_t width,
                    std::uint32_t* out);

  // True when starts[i] <= index <= ends[i] for some i.
  bool (*in_any_range)(const std::int32_t* starts, const std::int32_t* ends, std::size_t n,
                       std::int32_t index);

  // Sum of weights[i] * values[i].
  std::uint64_t (*weighted_sum)(const std::uint64_t* weights, const std::uint32_t* values,
                                std::size_t n);
};

const KernelTable& scalar();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2();

// The table used by the library.
const KernelTable& active();

}  // namespace cnfet::kernels
