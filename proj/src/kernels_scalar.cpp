#include <algorithm>
#include <cmath>

#include "cnfet/kernels.hpp"

namespace cnfet::kernels {
namespace {

int find_tag(const std::uint64_t* tags, std::size_t n, std::uint64_t tag) {
  for (std::size_t i = 0; i < n; ++i) {
    if (tags[i] == tag) return static_cast<int>(i);
  }
  return -1;
}

void quantize_latency(const double* strength, std::size_t n, double scale, std::uint32_t lo,
                      std::uint32_t hi, std::uint32_t* out) {
  const double dlo = lo, dhi = hi;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(strength[i] > 0.0)) {
      out[i] = hi;
      continue;
    }
    const double c = std::ceil(scale / strength[i]);
    out[i] = static_cast<std::uint32_t>(std::min(std::max(c, dlo), dhi));
  }
}

void group_max(const std::uint32_t* values, std::size_t n, std::size_t width, std::uint32_t* out) {
  for (std::size_t g = 0; g * width < n; ++g) {
    out[g] = *std::max_element(values + g * width, values + (g + 1) * width);
  }
}

bool in_any_range(const std::int32_t* starts, const std::int32_t* ends, std::size_t n,
                  std::int32_t index) {
  for (std::size_t i = 0; i < n; ++i) {
    if (starts[i] <= index && index <= ends[i]) return true;
  }
  return false;
}

std::uint64_t weighted_sum(const std::uint64_t* weights, const std::uint32_t* values,
                           std::size_t n) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += weights[i] * values[i];
  return sum;
}

constexpr KernelTable kScalar{"scalar", find_tag, quantize_latency, group_max, in_any_range,
                              weighted_sum};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace cnfet::kernels
