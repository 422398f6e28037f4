// Compiled with -mavx2; only reached after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "cnfet/kernels.hpp"

namespace cnfet::kernels::avx2_impl {
namespace {

int find_tag(const std::uint64_t* tags, std::size_t n, std::uint64_t tag) {
  const __m256i needle = _mm256_set1_epi64x(static_cast<long long>(tag));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(tags + i));
    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(v, needle)));
    if (mask != 0) return static_cast<int>(i) + std::countr_zero(static_cast<unsigned>(mask));
  }
  for (; i < n; ++i) {
    if (tags[i] == tag) return static_cast<int>(i);
  }
  return -1;
}

void quantize_latency(const double* strength, std::size_t n, double scale, std::uint32_t lo,
                      std::uint32_t hi, std::uint32_t* out) {
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(strength + i);
    const __m256d dead = _mm256_cmp_pd(s, zero, _CMP_NGT_UQ);
    __m256d c = _mm256_round_pd(_mm256_div_pd(vscale, s), _MM_FROUND_TO_POS_INF | _MM_FROUND_NO_EXC);
    c = _mm256_min_pd(_mm256_max_pd(c, vlo), vhi);
    c = _mm256_blendv_pd(c, vhi, dead);
    // Values lie in [lo, hi] <= 2^31, so the signed conversion is exact.
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvtpd_epi32(c));
  }
  for (; i < n; ++i) {
    if (!(strength[i] > 0.0)) {
      out[i] = hi;
      continue;
    }
    const double c = __builtin_ceil(scale / strength[i]);
    out[i] = static_cast<std::uint32_t>(std::min(std::max(c, double(lo)), double(hi)));
  }
}

std::uint32_t hmax(__m256i v) {
  __m128i m = _mm_max_epu32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  m = _mm_max_epu32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(1, 0, 3, 2)));
  m = _mm_max_epu32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(2, 3, 0, 1)));
  return static_cast<std::uint32_t>(_mm_cvtsi128_si32(m));
}

void group_max(const std::uint32_t* values, std::size_t n, std::size_t width, std::uint32_t* out) {
  for (std::size_t g = 0; g * width < n; ++g) {
    const std::uint32_t* p = values + g * width;
    std::size_t i = 0;
    std::uint32_t best = 0;
    if (width >= 8) {
      __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
      for (i = 8; i + 8 <= width; i += 8) {
        acc = _mm256_max_epu32(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i)));
      }
      best = hmax(acc);
    }
    for (; i < width; ++i) best = std::max(best, p[i]);
    out[g] = best;
  }
}

bool in_any_range(const std::int32_t* starts, const std::int32_t* ends, std::size_t n,
                  std::int32_t index) {
  const __m256i idx = _mm256_set1_epi32(index);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(starts + i));
    const __m256i e = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ends + i));
    const __m256i outside = _mm256_or_si256(_mm256_cmpgt_epi32(s, idx), _mm256_cmpgt_epi32(idx, e));
    if (_mm256_movemask_ps(_mm256_castsi256_ps(outside)) != 0xFF) return true;
  }
  for (; i < n; ++i) {
    if (starts[i] <= index && index <= ends[i]) return true;
  }
  return false;
}

std::uint64_t weighted_sum(const std::uint64_t* weights, const std::uint32_t* values,
                           std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(weights + i));
    const __m256i v =
        _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(values + i)));
    const __m256i low = _mm256_mul_epu32(w, v);
    const __m256i high = _mm256_slli_epi64(_mm256_mul_epu32(_mm256_srli_epi64(w, 32), v), 32);
    acc = _mm256_add_epi64(acc, _mm256_add_epi64(low, high));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) sum += weights[i] * values[i];
  return sum;
}

}  // namespace

extern const KernelTable kTable;
const KernelTable kTable{"avx2", find_tag, quantize_latency, group_max, in_any_range,
                         weighted_sum};

}  // namespace cnfet::kernels::avx2_impl
