#pragma once

// Minimum of sum(count * cost) over every injective page -> frame assignment.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// cost[p][f] is the cost of page p in frame f; weight[p] its access count.
inline std::uint64_t min_assignment_cost(const std::vector<std::uint64_t>& weight,
                                         const std::vector<std::vector<std::uint32_t>>& cost) {
  const std::size_t pages = weight.size();
  const std::size_t frames = pages ? cost[0].size() : 0;
  std::vector<std::size_t> perm(frames);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  do {
    std::uint64_t total = 0;
    for (std::size_t p = 0; p < pages; ++p) total += weight[p] * cost[p][perm[p]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return pages ? best : 0;
}

}  // namespace oracle
