#pragma once

// Variation-aware set-aligned cache: per-way delay registers and
// latency-aware data shuffling across way groups.

#include <cstdint>
#include <span>
#include <vector>

#include "cnfet/cache.hpp"
#include "cnfet/timing.hpp"

namespace cnfet {

// Ways partitioned into groups ordered by latency, G0 fastest.
struct WayGroups {
  std::vector<std::vector<std::uint32_t>> groups;
  std::vector<std::uint32_t> group_latency;  // max latency of the members
  std::vector<std::uint32_t> group_of_way;
  std::uint32_t ways_per_group = 2;

  std::size_t size() const { return groups.size(); }
};

// Sorts ways by (latency, index) and chunks them. ways_per_group must divide
// the associativity.
WayGroups build_way_groups(const LatencyMap& latmap, std::uint32_t ways_per_group = 2);

// One 4-bit delay per way.
class DelayRegisters {
 public:
  explicit DelayRegisters(const LatencyMap& latmap);

  std::uint32_t delay(std::uint32_t way) const { return values_[way]; }
  std::size_t size() const { return values_.size(); }
  std::size_t storage_bits() const { return values_.size() * kBitsPerRegister; }
  std::size_t storage_bytes() const { return (storage_bits() + 7) / 8; }

  static constexpr std::size_t kBitsPerRegister = 4;

 private:
  std::vector<std::uint8_t> values_;
};

// Hits cost the latency of the way holding the block; LRU over the whole set.
AccessResult access_vasa(CacheState& state, const Request& request, const LatencyMap& latmap);

// Data shuffling. Within each group lines are ranked most-recent first (with
// two ways this is the 1-bit priority field). A hit in group k moves the block
// into G0's low-priority slot and cascades each displaced low-priority block
// one group down until the vacated slot is refilled; a miss inserts into G0
// and cascades through every group, evicting from the last. Every block
// arriving in a group becomes its most recent line. Hit latency is that of
// the way the block occupied before shuffling; each block placement counts as
// one shuffle move.
AccessResult access_vasa_ds(CacheState& state, const Request& request, const LatencyMap& latmap,
                            const WayGroups& groups);

// Bookkeeping figures for the overhead report.
struct VasaOverhead {
  std::size_t delay_register_bytes = 0;    // ways x 4 bits
  std::size_t priority_bits_per_set = 0;   // one bit per way
  std::size_t priority_metadata_bytes = 0; // sets x ways bits
  std::size_t shuffle_register_bytes = 0;  // delay registers plus swap buffers
};

inline constexpr std::size_t kShuffleRegisterFileBytes = 260;

VasaOverhead vasa_overhead(const CacheGeometry& geometry, bool data_shuffling);

}  // namespace cnfet
