#pragma once

// Set-associative cache engine: address decomposition, tag match, LRU, and
// the baseline / partial-disabling policies. The variation-aware policies in
// vasa.hpp and vawa.hpp run on the same CacheState.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnfet/geometry.hpp"
#include "cnfet/timing.hpp"

namespace cnfet {

enum class Op : std::uint8_t { Read, Write };

// Data payloads are last-writer ids, enough to check that policies never
// return stale values.
struct Request {
  std::uint64_t addr = 0;
  Op op = Op::Read;
  std::uint64_t data = 0;
};

struct CacheLine {
  bool valid = false;
  bool dirty = false;
  std::uint64_t tag = 0;
  // 0 = most recent within the LRU scope (the set, or the way group under
  // data shuffling).
  std::uint32_t lru_rank = 0;
  // Priority within a way group; 0 = higher priority. Mirrors lru_rank != 0.
  std::uint8_t priority_bit = 0;
  std::uint64_t data = 0;
};

struct AccessResult {
  bool hit = false;
  std::optional<std::uint32_t> way;
  // Hit-path cycles including any NoC component; always >= 1.
  std::uint32_t latency_cycles = 1;
  std::uint32_t noc_cycles = 0;
  std::optional<std::uint64_t> evicted_tag;
  // A dirty victim was written back to memory.
  bool writeback = false;
  // Request served by memory without allocating (disabled set).
  bool bypassed = false;
  std::uint32_t shuffle_moves = 0;
  // Value returned for reads, stored value for writes.
  std::uint64_t data = 0;
};

enum class PolicyKind { BaselineWorst, BaselinePD, VASA, VASA_DS, VAWA_UG, VAWA_NG };

std::string_view to_string(PolicyKind policy);
PolicyKind parse_policy(std::string_view text);

// Layout the policy needs, or nullopt when it runs on either.
std::optional<LayoutKind> required_layout(PolicyKind policy);

// Flat backing store keyed by line address.
class MainMemory {
 public:
  std::uint64_t read(std::uint64_t line_addr) const {
    auto it = lines_.find(line_addr);
    return it == lines_.end() ? 0 : it->second;
  }
  void write(std::uint64_t line_addr, std::uint64_t data) { lines_[line_addr] = data; }
  std::size_t size() const { return lines_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::uint64_t> lines_;
};

class CacheState {
 public:
  explicit CacheState(const CacheGeometry& geometry);

  const CacheGeometry& geometry() const { return geometry_; }
  std::uint32_t ways() const { return geometry_.num_ways; }

  const CacheLine& line(std::uint32_t set, std::uint32_t way) const {
    return lines_[index(set, way)];
  }
  std::span<const CacheLine> set_lines(std::uint32_t set) const {
    return {lines_.data() + index(set, 0), geometry_.num_ways};
  }
  // Tags of the set with kernels::kInvalidTag in invalid slots.
  std::span<const std::uint64_t> set_tags(std::uint32_t set) const {
    return {tags_.data() + index(set, 0), geometry_.num_ways};
  }

  // Way holding `tag` in `set`, or -1.
  int find(std::uint32_t set, std::uint64_t tag) const;

  // LRU bookkeeping is relative to a scope: the ways sharing one recency
  // order (the whole set, or one way group under data shuffling). Ranks of
  // valid lines in a scope are always a permutation of 0..k-1.

  // Hit in place: the line becomes most recent, more recent lines age by one.
  void touch(std::uint32_t set, std::uint32_t way, std::span<const std::uint32_t> scope);
  // The slot's content leaves and `incoming` arrives as the most recent line.
  void replace(std::uint32_t set, std::uint32_t way, const CacheLine& incoming,
               std::span<const std::uint32_t> scope);
  // The slot's content leaves; the slot becomes invalid.
  void vacate(std::uint32_t set, std::uint32_t way, std::span<const std::uint32_t> scope);
  // Overwrites the payload of a valid line and marks it dirty.
  void write_data(std::uint32_t set, std::uint32_t way, std::uint64_t data);
  // First invalid way of the scope, else its least recent line.
  std::uint32_t victim(std::uint32_t set, std::span<const std::uint32_t> scope) const;

  MainMemory& memory() { return memory_; }
  const MainMemory& memory() const { return memory_; }

  // Valid tags of a set in way order.
  std::vector<std::uint64_t> valid_tags(std::uint32_t set) const;
  std::span<const std::uint32_t> all_ways() const { return all_ways_; }

 private:
  void age_more_recent(std::uint32_t set, std::uint32_t way, std::span<const std::uint32_t> scope,
                       std::uint32_t previous_rank);

  std::size_t index(std::uint32_t set, std::uint32_t way) const {
    return std::size_t{set} * geometry_.num_ways + way;
  }

  CacheGeometry geometry_;
  std::vector<CacheLine> lines_;
  std::vector<std::uint64_t> tags_;
  std::vector<std::uint32_t> all_ways_;
  MainMemory memory_;
};

// Plain LRU lookup over `scope` ways of the request's set. Fills on a miss
// (write-allocate, write-back); latency_cycles is left for the caller.
AccessResult lru_access(CacheState& state, const Request& request,
                        std::span<const std::uint32_t> scope);

// Every hit costs worst_cycles.
AccessResult access_baseline(CacheState& state, const Request& request, const LatencyMap& latmap,
                             std::uint32_t worst_cycles);

// Groups switched off by partial disabling, plus the resulting uniform hit
// latency.
class DisabledGroups {
 public:
  // Throws ConfigError when every group would be disabled or an index is out
  // of range.
  DisabledGroups(const LatencyMap& latmap, std::span<const std::uint32_t> disabled);

  // The groups at the map's worst latency; empty when all groups are equal.
  static DisabledGroups worst_of(const LatencyMap& latmap);

  bool disabled(std::uint32_t group) const { return mask_[group] != 0; }
  std::size_t count() const { return count_; }
  std::uint32_t hit_latency() const { return hit_latency_; }
  LayoutKind layout() const { return layout_; }
  std::span<const std::uint32_t> enabled_ways() const { return enabled_ways_; }

 private:
  LayoutKind layout_;
  std::vector<std::uint8_t> mask_;
  std::size_t count_ = 0;
  std::uint32_t hit_latency_ = 0;
  std::vector<std::uint32_t> enabled_ways_;
};

// SetAligned: disabled ways are skipped. WayAligned: requests to disabled
// sets bypass to memory and count as misses.
AccessResult access_partial_disable(CacheState& state, const Request& request,
                                    const LatencyMap& latmap, const DisabledGroups& disabled);

}  // namespace cnfet
