#pragma once

// Variation-aware way-aligned cache: per-set latency classes shared through
// uniform groups or through a budget of (start, end) segment registers.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cnfet/cache.hpp"
#include "cnfet/timing.hpp"

namespace cnfet {

struct Segment {
  std::uint32_t start_set = 0;
  std::uint32_t end_set = 0;  // inclusive
  std::uint32_t latency_class = 0;

  std::uint32_t length() const { return end_set - start_set + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

class SegmentTable {
 public:
  struct ClassEntry {
    std::uint32_t latency_class = 0;
    std::vector<Segment> segments;  // disjoint, sorted by start
  };

  SegmentTable() = default;
  SegmentTable(std::vector<ClassEntry> classes, std::uint32_t default_latency,
               std::uint32_t budget_per_class, std::uint32_t num_sets);

  const std::vector<ClassEntry>& classes() const { return classes_; }
  std::uint32_t default_latency() const { return default_latency_; }
  std::uint32_t budget_per_class() const { return budget_; }
  std::uint32_t num_sets() const { return num_sets_; }

  // Latency class of the first (fastest) class covering the set, else the
  // default latency. Each class is checked with one parallel compare.
  std::uint32_t lookup(std::uint32_t set_index) const;

  std::size_t segment_count() const;
  // Index registers in use (two per segment) and provisioned (two per
  // budgeted pair and class).
  std::size_t index_registers_used() const { return 2 * segment_count(); }
  std::size_t index_registers_provisioned() const { return 2 * budget_ * classes_.size(); }

  friend bool operator==(const SegmentTable& a, const SegmentTable& b) {
    return a.default_latency_ == b.default_latency_ && a.num_sets_ == b.num_sets_ &&
           a.flat_segments() == b.flat_segments();
  }
  std::vector<Segment> flat_segments() const;

 private:
  std::vector<ClassEntry> classes_;
  std::uint32_t default_latency_ = 0;
  std::uint32_t budget_ = 0;
  std::uint32_t num_sets_ = 0;
  // Per class, starts and ends packed for the range kernel.
  std::vector<std::vector<std::int32_t>> starts_;
  std::vector<std::vector<std::int32_t>> ends_;
};

struct UniformGroups {
  std::uint32_t num_groups = 0;
  std::uint32_t sets_per_group = 0;
  std::vector<std::uint32_t> group_latency;

  std::uint32_t lookup(std::uint32_t set_index) const {
    return group_latency[set_index / sets_per_group];
  }
};

// Contiguous equal partitions; each group runs at the max of its members.
UniformGroups build_uniform_groups(const LatencyMap& latmap, std::uint32_t num_groups);

// For each class M (ascending), maximal runs of consecutive G-aligned blocks
// whose sets all have latency <= M and are not yet covered by a faster class;
// the `budget` longest runs are kept (ties: lower start). Uncovered sets run
// at the map's max_cycles.
SegmentTable build_nonuniform_groups(const LatencyMap& latmap,
                                     std::span<const std::uint32_t> classes,
                                     std::uint32_t budget_per_class, std::uint32_t granularity);

std::uint32_t lookup_latency(const SegmentTable& table, std::uint32_t set_index);

// Sum over sets of (default latency - assigned latency).
std::uint64_t latency_savings(const SegmentTable& table);

AccessResult access_vawa(CacheState& state, const Request& request, const SegmentTable& table);
AccessResult access_vawa(CacheState& state, const Request& request, const UniformGroups& groups);

// `class,start,end` per segment followed by `default,<cycles>`.
void write_segment_table(std::ostream& out, const SegmentTable& table);
SegmentTable read_segment_table(std::istream& in, std::uint32_t num_sets);

struct VawaOverhead {
  std::size_t uniform_register_bytes = 0;     // one 4-bit delay per group
  std::size_t nonuniform_register_bytes = 0;  // provisioned index registers
  std::size_t nonuniform_index_registers = 0;
};

// Register file sizes quoted for the 64-group and two-class designs.
inline constexpr std::size_t kUniformGroupingRegisterBytes = 224;
inline constexpr std::size_t kNonuniformGroupingRegisterBytes = 194;
inline constexpr std::size_t kNonuniformGroupingQuotedRegisters = 128;

VawaOverhead vawa_overhead(const CacheGeometry& geometry, std::uint32_t uniform_groups,
                           std::size_t num_classes, std::uint32_t budget_per_class);

}  // namespace cnfet
