#pragma once

// The last-level cache as a whole: one or more banks, each with its own
// latency map and policy state, optionally placed on a NoC mesh.

#include <cstdint>
#include <optional>
#include <vector>

#include "cnfet/cache.hpp"
#include "cnfet/nuca.hpp"
#include "cnfet/pagemap.hpp"
#include "cnfet/timing.hpp"
#include "cnfet/variation.hpp"
#include "cnfet/vasa.hpp"
#include "cnfet/vawa.hpp"

namespace cnfet {

struct LlcConfig {
  CacheGeometry geometry = CacheGeometry::make(2 * 1024 * 1024, 8, 64);
  LayoutKind layout = LayoutKind::SetAligned;
  PolicyKind policy = PolicyKind::BaselineWorst;
  CntParams cnt;
  TimingOptions timing;
  std::uint32_t ways_per_group = 2;
  std::uint32_t uniform_groups = 64;
  std::vector<std::uint32_t> ng_classes{6, 7};
  std::uint32_t ng_budget = 16;
  // Segment alignment in sets; 1 unless pages are mapped.
  std::uint32_t ng_granularity = 1;
  bool nuca = false;
  MeshTopology topology = MeshTopology::grid(2, 4, 4);

  std::uint32_t num_banks() const { return nuca ? topology.num_banks() : 1; }
  CacheGeometry bank_geometry() const;
  void validate() const;
};

class Llc {
 public:
  // Samples one latency map per bank.
  explicit Llc(const LlcConfig& config);
  // Uses the given per-bank maps.
  Llc(const LlcConfig& config, std::vector<LatencyMap> maps);

  const LlcConfig& config() const { return config_; }
  std::uint32_t num_banks() const { return static_cast<std::uint32_t>(banks_.size()); }
  const CacheGeometry& bank_geometry() const { return bank_geometry_; }

  // Physical address to (bank, address within the bank).
  std::uint32_t bank_of_address(std::uint64_t paddr) const;
  std::uint64_t local_address(std::uint64_t paddr) const;

  // Serves one request from `core`; NoC cycles are included in the latency.
  AccessResult access(std::uint32_t core, const Request& request);

  const LatencyMap& latency_map(std::uint32_t bank) const { return banks_[bank].latmap; }
  const CacheState& state(std::uint32_t bank) const { return banks_[bank].state; }
  const SegmentTable& segment_table(std::uint32_t bank) const { return banks_[bank].segments; }
  const UniformGroups& uniform_groups(std::uint32_t bank) const { return banks_[bank].uniform; }
  const WayGroups& way_groups(std::uint32_t bank) const { return banks_[bank].way_groups; }

  // Hit latency a page placed at these sets of a bank is expected to see
  // under the configured policy. Set-aligned banks report their mean way
  // latency, rounded.
  std::uint32_t frame_hit_latency(std::uint32_t bank, std::uint32_t first_set,
                                  std::uint32_t sets) const;
  // Mean over the bank's latency map entries.
  double mean_way_latency(std::uint32_t bank) const;

 private:
  struct Bank {
    LatencyMap latmap;
    CacheState state;
    WayGroups way_groups;
    std::optional<DisabledGroups> disabled;
    UniformGroups uniform;
    SegmentTable segments;
  };
  void build_banks(std::vector<LatencyMap> maps);

  LlcConfig config_;
  CacheGeometry bank_geometry_;
  std::vector<Bank> banks_;
};

// Per-bank latency maps for a configuration; bank b > 0 of a multi-bank
// cache uses a seed derived from the base seed and b.
std::vector<LatencyMap> sample_bank_maps(const LlcConfig& config);

}  // namespace cnfet
