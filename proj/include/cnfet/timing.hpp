#pragma once

// Drive strength to cycle latency, and the per-layout latency map.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cnfet/geometry.hpp"
#include "cnfet/variation.hpp"

namespace cnfet {

struct LatencyMap {
  LayoutKind layout = LayoutKind::SetAligned;
  CacheGeometry geometry;
  std::uint32_t min_cycles = 6;
  std::uint32_t max_cycles = 12;
  // One entry per way (SetAligned) or per set (WayAligned).
  std::vector<std::uint32_t> latencies;
  // Indices of groups with zero conducting CNTs; they sit at max_cycles.
  std::vector<std::uint32_t> failed;

  void validate() const;
  std::size_t size() const { return latencies.size(); }
  std::uint32_t operator[](std::size_t i) const { return latencies[i]; }
  std::uint32_t worst() const;
  std::uint32_t best() const;

  friend bool operator==(const LatencyMap&, const LatencyMap&) = default;
};

// Default cycle range per layout: [6,12] set aligned, [6,10] way aligned.
std::uint32_t default_min_cycles(LayoutKind layout);
std::uint32_t default_max_cycles(LayoutKind layout);

// Strength at which a group runs at min_cycles: the median of the exact
// group-strength distribution. Degenerates to round(mu) without variation.
double reference_strength(const CntParams& params, std::uint32_t stages_per_group);

// latency = clamp(ceil(min_cycles * nominal / effective), min, max);
// effective == 0 maps to max_cycles. Runs on the active SIMD kernel.
std::vector<std::uint32_t> strengths_to_latency(std::span<const GroupStrength> strengths,
                                                double nominal_count, std::uint32_t min_cycles,
                                                std::uint32_t max_cycles);

struct TimingOptions {
  std::uint32_t stages_per_group = kDefaultStagesPerGroup;
  std::optional<std::uint32_t> min_cycles;  // layout default when unset
  std::optional<std::uint32_t> max_cycles;
  std::optional<double> nominal_count;      // reference_strength when unset
};

LatencyMap build_latency_map(const CacheGeometry& geometry, LayoutKind layout,
                             const CntParams& params, const TimingOptions& options = {});

// Distribution summary of a map plus the unquantised spread (worst/best of
// nominal/effective over non-failed groups).
struct LatencySummary {
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  std::uint32_t mode = 0;
  double mean = 0.0;
  std::map<std::uint32_t, std::uint64_t> histogram;
  double raw_spread = 0.0;        // max/min normalised delay before quantisation
  double quantized_spread = 0.0;  // max/min cycles
};

LatencySummary summarize(const LatencyMap& map);
LatencySummary summarize(const LatencyMap& map, std::span<const GroupStrength> strengths,
                         double nominal_count);

// Header of `key=value` lines, then `index,cycles` per group. Round-trips
// byte for byte.
void write_latency_map(std::ostream& out, const LatencyMap& map);
LatencyMap read_latency_map(std::istream& in);

}  // namespace cnfet
