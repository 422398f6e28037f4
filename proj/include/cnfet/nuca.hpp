#pragma once

// NUCA: banks on a 2-D mesh with X-Y routing, and the unified latency
// total = bank hit latency + NoC latency(core, bank).

#include <cstdint>
#include <vector>

#include "cnfet/geometry.hpp"

namespace cnfet {

struct MeshCoord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend bool operator==(const MeshCoord&, const MeshCoord&) = default;
};

struct MeshTopology {
  std::uint32_t rows = 2;
  std::uint32_t cols = 4;
  std::vector<MeshCoord> bank_coords;
  std::vector<MeshCoord> core_coords;
  std::uint32_t cycles_per_hop = 1;
  std::uint32_t round_trip_factor = 2;

  // rows x cols banks in row-major order, cores on the corner routers.
  static MeshTopology grid(std::uint32_t rows, std::uint32_t cols, std::uint32_t num_cores);

  std::uint32_t num_banks() const { return static_cast<std::uint32_t>(bank_coords.size()); }
  std::uint32_t num_cores() const { return static_cast<std::uint32_t>(core_coords.size()); }
  void validate() const;
};

// round_trip_factor * (|drow| + |dcol|) * cycles_per_hop. Throws ConfigError
// for unknown ids.
std::uint32_t noc_latency(const MeshTopology& topology, std::uint32_t core_id,
                          std::uint32_t bank_id);

// The log2(num_banks) address bits right above the bank's set-index bits.
std::uint32_t bank_of(std::uint64_t address, std::uint32_t num_banks,
                      const CacheGeometry& bank_geometry);

struct UnifiedLatency {
  std::uint32_t hit_lat = 0;
  std::uint32_t noc_lat = 0;
  std::uint32_t total() const { return hit_lat + noc_lat; }
};

inline UnifiedLatency unified_latency(std::uint32_t hit_lat, const MeshTopology& topology,
                                      std::uint32_t core_id, std::uint32_t bank_id) {
  return {hit_lat, noc_latency(topology, core_id, bank_id)};
}

}  // namespace cnfet
