#include "cnfet/nuca.hpp"

#include <string>

#include "cnfet/errors.hpp"

namespace cnfet {

MeshTopology MeshTopology::grid(std::uint32_t rows, std::uint32_t cols, std::uint32_t num_cores) {
  if (rows == 0 || cols == 0) throw ConfigError("mesh needs at least one router");
  MeshTopology t;
  t.rows = rows;
  t.cols = cols;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) t.bank_coords.push_back({r, c});
  }
  const MeshCoord corners[] = {{0, 0}, {0, cols - 1}, {rows - 1, 0}, {rows - 1, cols - 1}};
  for (std::uint32_t i = 0; i < num_cores; ++i) t.core_coords.push_back(corners[i % 4]);
  t.validate();
  return t;
}

void MeshTopology::validate() const {
  if (bank_coords.empty()) throw ConfigError("mesh has no banks");
  for (const auto& c : bank_coords) {
    if (c.row >= rows || c.col >= cols) throw ConfigError("bank coordinate outside the mesh");
  }
  for (const auto& c : core_coords) {
    if (c.row >= rows || c.col >= cols) throw ConfigError("core coordinate outside the mesh");
  }
  for (std::size_t i = 0; i < bank_coords.size(); ++i) {
    for (std::size_t j = i + 1; j < bank_coords.size(); ++j) {
      if (bank_coords[i] == bank_coords[j]) throw ConfigError("two banks share a router");
    }
  }
}

std::uint32_t noc_latency(const MeshTopology& topology, std::uint32_t core_id,
                          std::uint32_t bank_id) {
  if (core_id >= topology.core_coords.size()) {
    throw ConfigError("unknown core id " + std::to_string(core_id));
  }
  if (bank_id >= topology.bank_coords.size()) {
    throw ConfigError("unknown bank id " + std::to_string(bank_id));
  }
  const auto& a = topology.core_coords[core_id];
  const auto& b = topology.bank_coords[bank_id];
  const std::uint32_t dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const std::uint32_t dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return topology.round_trip_factor * (dr + dc) * topology.cycles_per_hop;
}

std::uint32_t bank_of(std::uint64_t address, std::uint32_t num_banks,
                      const CacheGeometry& bank_geometry) {
  if (num_banks <= 1) return 0;
  log2_exact(num_banks);
  const unsigned shift = bank_geometry.offset_bits() + bank_geometry.set_bits();
  return static_cast<std::uint32_t>((address >> shift) & (num_banks - 1));
}

}  // namespace cnfet
