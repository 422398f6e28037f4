#include "cnfet/geometry.hpp"

#include <bit>
#include <string>

#include "cnfet/errors.hpp"

namespace cnfet {

std::string_view to_string(LayoutKind layout) {
  return layout == LayoutKind::SetAligned ? "set_aligned" : "way_aligned";
}

LayoutKind parse_layout(std::string_view text) {
  if (text == "set_aligned" || text == "set-aligned" || text == "set") return LayoutKind::SetAligned;
  if (text == "way_aligned" || text == "way-aligned" || text == "way") return LayoutKind::WayAligned;
  throw ConfigError("unknown layout '" + std::string(text) + "'");
}

bool is_power_of_two(std::uint64_t value) { return std::has_single_bit(value); }

unsigned log2_exact(std::uint64_t value) {
  if (!is_power_of_two(value)) {
    throw ConfigError(std::to_string(value) + " is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(value));
}

CacheGeometry CacheGeometry::make(std::uint64_t capacity_bytes, std::uint32_t num_ways,
                                  std::uint32_t line_bytes) {
  if (num_ways == 0 || line_bytes == 0) throw ConfigError("ways and line size must be nonzero");
  CacheGeometry g;
  g.capacity_bytes = capacity_bytes;
  g.num_ways = num_ways;
  g.line_bytes = line_bytes;
  const std::uint64_t per_set = std::uint64_t{line_bytes} * num_ways;
  if (capacity_bytes == 0 || capacity_bytes % per_set != 0) {
    throw ConfigError("capacity " + std::to_string(capacity_bytes) +
                      " is not a multiple of line_bytes * ways");
  }
  g.num_sets = static_cast<std::uint32_t>(capacity_bytes / per_set);
  g.validate();
  return g;
}

void CacheGeometry::validate() const {
  if (!is_power_of_two(capacity_bytes) || !is_power_of_two(num_ways) ||
      !is_power_of_two(line_bytes) || !is_power_of_two(num_sets)) {
    throw ConfigError("cache geometry fields must be powers of two");
  }
  if (std::uint64_t{num_sets} * line_bytes * num_ways != capacity_bytes) {
    throw ConfigError("num_sets does not match capacity / (line_bytes * ways)");
  }
}

unsigned CacheGeometry::offset_bits() const { return static_cast<unsigned>(std::countr_zero(line_bytes)); }
unsigned CacheGeometry::set_bits() const { return static_cast<unsigned>(std::countr_zero(num_sets)); }

AddressParts decompose(std::uint64_t address, const CacheGeometry& geometry) {
  const unsigned ob = geometry.offset_bits();
  const unsigned sb = geometry.set_bits();
  AddressParts parts;
  parts.offset = static_cast<std::uint32_t>(address & (std::uint64_t{geometry.line_bytes} - 1));
  parts.set_index = static_cast<std::uint32_t>((address >> ob) & (std::uint64_t{geometry.num_sets} - 1));
  parts.tag = address >> (ob + sb);
  return parts;
}

std::uint64_t line_address(std::uint64_t tag, std::uint32_t set_index,
                           const CacheGeometry& geometry) {
  return ((tag << geometry.set_bits()) | set_index) << geometry.offset_bits();
}

}  // namespace cnfet
