#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cnfet {

// CNT growth direction relative to the array. SetAligned: growth parallel to
// the bitline, so latency varies per way. WayAligned: growth parallel to the
// wordline, so latency varies per set.
enum class LayoutKind { SetAligned, WayAligned };

std::string_view to_string(LayoutKind layout);
LayoutKind parse_layout(std::string_view text);

struct CacheGeometry {
  std::uint64_t capacity_bytes = 0;
  std::uint32_t num_ways = 0;
  std::uint32_t line_bytes = 0;
  std::uint32_t num_sets = 0;

  // Computes num_sets and validates; throws ConfigError.
  static CacheGeometry make(std::uint64_t capacity_bytes, std::uint32_t num_ways,
                            std::uint32_t line_bytes);

  void validate() const;

  unsigned offset_bits() const;
  unsigned set_bits() const;
  std::uint64_t num_lines() const { return std::uint64_t{num_sets} * num_ways; }

  // Number of aligned groups for a layout: ways for SetAligned, sets for WayAligned.
  std::uint32_t group_count(LayoutKind layout) const {
    return layout == LayoutKind::SetAligned ? num_ways : num_sets;
  }

  friend bool operator==(const CacheGeometry&, const CacheGeometry&) = default;
};

struct AddressParts {
  std::uint64_t tag = 0;
  std::uint32_t set_index = 0;
  std::uint32_t offset = 0;

  friend bool operator==(const AddressParts&, const AddressParts&) = default;
};

AddressParts decompose(std::uint64_t address, const CacheGeometry& geometry);

// Inverse of decompose for offset 0.
std::uint64_t line_address(std::uint64_t tag, std::uint32_t set_index,
                           const CacheGeometry& geometry);

bool is_power_of_two(std::uint64_t value);
unsigned log2_exact(std::uint64_t value);

}  // namespace cnfet
