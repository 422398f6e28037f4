#include "cnfet/vasa.hpp"

#include <algorithm>
#include <numeric>

#include "cnfet/errors.hpp"

namespace cnfet {

WayGroups build_way_groups(const LatencyMap& latmap, std::uint32_t ways_per_group) {
  if (latmap.layout != LayoutKind::SetAligned) throw ConfigError("way groups need a set-aligned map");
  const std::uint32_t ways = latmap.geometry.num_ways;
  if (ways_per_group == 0 || ways % ways_per_group != 0) {
    throw ConfigError("ways_per_group must divide the associativity");
  }
  std::vector<std::uint32_t> order(ways);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return latmap[a] < latmap[b]; });

  WayGroups groups;
  groups.ways_per_group = ways_per_group;
  groups.group_of_way.assign(ways, 0);
  for (std::uint32_t g = 0; g < ways / ways_per_group; ++g) {
    std::vector<std::uint32_t> members(order.begin() + g * ways_per_group,
                                       order.begin() + (g + 1) * ways_per_group);
    std::sort(members.begin(), members.end());
    std::uint32_t lat = 0;
    for (auto w : members) {
      lat = std::max(lat, latmap[w]);
      groups.group_of_way[w] = g;
    }
    groups.groups.push_back(std::move(members));
    groups.group_latency.push_back(lat);
  }
  return groups;
}

DelayRegisters::DelayRegisters(const LatencyMap& latmap) {
  if (latmap.layout != LayoutKind::SetAligned) throw ConfigError("delay registers hold way latencies");
  for (auto c : latmap.latencies) {
    if (c >= (1u << kBitsPerRegister)) throw ConfigError("way latency does not fit a 4-bit register");
    values_.push_back(static_cast<std::uint8_t>(c));
  }
}

AccessResult access_vasa(CacheState& state, const Request& request, const LatencyMap& latmap) {
  auto result = lru_access(state, request, state.all_ways());
  result.latency_cycles = result.hit ? latmap[*result.way] : latmap.worst();
  return result;
}

AccessResult access_vasa_ds(CacheState& state, const Request& request, const LatencyMap& latmap,
                            const WayGroups& groups) {
  const auto& geometry = state.geometry();
  const auto parts = decompose(request.addr, geometry);
  const std::uint32_t set = parts.set_index;
  AccessResult result;

  const int found = state.find(set, parts.tag);
  if (found >= 0) {
    const auto hit_way = static_cast<std::uint32_t>(found);
    result.hit = true;
    result.way = hit_way;
    result.latency_cycles = latmap[hit_way];
    if (request.op == Op::Write) state.write_data(set, hit_way, request.data);
    result.data = state.line(set, hit_way).data;

    const std::uint32_t k = groups.group_of_way[hit_way];
    if (k == 0) {
      state.touch(set, hit_way, groups.groups[0]);
      return result;
    }
    // Promote into G0 and push each displaced low-priority block one group
    // down until the hit block's old slot is refilled.
    CacheLine carried = state.line(set, hit_way);
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint32_t slot = state.victim(set, groups.groups[j]);
      const CacheLine displaced = state.line(set, slot);
      state.replace(set, slot, carried, groups.groups[j]);
      ++result.shuffle_moves;
      if (!displaced.valid) {
        state.vacate(set, hit_way, groups.groups[k]);
        return result;
      }
      carried = displaced;
    }
    state.replace(set, hit_way, carried, groups.groups[k]);
    ++result.shuffle_moves;
    return result;
  }

  result.latency_cycles = latmap.worst();
  CacheLine carried;
  carried.valid = true;
  carried.tag = parts.tag;
  carried.dirty = request.op == Op::Write;
  carried.data = request.op == Op::Write
                     ? request.data
                     : state.memory().read(line_address(parts.tag, set, geometry));
  result.data = carried.data;
  for (std::uint32_t j = 0; j < groups.size(); ++j) {
    const std::uint32_t slot = state.victim(set, groups.groups[j]);
    if (j == 0) result.way = slot;
    const CacheLine displaced = state.line(set, slot);
    state.replace(set, slot, carried, groups.groups[j]);
    ++result.shuffle_moves;
    if (!displaced.valid) break;
    carried = displaced;
    if (j + 1 == groups.size()) {
      result.evicted_tag = carried.tag;
      if (carried.dirty) {
        state.memory().write(line_address(carried.tag, set, geometry), carried.data);
        result.writeback = true;
      }
    }
  }
  return result;
}

VasaOverhead vasa_overhead(const CacheGeometry& geometry, bool data_shuffling) {
  VasaOverhead o;
  o.delay_register_bytes = (geometry.num_ways * DelayRegisters::kBitsPerRegister + 7) / 8;
  if (data_shuffling) {
    o.priority_bits_per_set = geometry.num_ways;
    o.priority_metadata_bytes = (geometry.num_lines() + 7) / 8;
    o.shuffle_register_bytes = kShuffleRegisterFileBytes;
  }
  return o;
}

}  // namespace cnfet
