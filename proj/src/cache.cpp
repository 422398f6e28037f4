#include "cnfet/cache.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "cnfet/errors.hpp"
#include "cnfet/kernels.hpp"

namespace cnfet {

namespace {
constexpr std::uint32_t kUnranked = std::numeric_limits<std::uint32_t>::max();
}

std::string_view to_string(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::BaselineWorst: return "baseline";
    case PolicyKind::BaselinePD: return "baseline-pd";
    case PolicyKind::VASA: return "vasa";
    case PolicyKind::VASA_DS: return "vasa-ds";
    case PolicyKind::VAWA_UG: return "vawa-ug";
    case PolicyKind::VAWA_NG: return "vawa-ng";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view text) {
  for (auto p : {PolicyKind::BaselineWorst, PolicyKind::BaselinePD, PolicyKind::VASA,
                 PolicyKind::VASA_DS, PolicyKind::VAWA_UG, PolicyKind::VAWA_NG}) {
    if (text == to_string(p)) return p;
  }
  throw ConfigError("unknown policy '" + std::string(text) + "'");
}

std::optional<LayoutKind> required_layout(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::VASA:
    case PolicyKind::VASA_DS: return LayoutKind::SetAligned;
    case PolicyKind::VAWA_UG:
    case PolicyKind::VAWA_NG: return LayoutKind::WayAligned;
    default: return std::nullopt;
  }
}

CacheState::CacheState(const CacheGeometry& geometry)
    : geometry_(geometry),
      lines_(geometry.num_lines()),
      tags_(geometry.num_lines(), kernels::kInvalidTag),
      all_ways_(geometry.num_ways) {
  geometry_.validate();
  std::iota(all_ways_.begin(), all_ways_.end(), 0u);
}

int CacheState::find(std::uint32_t set, std::uint64_t tag) const {
  return kernels::active().find_tag(tags_.data() + index(set, 0), geometry_.num_ways, tag);
}

void CacheState::age_more_recent(std::uint32_t set, std::uint32_t way,
                                 std::span<const std::uint32_t> scope,
                                 std::uint32_t previous_rank) {
  for (auto w : scope) {
    if (w == way) continue;
    auto& l = lines_[index(set, w)];
    if (l.valid && l.lru_rank < previous_rank) {
      ++l.lru_rank;
      l.priority_bit = 1;
    }
  }
  auto& target = lines_[index(set, way)];
  target.lru_rank = 0;
  target.priority_bit = 0;
}

void CacheState::touch(std::uint32_t set, std::uint32_t way, std::span<const std::uint32_t> scope) {
  age_more_recent(set, way, scope, lines_[index(set, way)].lru_rank);
}

void CacheState::replace(std::uint32_t set, std::uint32_t way, const CacheLine& incoming,
                         std::span<const std::uint32_t> scope) {
  const auto& current = lines_[index(set, way)];
  const std::uint32_t previous = current.valid ? current.lru_rank : kUnranked;
  lines_[index(set, way)] = incoming;
  lines_[index(set, way)].valid = true;
  tags_[index(set, way)] = incoming.tag;
  age_more_recent(set, way, scope, previous);
}

void CacheState::vacate(std::uint32_t set, std::uint32_t way, std::span<const std::uint32_t> scope) {
  auto& current = lines_[index(set, way)];
  if (!current.valid) return;
  const std::uint32_t rank = current.lru_rank;
  for (auto w : scope) {
    auto& l = lines_[index(set, w)];
    if (w != way && l.valid && l.lru_rank > rank) {
      --l.lru_rank;
      l.priority_bit = l.lru_rank == 0 ? 0 : 1;
    }
  }
  current = CacheLine{};
  tags_[index(set, way)] = kernels::kInvalidTag;
}

void CacheState::write_data(std::uint32_t set, std::uint32_t way, std::uint64_t data) {
  auto& l = lines_[index(set, way)];
  l.data = data;
  l.dirty = true;
}

std::uint32_t CacheState::victim(std::uint32_t set, std::span<const std::uint32_t> scope) const {
  std::uint32_t best = scope.front();
  std::uint32_t best_rank = 0;
  for (auto w : scope) {
    const auto& l = lines_[index(set, w)];
    if (!l.valid) return w;
    if (l.lru_rank >= best_rank) {
      best_rank = l.lru_rank;
      best = w;
    }
  }
  return best;
}

std::vector<std::uint64_t> CacheState::valid_tags(std::uint32_t set) const {
  std::vector<std::uint64_t> out;
  for (const auto& l : set_lines(set)) {
    if (l.valid) out.push_back(l.tag);
  }
  return out;
}

AccessResult lru_access(CacheState& state, const Request& request,
                        std::span<const std::uint32_t> scope) {
  const auto& geometry = state.geometry();
  const auto parts = decompose(request.addr, geometry);
  AccessResult result;

  const int hit_way = state.find(parts.set_index, parts.tag);
  if (hit_way >= 0) {
    const auto way = static_cast<std::uint32_t>(hit_way);
    result.hit = true;
    result.way = way;
    state.touch(parts.set_index, way, scope);
    if (request.op == Op::Write) state.write_data(parts.set_index, way, request.data);
    result.data = state.line(parts.set_index, way).data;
    return result;
  }

  const std::uint32_t way = state.victim(parts.set_index, scope);
  const CacheLine& old = state.line(parts.set_index, way);
  if (old.valid) {
    result.evicted_tag = old.tag;
    if (old.dirty) {
      state.memory().write(line_address(old.tag, parts.set_index, geometry), old.data);
      result.writeback = true;
    }
  }
  CacheLine incoming;
  incoming.tag = parts.tag;
  incoming.dirty = request.op == Op::Write;
  incoming.data = request.op == Op::Write
                      ? request.data
                      : state.memory().read(line_address(parts.tag, parts.set_index, geometry));
  state.replace(parts.set_index, way, incoming, scope);
  result.way = way;
  result.data = incoming.data;
  return result;
}

AccessResult access_baseline(CacheState& state, const Request& request, const LatencyMap& latmap,
                             std::uint32_t worst_cycles) {
  (void)latmap;
  auto result = lru_access(state, request, state.all_ways());
  result.latency_cycles = std::max(worst_cycles, 1u);
  return result;
}

DisabledGroups::DisabledGroups(const LatencyMap& latmap, std::span<const std::uint32_t> disabled)
    : layout_(latmap.layout), mask_(latmap.size(), 0) {
  for (auto g : disabled) {
    if (g >= mask_.size()) throw ConfigError("disabled group index out of range");
    if (!mask_[g]) {
      mask_[g] = 1;
      ++count_;
    }
  }
  if (count_ == mask_.size()) throw ConfigError("partial disabling would disable every group");
  for (std::uint32_t g = 0; g < mask_.size(); ++g) {
    if (!mask_[g]) hit_latency_ = std::max(hit_latency_, latmap[g]);
  }
  const std::uint32_t ways = latmap.geometry.num_ways;
  for (std::uint32_t w = 0; w < ways; ++w) {
    if (layout_ == LayoutKind::WayAligned || !mask_[w]) enabled_ways_.push_back(w);
  }
}

DisabledGroups DisabledGroups::worst_of(const LatencyMap& latmap) {
  std::vector<std::uint32_t> worst;
  if (latmap.best() != latmap.worst()) {
    const auto w = latmap.worst();
    for (std::uint32_t g = 0; g < latmap.size(); ++g) {
      if (latmap[g] == w) worst.push_back(g);
    }
  }
  return DisabledGroups(latmap, worst);
}

AccessResult access_partial_disable(CacheState& state, const Request& request,
                                    const LatencyMap& latmap, const DisabledGroups& disabled) {
  (void)latmap;
  if (disabled.layout() == LayoutKind::WayAligned) {
    const auto parts = decompose(request.addr, state.geometry());
    if (disabled.disabled(parts.set_index)) {
      AccessResult result;
      result.bypassed = true;
      result.latency_cycles = disabled.hit_latency();
      const auto addr = line_address(parts.tag, parts.set_index, state.geometry());
      if (request.op == Op::Write) {
        state.memory().write(addr, request.data);
        result.data = request.data;
      } else {
        result.data = state.memory().read(addr);
      }
      return result;
    }
  }
  auto result = lru_access(state, request, disabled.enabled_ways());
  result.latency_cycles = disabled.hit_latency();
  return result;
}

}  // namespace cnfet
