#include "cnfet/llc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "cnfet/errors.hpp"
#include "cnfet/random.hpp"

namespace cnfet {

CacheGeometry LlcConfig::bank_geometry() const {
  const auto banks = num_banks();
  if (geometry.capacity_bytes % banks != 0) throw ConfigError("capacity does not split into banks");
  return CacheGeometry::make(geometry.capacity_bytes / banks, geometry.num_ways,
                             geometry.line_bytes);
}

void LlcConfig::validate() const {
  geometry.validate();
  cnt.validate();
  if (const auto need = required_layout(policy); need && *need != layout) {
    throw ConfigError(fmt::format("policy {} requires a {} layout", to_string(policy),
                                  to_string(*need)));
  }
  if (nuca) {
    topology.validate();
    if (!is_power_of_two(topology.num_banks())) throw ConfigError("bank count must be a power of two");
  }
  const auto bank = bank_geometry();
  if (policy == PolicyKind::VASA_DS &&
      (ways_per_group == 0 || bank.num_ways % ways_per_group != 0)) {
    throw ConfigError("ways_per_group must divide the associativity");
  }
  if (policy == PolicyKind::VAWA_UG &&
      (uniform_groups == 0 || bank.num_sets % uniform_groups != 0)) {
    throw ConfigError("uniform group count must divide the sets per bank");
  }
  if (policy == PolicyKind::VAWA_NG) {
    if (ng_granularity == 0 || bank.num_sets % ng_granularity != 0) {
      throw ConfigError("segment granularity must divide the sets per bank");
    }
    if (!std::is_sorted(ng_classes.begin(), ng_classes.end()) ||
        std::adjacent_find(ng_classes.begin(), ng_classes.end()) != ng_classes.end()) {
      throw ConfigError("latency classes must be strictly ascending");
    }
  }
}

std::vector<LatencyMap> sample_bank_maps(const LlcConfig& config) {
  const auto banks = config.num_banks();
  const auto geometry = config.bank_geometry();
  std::vector<LatencyMap> maps;
  maps.reserve(banks);
  for (std::uint32_t b = 0; b < banks; ++b) {
    CntParams params = config.cnt;
    if (banks > 1) params.seed = mix_seed(config.cnt.seed, b);
    maps.push_back(build_latency_map(geometry, config.layout, params, config.timing));
  }
  return maps;
}

Llc::Llc(const LlcConfig& config) : Llc(config, sample_bank_maps(config)) {}

Llc::Llc(const LlcConfig& config, std::vector<LatencyMap> maps)
    : config_(config), bank_geometry_(config.bank_geometry()) {
  config_.validate();
  if (maps.size() != config_.num_banks()) throw ConfigError("one latency map per bank required");
  build_banks(std::move(maps));
}

void Llc::build_banks(std::vector<LatencyMap> maps) {
  banks_.reserve(maps.size());
  for (auto& map : maps) {
    map.validate();
    if (map.layout != config_.layout || map.geometry != bank_geometry_) {
      throw ConfigError("latency map does not match the bank layout or geometry");
    }
    Bank bank{std::move(map), CacheState(bank_geometry_), {}, std::nullopt, {}, {}};
    switch (config_.policy) {
      case PolicyKind::BaselinePD:
        bank.disabled = DisabledGroups::worst_of(bank.latmap);
        break;
      case PolicyKind::VASA_DS:
        bank.way_groups = build_way_groups(bank.latmap, config_.ways_per_group);
        break;
      case PolicyKind::VAWA_UG:
        bank.uniform = build_uniform_groups(bank.latmap, config_.uniform_groups);
        break;
      case PolicyKind::VAWA_NG:
        bank.segments = build_nonuniform_groups(bank.latmap, config_.ng_classes,
                                                config_.ng_budget, config_.ng_granularity);
        break;
      default:
        break;
    }
    banks_.push_back(std::move(bank));
  }
}

std::uint32_t Llc::bank_of_address(std::uint64_t paddr) const {
  return bank_of(paddr, num_banks(), bank_geometry_);
}

std::uint64_t Llc::local_address(std::uint64_t paddr) const {
  if (num_banks() == 1) return paddr;
  const unsigned low = bank_geometry_.offset_bits() + bank_geometry_.set_bits();
  const unsigned bank_bits = log2_exact(num_banks());
  const std::uint64_t low_mask = (std::uint64_t{1} << low) - 1;
  return ((paddr >> (low + bank_bits)) << low) | (paddr & low_mask);
}

AccessResult Llc::access(std::uint32_t core, const Request& request) {
  const auto b = bank_of_address(request.addr);
  Bank& bank = banks_[b];
  Request local = request;
  local.addr = local_address(request.addr);
  AccessResult result;
  switch (config_.policy) {
    case PolicyKind::BaselineWorst:
      result = access_baseline(bank.state, local, bank.latmap, bank.latmap.max_cycles);
      break;
    case PolicyKind::BaselinePD:
      result = access_partial_disable(bank.state, local, bank.latmap, *bank.disabled);
      break;
    case PolicyKind::VASA:
      result = access_vasa(bank.state, local, bank.latmap);
      break;
    case PolicyKind::VASA_DS:
      result = access_vasa_ds(bank.state, local, bank.latmap, bank.way_groups);
      break;
    case PolicyKind::VAWA_UG:
      result = access_vawa(bank.state, local, bank.uniform);
      break;
    case PolicyKind::VAWA_NG:
      result = access_vawa(bank.state, local, bank.segments);
      break;
  }
  if (config_.nuca) {
    result.noc_cycles = noc_latency(config_.topology, core, b);
    result.latency_cycles += result.noc_cycles;
  }
  return result;
}

double Llc::mean_way_latency(std::uint32_t bank) const {
  const auto& lat = banks_[bank].latmap.latencies;
  return double(std::accumulate(lat.begin(), lat.end(), std::uint64_t{0})) / double(lat.size());
}

std::uint32_t Llc::frame_hit_latency(std::uint32_t bank, std::uint32_t first_set,
                                     std::uint32_t sets) const {
  const Bank& bk = banks_[bank];
  std::uint32_t worst = 0;
  switch (config_.policy) {
    case PolicyKind::BaselineWorst:
      return bk.latmap.max_cycles;
    case PolicyKind::BaselinePD:
      return bk.disabled->hit_latency();
    case PolicyKind::VASA:
    case PolicyKind::VASA_DS:
      return static_cast<std::uint32_t>(std::lround(mean_way_latency(bank)));
    case PolicyKind::VAWA_UG:
      for (std::uint32_t s = first_set; s < first_set + sets; ++s) {
        worst = std::max(worst, bk.uniform.lookup(s));
      }
      return worst;
    case PolicyKind::VAWA_NG:
      for (std::uint32_t s = first_set; s < first_set + sets; ++s) {
        worst = std::max(worst, bk.segments.lookup(s));
      }
      return worst;
  }
  return bk.latmap.max_cycles;
}

}  // namespace cnfet
