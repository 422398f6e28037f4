#include "cnfet/metrics.hpp"

#include <ostream>
#include <stdexcept>

#include <fmt/ostream.h>

#include "cnfet/errors.hpp"

namespace cnfet {

void EnergyParams::validate() const {
  if (static_power_units_per_cycle < 0 || e_read_units < 0 || e_write_units < 0) {
    throw ConfigError("energy parameters must be non-negative");
  }
}

RunStats& RunStats::operator+=(const RunStats& o) {
  accesses += o.accesses;
  hits += o.hits;
  misses += o.misses;
  reads += o.reads;
  writes += o.writes;
  shuffle_moves += o.shuffle_moves;
  writebacks += o.writebacks;
  bypasses += o.bypasses;
  hit_cycles += o.hit_cycles;
  noc_cycles += o.noc_cycles;
  total_llc_cycles += o.total_llc_cycles;
  for (const auto& [cycles, n] : o.hit_latency_histogram) hit_latency_histogram[cycles] += n;
  return *this;
}

void record_access(RunStats& stats, const Request& request, const AccessResult& result,
                   const EnergyParams& params) {
  ++stats.accesses;
  if (request.op == Op::Read) {
    ++stats.reads;
  } else {
    ++stats.writes;
  }
  stats.shuffle_moves += result.shuffle_moves;
  stats.noc_cycles += result.noc_cycles;
  if (result.writeback) ++stats.writebacks;
  if (result.bypassed) ++stats.bypasses;
  if (result.hit) {
    ++stats.hits;
    stats.hit_cycles += result.latency_cycles;
    stats.total_llc_cycles += result.latency_cycles;
    ++stats.hit_latency_histogram[result.latency_cycles];
  } else {
    ++stats.misses;
    stats.total_llc_cycles += params.memory_latency_cycles + result.noc_cycles;
  }
}

double amat(const RunStats& stats, const EnergyParams& params) {
  if (stats.accesses == 0) throw std::domain_error("AMAT of an empty run");
  return stats.mean_hit_latency() + stats.miss_rate() * params.memory_latency_cycles;
}

Energy energy(const RunStats& stats, const EnergyParams& params, std::uint64_t total_cycles) {
  Energy e;
  e.static_units = double(total_cycles) * params.static_power_units_per_cycle;
  e.dynamic_units = params.e_read_units * double(stats.reads) +
                    params.e_write_units * double(stats.writes + stats.shuffle_moves);
  return e;
}

void write_histogram(std::ostream& out, const RunStats& stats) {
  out << "cycles,count\n";
  for (const auto& [cycles, n] : stats.hit_latency_histogram) fmt::print(out, "{},{}\n", cycles, n);
}

}  // namespace cnfet
