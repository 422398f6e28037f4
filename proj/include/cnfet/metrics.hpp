#pragma once

// Latency, miss-rate, AMAT and energy accounting for one run.

#include <cstdint>
#include <iosfwd>
#include <map>

#include "cnfet/cache.hpp"

namespace cnfet {

struct EnergyParams {
  double static_power_units_per_cycle = 1.0;
  double e_read_units = 1.0;
  double e_write_units = 1.0;
  std::uint32_t memory_latency_cycles = 30;

  void validate() const;
};

struct RunStats {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t shuffle_moves = 0;
  std::uint64_t writebacks = 0;
  std::uint64_t bypasses = 0;
  std::uint64_t hit_cycles = 0;  // sum of hit latencies
  std::uint64_t noc_cycles = 0;
  // Sum of hit latencies plus memory_latency (and NoC cycles) per miss.
  std::uint64_t total_llc_cycles = 0;
  std::map<std::uint32_t, std::uint64_t> hit_latency_histogram;

  double miss_rate() const { return accesses ? double(misses) / double(accesses) : 0.0; }
  double mean_hit_latency() const { return hits ? double(hit_cycles) / double(hits) : 0.0; }

  // Counter-wise addition.
  RunStats& operator+=(const RunStats& other);
};

void record_access(RunStats& stats, const Request& request, const AccessResult& result,
                   const EnergyParams& params);

// Mean hit latency + miss rate * memory latency. Throws std::domain_error
// when there were no accesses.
double amat(const RunStats& stats, const EnergyParams& params);

struct Energy {
  double static_units = 0.0;
  double dynamic_units = 0.0;
  double total() const { return static_units + dynamic_units; }
};

// static = total_cycles * static power; dynamic = e_read * reads +
// e_write * (writes + shuffle moves).
Energy energy(const RunStats& stats, const EnergyParams& params, std::uint64_t total_cycles);
inline Energy energy(const RunStats& stats, const EnergyParams& params) {
  return energy(stats, params, stats.total_llc_cycles);
}

// `cycles,count` rows.
void write_histogram(std::ostream& out, const RunStats& stats);

}  // namespace cnfet
