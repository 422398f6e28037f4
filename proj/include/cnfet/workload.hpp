#pragma once

// Trace ingestion, per-core L1 filtering, and synthetic workloads.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cnfet/cache.hpp"
#include "cnfet/geometry.hpp"

namespace cnfet {

enum class AccessKind : std::uint8_t { Data, Instr };

struct TraceRecord {
  std::uint32_t core = 0;
  Op op = Op::Read;
  AccessKind kind = AccessKind::Data;
  std::uint64_t vaddr = 0;
  std::size_t line_no = 0;  // source line, 0 for generated records

  friend bool operator==(const TraceRecord& a, const TraceRecord& b) {
    return a.core == b.core && a.op == b.op && a.kind == b.kind && a.vaddr == b.vaddr;
  }
};

// Grammar: `<core> <R|W> [<I|D>] <0xHEX>`, `#` comments, blank lines.
std::vector<TraceRecord> parse_trace(std::istream& in, std::uint32_t num_cores);
// Canonical form: kind always written, lower-case hex.
void write_trace(std::ostream& out, std::span<const TraceRecord> records);

struct L1Config {
  bool enabled = true;
  CacheGeometry icache = CacheGeometry::make(16 * 1024, 2, 64);
  CacheGeometry dcache = CacheGeometry::make(32 * 1024, 2, 64);
  std::uint32_t hit_cycles = 1;
};

struct L1CoreStats {
  std::uint64_t i_accesses = 0, i_misses = 0;
  std::uint64_t d_accesses = 0, d_misses = 0;
  std::uint64_t writebacks = 0;

  double i_miss_rate() const { return i_accesses ? double(i_misses) / i_accesses : 0.0; }
  double d_miss_rate() const { return d_accesses ? double(d_misses) / d_accesses : 0.0; }
};

struct L1FilterResult {
  std::vector<TraceRecord> llc_records;
  std::vector<L1CoreStats> per_core;
  std::uint64_t misses = 0;
  std::uint64_t writebacks = 0;
};

// Per-core LRU write-back L1s. Misses go to the LLC as line-aligned reads;
// dirty victims as writes carrying the triggering core id.
L1FilterResult l1_filter(std::span<const TraceRecord> records, const L1Config& config,
                         std::uint32_t num_cores);

struct SyntheticSpec {
  std::uint64_t num_pages = 1024;
  double zipf_exponent = 1.2;
  double read_fraction = 0.8;
  std::uint64_t length = 100000;
  std::uint32_t num_cores = 1;
  bool instr_stream = false;
  std::uint64_t instr_lines = 256;  // per-core code footprint
  std::uint64_t seed = 1;
  std::uint32_t page_bytes = 4096;
  std::uint32_t line_bytes = 64;
  std::uint64_t data_base = 0x10000000;
  std::uint64_t code_base = 0x40000000;
  // Randomly permutes page ranks so hot pages are not address-adjacent.
  bool scatter_pages = true;
  // Each core draws from its own num_pages pages instead of a shared pool.
  bool private_pages = false;
};

// Zipf-distributed page, uniform line within the page, round-robin cores;
// with instr_stream every other record of a core fetches the next line of
// its code loop.
std::vector<TraceRecord> generate_synthetic(const SyntheticSpec& spec);

// Probability of the page with popularity rank r (0-based).
std::vector<double> zipf_pmf(std::uint64_t num_pages, double exponent);

}  // namespace cnfet
