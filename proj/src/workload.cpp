#include "cnfet/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "text_util.hpp"

namespace cnfet {

std::vector<TraceRecord> parse_trace(std::istream& in, std::uint32_t num_cores) {
  std::vector<TraceRecord> out;
  text::for_each_data_line(in, [&](std::size_t line_no, std::string_view line) {
    std::vector<std::string_view> tok;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      const auto start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      if (pos > start) tok.push_back(line.substr(start, pos - start));
    }
    if (tok.size() != 3 && tok.size() != 4) {
      throw ParseError(line_no, "expected '<core> <R|W> [<I|D>] <0xADDR>'");
    }
    TraceRecord r;
    r.line_no = line_no;
    r.core = text::require_uint<std::uint32_t>(tok[0], line_no, "core id");
    if (r.core >= num_cores) {
      throw ParseError(line_no, fmt::format("core {} out of range (num_cores={})", r.core, num_cores));
    }
    if (tok[1] == "R") {
      r.op = Op::Read;
    } else if (tok[1] == "W") {
      r.op = Op::Write;
    } else {
      throw ParseError(line_no, "op must be R or W");
    }
    if (tok.size() == 4) {
      if (tok[2] == "I") {
        r.kind = AccessKind::Instr;
      } else if (tok[2] == "D") {
        r.kind = AccessKind::Data;
      } else {
        throw ParseError(line_no, "kind must be I or D");
      }
    }
    const auto addr = tok.back();
    if (!addr.starts_with("0x") && !addr.starts_with("0X")) {
      throw ParseError(line_no, "address must be 0x-prefixed hex");
    }
    const auto value = text::parse_uint<std::uint64_t>(addr, 16);
    if (!value) throw ParseError(line_no, "bad address '" + std::string(addr) + "'");
    r.vaddr = *value;
    out.push_back(r);
  });
  return out;
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& r : records) {
    fmt::print(out, "{} {} {} 0x{:x}\n", r.core, r.op == Op::Read ? 'R' : 'W',
               r.kind == AccessKind::Instr ? 'I' : 'D', r.vaddr);
  }
}

L1FilterResult l1_filter(std::span<const TraceRecord> records, const L1Config& config,
                         std::uint32_t num_cores) {
  L1FilterResult result;
  result.per_core.resize(num_cores);
  if (!config.enabled) {
    result.llc_records.assign(records.begin(), records.end());
    return result;
  }
  std::vector<CacheState> icaches, dcaches;
  for (std::uint32_t c = 0; c < num_cores; ++c) {
    icaches.emplace_back(config.icache);
    dcaches.emplace_back(config.dcache);
  }
  for (const auto& r : records) {
    if (r.core >= num_cores) throw ConfigError("trace record core id out of range");
    const bool instr = r.kind == AccessKind::Instr;
    CacheState& cache = instr ? icaches[r.core] : dcaches[r.core];
    auto& stats = result.per_core[r.core];
    (instr ? stats.i_accesses : stats.d_accesses)++;

    const auto outcome = lru_access(cache, Request{r.vaddr, r.op, 0}, cache.all_ways());
    if (outcome.hit) continue;
    (instr ? stats.i_misses : stats.d_misses)++;
    ++result.misses;
    const auto& g = cache.geometry();
    const std::uint64_t mask = ~std::uint64_t{g.line_bytes - 1};
    result.llc_records.push_back({r.core, Op::Read, r.kind, r.vaddr & mask, r.line_no});
    if (outcome.writeback) {
      ++stats.writebacks;
      ++result.writebacks;
      const auto set = decompose(r.vaddr, g).set_index;
      result.llc_records.push_back(
          {r.core, Op::Write, AccessKind::Data, line_address(*outcome.evicted_tag, set, g), r.line_no});
    }
  }
  return result;
}

std::vector<double> zipf_pmf(std::uint64_t num_pages, double exponent) {
  std::vector<double> pmf(num_pages);
  double norm = 0.0;
  for (std::uint64_t r = 0; r < num_pages; ++r) {
    pmf[r] = std::pow(static_cast<double>(r + 1), -exponent);
    norm += pmf[r];
  }
  for (auto& p : pmf) p /= norm;
  return pmf;
}

std::vector<TraceRecord> generate_synthetic(const SyntheticSpec& spec) {
  if (spec.zipf_exponent < 0.0) throw ConfigError("zipf exponent must be non-negative");
  if (spec.num_cores == 0) throw ConfigError("num_cores must be positive");
  if (spec.num_pages == 0 && spec.length > 0) throw ConfigError("num_pages must be positive");
  if (spec.line_bytes == 0 || spec.page_bytes % spec.line_bytes != 0) {
    throw ConfigError("page size must be a multiple of the line size");
  }
  std::vector<TraceRecord> out;
  if (spec.length == 0) return out;
  out.reserve(spec.length);

  Rng rng(spec.seed);
  const auto pmf = zipf_pmf(spec.num_pages, spec.zipf_exponent);
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
  cdf.back() = 1.0;

  std::vector<std::uint64_t> page_of_rank(spec.num_pages);
  std::iota(page_of_rank.begin(), page_of_rank.end(), 0ull);
  if (spec.scatter_pages) std::shuffle(page_of_rank.begin(), page_of_rank.end(), rng);

  const std::uint64_t lines_per_page = spec.page_bytes / spec.line_bytes;
  std::vector<std::uint64_t> per_core_count(spec.num_cores, 0);
  std::vector<std::uint64_t> pc(spec.num_cores, 0);

  for (std::uint64_t i = 0; i < spec.length; ++i) {
    TraceRecord r;
    r.core = static_cast<std::uint32_t>(i % spec.num_cores);
    const bool fetch = spec.instr_stream && (per_core_count[r.core]++ % 2 == 0);
    if (fetch) {
      r.kind = AccessKind::Instr;
      r.op = Op::Read;
      const std::uint64_t line = pc[r.core]++ % spec.instr_lines;
      r.vaddr = spec.code_base + (std::uint64_t{r.core} * spec.instr_lines + line) * spec.line_bytes;
    } else {
      const double u = uniform01(rng);
      const auto rank = static_cast<std::uint64_t>(
          std::min<std::ptrdiff_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
                                   static_cast<std::ptrdiff_t>(cdf.size() - 1)));
      const std::uint64_t line = rng() % lines_per_page;
      r.op = uniform01(rng) < spec.read_fraction ? Op::Read : Op::Write;
      const std::uint64_t page =
          page_of_rank[rank] + (spec.private_pages ? r.core * spec.num_pages : 0);
      r.vaddr = spec.data_base + page * spec.page_bytes + line * spec.line_bytes;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace cnfet
