#include "cnfet/vawa.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "cnfet/kernels.hpp"
#include "text_util.hpp"

namespace cnfet {

SegmentTable::SegmentTable(std::vector<ClassEntry> classes, std::uint32_t default_latency,
                           std::uint32_t budget_per_class, std::uint32_t num_sets)
    : classes_(std::move(classes)),
      default_latency_(default_latency),
      budget_(budget_per_class),
      num_sets_(num_sets) {
  std::vector<std::uint8_t> covered(num_sets, 0);
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    auto& entry = classes_[c];
    if (c > 0 && entry.latency_class <= classes_[c - 1].latency_class) {
      throw ConfigError("latency classes must be strictly ascending");
    }
    if (entry.segments.size() > budget_) throw ConfigError("class exceeds its register budget");
    std::sort(entry.segments.begin(), entry.segments.end(),
              [](const Segment& a, const Segment& b) { return a.start_set < b.start_set; });
    std::vector<std::int32_t> starts, ends;
    for (const auto& seg : entry.segments) {
      if (seg.start_set > seg.end_set || seg.end_set >= num_sets) {
        throw ConfigError("segment out of range");
      }
      if (seg.latency_class != entry.latency_class) throw ConfigError("segment class mismatch");
      for (std::uint32_t s = seg.start_set; s <= seg.end_set; ++s) {
        if (covered[s]) throw ConfigError("segments overlap");
        covered[s] = 1;
      }
      starts.push_back(static_cast<std::int32_t>(seg.start_set));
      ends.push_back(static_cast<std::int32_t>(seg.end_set));
    }
    starts_.push_back(std::move(starts));
    ends_.push_back(std::move(ends));
  }
}

std::uint32_t SegmentTable::lookup(std::uint32_t set_index) const {
  const auto& k = kernels::active();
  const auto index = static_cast<std::int32_t>(set_index);
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (k.in_any_range(starts_[c].data(), ends_[c].data(), starts_[c].size(), index)) {
      return classes_[c].latency_class;
    }
  }
  return default_latency_;
}

std::size_t SegmentTable::segment_count() const {
  std::size_t n = 0;
  for (const auto& c : classes_) n += c.segments.size();
  return n;
}

std::vector<Segment> SegmentTable::flat_segments() const {
  std::vector<Segment> out;
  for (const auto& c : classes_) out.insert(out.end(), c.segments.begin(), c.segments.end());
  return out;
}

UniformGroups build_uniform_groups(const LatencyMap& latmap, std::uint32_t num_groups) {
  if (latmap.layout != LayoutKind::WayAligned) throw ConfigError("uniform grouping needs a way-aligned map");
  const auto sets = static_cast<std::uint32_t>(latmap.size());
  if (num_groups == 0 || sets % num_groups != 0) {
    throw ConfigError(fmt::format("{} groups do not divide {} sets", num_groups, sets));
  }
  UniformGroups groups;
  groups.num_groups = num_groups;
  groups.sets_per_group = sets / num_groups;
  groups.group_latency.resize(num_groups);
  kernels::active().group_max(latmap.latencies.data(), sets, groups.sets_per_group,
                              groups.group_latency.data());
  return groups;
}

SegmentTable build_nonuniform_groups(const LatencyMap& latmap,
                                     std::span<const std::uint32_t> classes,
                                     std::uint32_t budget_per_class, std::uint32_t granularity) {
  if (latmap.layout != LayoutKind::WayAligned) throw ConfigError("segment grouping needs a way-aligned map");
  const auto sets = static_cast<std::uint32_t>(latmap.size());
  if (granularity == 0 || sets % granularity != 0) {
    throw ConfigError("grouping granularity must divide the number of sets");
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] >= latmap.max_cycles) throw ConfigError("latency classes must be below the worst latency");
    if (i > 0 && classes[i] <= classes[i - 1]) throw ConfigError("latency classes must be ascending");
  }

  const std::uint32_t blocks = sets / granularity;
  std::vector<std::uint32_t> block_latency(blocks);
  kernels::active().group_max(latmap.latencies.data(), sets, granularity, block_latency.data());
  std::vector<std::uint8_t> covered(blocks, 0);

  struct Run {
    std::uint32_t start, length;
  };
  std::vector<SegmentTable::ClassEntry> entries;
  for (auto cls : classes) {
    std::vector<Run> runs;
    for (std::uint32_t b = 0; b < blocks;) {
      if (covered[b] || block_latency[b] > cls) {
        ++b;
        continue;
      }
      std::uint32_t e = b;
      while (e + 1 < blocks && !covered[e + 1] && block_latency[e + 1] <= cls) ++e;
      runs.push_back({b, e - b + 1});
      b = e + 1;
    }
    std::stable_sort(runs.begin(), runs.end(),
                     [](const Run& a, const Run& b) { return a.length > b.length; });
    if (runs.size() > budget_per_class) runs.resize(budget_per_class);

    SegmentTable::ClassEntry entry;
    entry.latency_class = cls;
    for (const auto& r : runs) {
      for (std::uint32_t b = r.start; b < r.start + r.length; ++b) covered[b] = 1;
      entry.segments.push_back({r.start * granularity, (r.start + r.length) * granularity - 1, cls});
    }
    entries.push_back(std::move(entry));
  }
  return SegmentTable(std::move(entries), latmap.max_cycles, budget_per_class, sets);
}

std::uint32_t lookup_latency(const SegmentTable& table, std::uint32_t set_index) {
  return table.lookup(set_index);
}

std::uint64_t latency_savings(const SegmentTable& table) {
  std::uint64_t total = 0;
  for (const auto& c : table.classes()) {
    for (const auto& s : c.segments) {
      total += std::uint64_t{s.length()} * (table.default_latency() - c.latency_class);
    }
  }
  return total;
}

AccessResult access_vawa(CacheState& state, const Request& request, const SegmentTable& table) {
  auto result = lru_access(state, request, state.all_ways());
  const auto set = decompose(request.addr, state.geometry()).set_index;
  result.latency_cycles = result.hit ? table.lookup(set) : table.default_latency();
  return result;
}

AccessResult access_vawa(CacheState& state, const Request& request, const UniformGroups& groups) {
  auto result = lru_access(state, request, state.all_ways());
  const auto set = decompose(request.addr, state.geometry()).set_index;
  result.latency_cycles =
      result.hit ? groups.lookup(set)
                 : *std::max_element(groups.group_latency.begin(), groups.group_latency.end());
  return result;
}

void write_segment_table(std::ostream& out, const SegmentTable& table) {
  for (const auto& c : table.classes()) {
    for (const auto& s : c.segments) fmt::print(out, "{},{},{}\n", c.latency_class, s.start_set, s.end_set);
  }
  fmt::print(out, "default,{}\n", table.default_latency());
}

SegmentTable read_segment_table(std::istream& in, std::uint32_t num_sets) {
  std::map<std::uint32_t, std::vector<Segment>> by_class;
  std::optional<std::uint32_t> default_latency;
  text::for_each_data_line(in, [&](std::size_t line_no, std::string_view line) {
    const auto f = text::split(line, ',');
    if (f.size() == 2 && f[0] == "default") {
      default_latency = text::require_uint<std::uint32_t>(f[1], line_no, "default latency");
      return;
    }
    if (f.size() != 3) throw ParseError(line_no, "expected class,start,end");
    Segment s;
    s.latency_class = text::require_uint<std::uint32_t>(f[0], line_no, "class");
    s.start_set = text::require_uint<std::uint32_t>(f[1], line_no, "start");
    s.end_set = text::require_uint<std::uint32_t>(f[2], line_no, "end");
    by_class[s.latency_class].push_back(s);
  });
  if (!default_latency) throw ParseError(0, "segment table missing default line");
  std::vector<SegmentTable::ClassEntry> entries;
  std::uint32_t budget = 0;
  for (auto& [cls, segs] : by_class) {
    budget = std::max<std::uint32_t>(budget, static_cast<std::uint32_t>(segs.size()));
    entries.push_back({cls, std::move(segs)});
  }
  try {
    return SegmentTable(std::move(entries), *default_latency, budget, num_sets);
  } catch (const ConfigError& e) {
    throw ParseError(0, e.what());
  }
}

VawaOverhead vawa_overhead(const CacheGeometry& geometry, std::uint32_t uniform_groups,
                           std::size_t num_classes, std::uint32_t budget_per_class) {
  VawaOverhead o;
  o.uniform_register_bytes = (std::size_t{uniform_groups} * 4 + 7) / 8;
  o.nonuniform_index_registers = 2 * num_classes * budget_per_class;
  o.nonuniform_register_bytes = (o.nonuniform_index_registers * geometry.set_bits() + 7) / 8;
  return o;
}

}  // namespace cnfet
