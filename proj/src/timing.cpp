#include "cnfet/timing.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "cnfet/kernels.hpp"
#include "text_util.hpp"

namespace cnfet {

std::uint32_t default_min_cycles(LayoutKind) { return 6; }
std::uint32_t default_max_cycles(LayoutKind layout) {
  return layout == LayoutKind::SetAligned ? 12 : 10;
}

void LatencyMap::validate() const {
  geometry.validate();
  if (min_cycles == 0 || min_cycles > max_cycles) throw ConfigError("need 1 <= min_cycles <= max_cycles");
  if (latencies.size() != geometry.group_count(layout)) {
    throw ConfigError(fmt::format("latency map has {} entries, layout needs {}", latencies.size(),
                                  geometry.group_count(layout)));
  }
  for (auto c : latencies) {
    if (c < min_cycles || c > max_cycles) throw ConfigError("latency outside [min_cycles, max_cycles]");
  }
  for (auto f : failed) {
    if (f >= latencies.size()) throw ConfigError("failed group index out of range");
  }
}

std::uint32_t LatencyMap::worst() const {
  return latencies.empty() ? max_cycles : *std::max_element(latencies.begin(), latencies.end());
}
std::uint32_t LatencyMap::best() const {
  return latencies.empty() ? min_cycles : *std::min_element(latencies.begin(), latencies.end());
}

double reference_strength(const CntParams& params, std::uint32_t stages_per_group) {
  const auto pmf = group_strength_pmf(params, stages_per_group);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    cumulative += pmf[k];
    if (cumulative >= 0.5) return k == 0 ? 1.0 : static_cast<double>(k);
  }
  return static_cast<double>(pmf.size() - 1);
}

std::vector<std::uint32_t> strengths_to_latency(std::span<const GroupStrength> strengths,
                                                double nominal_count, std::uint32_t min_cycles,
                                                std::uint32_t max_cycles) {
  if (!(nominal_count > 0.0)) throw ConfigError("nominal_count must be positive");
  if (min_cycles == 0 || min_cycles > max_cycles) throw ConfigError("need 1 <= min_cycles <= max_cycles");
  std::vector<double> counts(strengths.size());
  std::transform(strengths.begin(), strengths.end(), counts.begin(),
                 [](const GroupStrength& s) { return s.effective_count; });
  std::vector<std::uint32_t> out(strengths.size());
  kernels::active().quantize_latency(counts.data(), counts.size(), min_cycles * nominal_count,
                                     min_cycles, max_cycles, out.data());
  return out;
}

LatencyMap build_latency_map(const CacheGeometry& geometry, LayoutKind layout,
                             const CntParams& params, const TimingOptions& options) {
  geometry.validate();
  LatencyMap map;
  map.layout = layout;
  map.geometry = geometry;
  map.min_cycles = options.min_cycles.value_or(default_min_cycles(layout));
  map.max_cycles = options.max_cycles.value_or(default_max_cycles(layout));
  const double nominal =
      options.nominal_count.value_or(reference_strength(params, options.stages_per_group));

  Rng rng(params.seed);
  const auto strengths =
      sample_group_strengths(params, geometry.group_count(layout), options.stages_per_group, rng);
  map.latencies = strengths_to_latency(strengths, nominal, map.min_cycles, map.max_cycles);
  for (const auto& s : strengths) {
    if (s.failed) map.failed.push_back(s.group_index);
  }
  return map;
}

LatencySummary summarize(const LatencyMap& map) {
  LatencySummary s;
  if (map.latencies.empty()) return s;
  s.min = map.best();
  s.max = map.worst();
  double sum = 0.0;
  for (auto c : map.latencies) {
    ++s.histogram[c];
    sum += c;
  }
  s.mean = sum / static_cast<double>(map.latencies.size());
  std::uint64_t best_count = 0;
  for (const auto& [cycles, count] : s.histogram) {
    if (count > best_count) {
      best_count = count;
      s.mode = cycles;
    }
  }
  s.quantized_spread = static_cast<double>(s.max) / static_cast<double>(s.min);
  s.raw_spread = s.quantized_spread;
  return s;
}

LatencySummary summarize(const LatencyMap& map, std::span<const GroupStrength> strengths,
                         double nominal_count) {
  auto s = summarize(map);
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& g : strengths) {
    if (g.failed) continue;
    const double delay = nominal_count / g.effective_count;
    if (!any) {
      lo = hi = delay;
      any = true;
    }
    lo = std::min(lo, delay);
    hi = std::max(hi, delay);
  }
  if (any) s.raw_spread = hi / lo;
  return s;
}

void write_latency_map(std::ostream& out, const LatencyMap& map) {
  fmt::print(out, "# cnfet latency map\n");
  fmt::print(out, "layout={}\n", to_string(map.layout));
  fmt::print(out, "capacity_bytes={}\n", map.geometry.capacity_bytes);
  fmt::print(out, "num_ways={}\n", map.geometry.num_ways);
  fmt::print(out, "line_bytes={}\n", map.geometry.line_bytes);
  fmt::print(out, "num_sets={}\n", map.geometry.num_sets);
  fmt::print(out, "min_cycles={}\n", map.min_cycles);
  fmt::print(out, "max_cycles={}\n", map.max_cycles);
  fmt::print(out, "failed={}\n", fmt::join(map.failed, ";"));
  fmt::print(out, "index,cycles\n");
  for (std::size_t i = 0; i < map.latencies.size(); ++i) {
    fmt::print(out, "{},{}\n", i, map.latencies[i]);
  }
}

LatencyMap read_latency_map(std::istream& in) {
  LatencyMap map;
  bool in_rows = false;
  bool have_sets = false;
  text::for_each_data_line(in, [&](std::size_t line_no, std::string_view line) {
    if (!in_rows) {
      if (line == "index,cycles") {
        in_rows = true;
        return;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value header");
      const auto key = text::trim(line.substr(0, eq));
      const auto value = text::trim(line.substr(eq + 1));
      if (key == "layout") {
        try {
          map.layout = parse_layout(value);
        } catch (const ConfigError& e) {
          throw ParseError(line_no, e.what());
        }
      } else if (key == "capacity_bytes") {
        map.geometry.capacity_bytes = text::require_uint<std::uint64_t>(value, line_no, key);
      } else if (key == "num_ways") {
        map.geometry.num_ways = text::require_uint<std::uint32_t>(value, line_no, key);
      } else if (key == "line_bytes") {
        map.geometry.line_bytes = text::require_uint<std::uint32_t>(value, line_no, key);
      } else if (key == "num_sets") {
        map.geometry.num_sets = text::require_uint<std::uint32_t>(value, line_no, key);
        have_sets = true;
      } else if (key == "min_cycles") {
        map.min_cycles = text::require_uint<std::uint32_t>(value, line_no, key);
      } else if (key == "max_cycles") {
        map.max_cycles = text::require_uint<std::uint32_t>(value, line_no, key);
      } else if (key == "failed") {
        if (!value.empty()) {
          for (auto f : text::split(value, ';')) {
            map.failed.push_back(text::require_uint<std::uint32_t>(f, line_no, "failed index"));
          }
        }
      } else {
        throw ParseError(line_no, "unknown header key '" + std::string(key) + "'");
      }
      return;
    }
    const auto fields = text::split(line, ',');
    if (fields.size() != 2) throw ParseError(line_no, "expected index,cycles");
    const auto index = text::require_uint<std::size_t>(fields[0], line_no, "index");
    if (index != map.latencies.size()) throw ParseError(line_no, "indices must be consecutive from 0");
    map.latencies.push_back(text::require_uint<std::uint32_t>(fields[1], line_no, "cycles"));
  });
  if (!in_rows || !have_sets) throw ParseError(0, "latency map missing header or rows");
  try {
    map.validate();
  } catch (const ConfigError& e) {
    throw ParseError(0, e.what());
  }
  return map;
}

}  // namespace cnfet
