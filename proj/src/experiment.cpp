#include "cnfet/experiment.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "cnfet/vasa.hpp"
#include "cnfet/vawa.hpp"
#include "text_util.hpp"

namespace cnfet {

namespace {

constexpr std::array<std::string_view, 53> kKeys = {
    "experiment.name",
    "cache.capacity_bytes",
    "cache.ways",
    "cache.line_bytes",
    "cache.layout",
    "cache.policy",
    "cnt.mu",
    "cnt.sigma",
    "cnt.p_metallic",
    "cnt.p_remove_metallic",
    "cnt.p_remove_semiconducting",
    "cnt.p_align",
    "cnt.seed",
    "timing.stages",
    "timing.min_cycles",
    "timing.max_cycles",
    "timing.nominal_count",
    "timing.latency_map",
    "vasa.ways_per_group",
    "vawa.uniform_groups",
    "vawa.classes",
    "vawa.budget",
    "pagemap.mode",
    "pagemap.page_bytes",
    "pagemap.frames",
    "pagemap.count_raw",
    "nuca.enabled",
    "nuca.rows",
    "nuca.cols",
    "nuca.bank_coords",
    "nuca.core_coords",
    "nuca.cycles_per_hop",
    "nuca.round_trip_factor",
    "system.cores",
    "l1.enabled",
    "workload.trace",
    "workload.synthetic.num_pages",
    "workload.synthetic.zipf",
    "workload.synthetic.read_fraction",
    "workload.synthetic.length",
    "workload.synthetic.instr_stream",
    "workload.synthetic.instr_lines",
    "workload.synthetic.seed",
    "workload.synthetic.scatter_pages",
    "energy.static_power",
    "energy.e_read",
    "energy.e_write",
    "energy.memory_latency",
    "output.report",
    "output.histogram",
    "workload.synthetic.data_base",
    "workload.synthetic.code_base",
    "workload.synthetic.private_pages",
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError(fmt::format("bad value '{}' for {}", value, key));
}

template <typename T>
T as_uint(std::string_view key, std::string_view value) {
  const bool hex = value.starts_with("0x") || value.starts_with("0X");
  auto v = text::parse_uint<T>(value, hex ? 16 : 10);
  if (!v) bad_value(key, value);
  return *v;
}

double as_double(std::string_view key, std::string_view value) {
  auto v = text::parse_double(value);
  if (!v) bad_value(key, value);
  return *v;
}

bool as_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::vector<std::uint32_t> as_uint_list(std::string_view key, std::string_view value) {
  std::vector<std::uint32_t> out;
  if (text::trim(value).empty()) return out;
  for (auto part : text::split(value, ',')) out.push_back(as_uint<std::uint32_t>(key, part));
  return out;
}

std::vector<MeshCoord> as_coords(std::string_view key, std::string_view value) {
  std::vector<MeshCoord> out;
  for (auto part : text::split(value, ';')) {
    const auto rc = text::split(part, ':');
    if (rc.size() != 2) bad_value(key, value);
    out.push_back({as_uint<std::uint32_t>(key, rc[0]), as_uint<std::uint32_t>(key, rc[1])});
  }
  return out;
}

struct MeshOverrides {
  bool touched = false;
  std::optional<std::vector<MeshCoord>> banks;
  std::optional<std::vector<MeshCoord>> cores;
  std::optional<std::uint32_t> cycles_per_hop;
  std::optional<std::uint32_t> round_trip_factor;
};

void apply_one(ExperimentConfig& c, MeshOverrides& mesh, std::string_view key,
               std::string_view value, std::uint64_t& capacity, std::uint32_t& ways,
               std::uint32_t& line) {
  auto& llc = c.llc;
  auto& syn = c.synthetic;
  if (key == "experiment.name") c.name = std::string(value);
  else if (key == "cache.capacity_bytes") capacity = as_uint<std::uint64_t>(key, value);
  else if (key == "cache.ways") ways = as_uint<std::uint32_t>(key, value);
  else if (key == "cache.line_bytes") line = as_uint<std::uint32_t>(key, value);
  else if (key == "cache.layout") llc.layout = parse_layout(value);
  else if (key == "cache.policy") llc.policy = parse_policy(value);
  else if (key == "cnt.mu") llc.cnt.mu = as_double(key, value);
  else if (key == "cnt.sigma") llc.cnt.sigma = as_double(key, value);
  else if (key == "cnt.p_metallic") llc.cnt.p_metallic = as_double(key, value);
  else if (key == "cnt.p_remove_metallic") llc.cnt.p_remove_metallic = as_double(key, value);
  else if (key == "cnt.p_remove_semiconducting") llc.cnt.p_remove_semiconducting = as_double(key, value);
  else if (key == "cnt.p_align") llc.cnt.p_align = as_double(key, value);
  else if (key == "cnt.seed") llc.cnt.seed = as_uint<std::uint64_t>(key, value);
  else if (key == "timing.stages") llc.timing.stages_per_group = as_uint<std::uint32_t>(key, value);
  else if (key == "timing.min_cycles") llc.timing.min_cycles = as_uint<std::uint32_t>(key, value);
  else if (key == "timing.max_cycles") llc.timing.max_cycles = as_uint<std::uint32_t>(key, value);
  else if (key == "timing.nominal_count") llc.timing.nominal_count = as_double(key, value);
  else if (key == "timing.latency_map") c.latency_map_path = std::string(value);
  else if (key == "vasa.ways_per_group") llc.ways_per_group = as_uint<std::uint32_t>(key, value);
  else if (key == "vawa.uniform_groups") llc.uniform_groups = as_uint<std::uint32_t>(key, value);
  else if (key == "vawa.classes") llc.ng_classes = as_uint_list(key, value);
  else if (key == "vawa.budget") llc.ng_budget = as_uint<std::uint32_t>(key, value);
  else if (key == "pagemap.mode") c.pagemap = parse_pagemap_mode(value);
  else if (key == "pagemap.page_bytes") c.page_bytes = as_uint<std::uint32_t>(key, value);
  else if (key == "pagemap.frames") c.frames = as_uint<std::uint64_t>(key, value);
  else if (key == "pagemap.count_raw") c.profile_raw = as_bool(key, value);
  else if (key == "nuca.enabled") llc.nuca = as_bool(key, value);
  else if (key == "nuca.rows") { llc.topology.rows = as_uint<std::uint32_t>(key, value); mesh.touched = true; }
  else if (key == "nuca.cols") { llc.topology.cols = as_uint<std::uint32_t>(key, value); mesh.touched = true; }
  else if (key == "nuca.bank_coords") { mesh.banks = as_coords(key, value); mesh.touched = true; }
  else if (key == "nuca.core_coords") { mesh.cores = as_coords(key, value); mesh.touched = true; }
  else if (key == "nuca.cycles_per_hop") mesh.cycles_per_hop = as_uint<std::uint32_t>(key, value);
  else if (key == "nuca.round_trip_factor") mesh.round_trip_factor = as_uint<std::uint32_t>(key, value);
  else if (key == "system.cores") { c.num_cores = as_uint<std::uint32_t>(key, value); mesh.touched = true; }
  else if (key == "l1.enabled") c.l1.enabled = as_bool(key, value);
  else if (key == "workload.trace") c.trace_path = std::string(value);
  else if (key == "workload.synthetic.num_pages") syn.num_pages = as_uint<std::uint64_t>(key, value);
  else if (key == "workload.synthetic.zipf") syn.zipf_exponent = as_double(key, value);
  else if (key == "workload.synthetic.read_fraction") syn.read_fraction = as_double(key, value);
  else if (key == "workload.synthetic.length") syn.length = as_uint<std::uint64_t>(key, value);
  else if (key == "workload.synthetic.instr_stream") syn.instr_stream = as_bool(key, value);
  else if (key == "workload.synthetic.instr_lines") syn.instr_lines = as_uint<std::uint64_t>(key, value);
  else if (key == "workload.synthetic.seed") syn.seed = as_uint<std::uint64_t>(key, value);
  else if (key == "workload.synthetic.scatter_pages") syn.scatter_pages = as_bool(key, value);
  else if (key == "workload.synthetic.private_pages") syn.private_pages = as_bool(key, value);
  else if (key == "workload.synthetic.data_base") syn.data_base = as_uint<std::uint64_t>(key, value);
  else if (key == "workload.synthetic.code_base") syn.code_base = as_uint<std::uint64_t>(key, value);
  else if (key == "energy.static_power") c.energy.static_power_units_per_cycle = as_double(key, value);
  else if (key == "energy.e_read") c.energy.e_read_units = as_double(key, value);
  else if (key == "energy.e_write") c.energy.e_write_units = as_double(key, value);
  else if (key == "energy.memory_latency") c.energy.memory_latency_cycles = as_uint<std::uint32_t>(key, value);
  else if (key == "output.report") c.report_path = std::string(value);
  else if (key == "output.histogram") c.histogram_path = std::string(value);
  else throw ConfigError(fmt::format("unknown configuration key '{}'", key));
}

std::string fmt_double(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

std::string_view to_string(PageMapMode mode) {
  switch (mode) {
    case PageMapMode::None: return "none";
    case PageMapMode::PM: return "pm";
    case PageMapMode::UPM: return "upm";
  }
  return "none";
}

PageMapMode parse_pagemap_mode(std::string_view text) {
  if (text == "none" || text == "off") return PageMapMode::None;
  if (text == "pm") return PageMapMode::PM;
  if (text == "upm") return PageMapMode::UPM;
  throw ConfigError(fmt::format("unknown page mapping mode '{}'", text));
}

std::span<const std::string_view> config_keys() { return kKeys; }

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  text::for_each_data_line(in, [&](std::size_t line_no, std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const auto key = text::trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    out.emplace_back(std::string(key), std::string(text::trim(line.substr(eq + 1))));
  });
  return out;
}

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(fmt::format("expected key=value, got '{}'", text));
  }
  return {std::string(text::trim(text.substr(0, eq))),
          std::string(text::trim(text.substr(eq + 1)))};
}

ExperimentConfig apply_config(ExperimentConfig c, const KeyValues& pairs) {
  std::uint64_t capacity = c.llc.geometry.capacity_bytes;
  std::uint32_t ways = c.llc.geometry.num_ways;
  std::uint32_t line = c.llc.geometry.line_bytes;
  MeshOverrides mesh;
  for (const auto& [key, value] : pairs) apply_one(c, mesh, key, value, capacity, ways, line);

  c.llc.geometry = CacheGeometry::make(capacity, ways, line);
  if (mesh.touched) {
    auto topo = MeshTopology::grid(c.llc.topology.rows, c.llc.topology.cols,
                                   std::min<std::uint32_t>(c.num_cores, 4));
    topo.cycles_per_hop = c.llc.topology.cycles_per_hop;
    topo.round_trip_factor = c.llc.topology.round_trip_factor;
    if (mesh.banks) topo.bank_coords = *mesh.banks;
    if (mesh.cores) topo.core_coords = *mesh.cores;
    c.llc.topology = std::move(topo);
  }
  if (mesh.cycles_per_hop) c.llc.topology.cycles_per_hop = *mesh.cycles_per_hop;
  if (mesh.round_trip_factor) c.llc.topology.round_trip_factor = *mesh.round_trip_factor;
  c.synthetic.num_cores = c.num_cores;
  c.synthetic.line_bytes = line;
  c.synthetic.page_bytes = c.page_bytes;
  c.llc.ng_granularity =
      c.pagemap == PageMapMode::None ? 1 : page_granularity(c.page_bytes, line, ways);
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  llc.validate();
  energy.validate();
  if (num_cores == 0) throw ConfigError("system.cores must be at least 1");
  if (llc.nuca && num_cores > llc.topology.num_cores()) {
    throw ConfigError("more cores than core routers in the mesh");
  }
  if (pagemap == PageMapMode::UPM && !llc.nuca) {
    throw ConfigError("unified page mapping needs a NUCA configuration");
  }
  if (pagemap != PageMapMode::None) {
    const auto bank = llc.bank_geometry();
    const auto g = page_granularity(page_bytes, bank.line_bytes, bank.num_ways);
    if (bank.num_sets % g != 0) throw ConfigError("a page spans more sets than one bank holds");
  }
  if (latency_map_path && llc.nuca) {
    throw ConfigError("timing.latency_map applies to single-bank caches only");
  }
  if (synthetic.read_fraction < 0.0 || synthetic.read_fraction > 1.0) {
    throw ConfigError("read_fraction must lie in [0,1]");
  }
  if (synthetic.zipf_exponent < 0.0) throw ConfigError("zipf exponent must be non-negative");
}

std::string ExperimentConfig::workload_id() const {
  if (trace_path) return fmt::format("trace:{}|cores={}", *trace_path, num_cores);
  const auto& s = synthetic;
  return fmt::format("synthetic:pages={}|zipf={}|reads={}|length={}|cores={}|instr={}|"
                     "instr_lines={}|seed={}|page={}|line={}|scatter={}|private={}|data={:#x}|code={:#x}",
                     s.num_pages, s.zipf_exponent, s.read_fraction, s.length, s.num_cores,
                     s.instr_stream, s.instr_lines, s.seed, s.page_bytes, s.line_bytes,
                     s.scatter_pages, s.private_pages, s.data_base, s.code_base);
}

std::vector<TraceRecord> load_workload(const ExperimentConfig& config) {
  if (config.trace_path) {
    std::ifstream in(*config.trace_path);
    if (!in) throw ConfigError(fmt::format("cannot open trace '{}'", *config.trace_path));
    return parse_trace(in, config.num_cores);
  }
  return generate_synthetic(config.synthetic);
}

std::vector<TraceRecord> llc_stream(const ExperimentConfig& config,
                                    std::span<const TraceRecord> workload) {
  if (!config.l1.enabled) return {workload.begin(), workload.end()};
  return l1_filter(workload, config.l1, config.num_cores).llc_records;
}

Llc build_llc(const ExperimentConfig& config) {
  if (config.latency_map_path) {
    std::ifstream in(*config.latency_map_path);
    if (!in) {
      throw ConfigError(fmt::format("cannot open latency map '{}'", *config.latency_map_path));
    }
    std::vector<LatencyMap> maps;
    maps.push_back(read_latency_map(in));
    return Llc(config.llc, std::move(maps));
  }
  return Llc(config.llc);
}

FrameInventory build_inventory(const ExperimentConfig& config, const Llc& llc,
                               std::size_t pages) {
  const auto bank = llc.bank_geometry();
  FrameLayout layout{config.page_bytes, bank.line_bytes, bank.num_ways, bank.num_sets,
                     llc.num_banks()};
  layout.validate();
  const std::uint64_t per_copy = std::uint64_t{layout.colors_per_bank()} * layout.num_banks;
  std::uint64_t frames = per_copy;
  if (config.frames) {
    frames = *config.frames;
  } else if (pages > per_copy) {
    frames = (pages + per_copy - 1) / per_copy * per_copy;
  }
  const auto g = layout.granularity();
  return make_frame_inventory(layout, frames, [&](std::uint32_t b, std::uint32_t first_set) {
    return llc.frame_hit_latency(b, first_set, g);
  });
}

FrameCost frame_cost(const ExperimentConfig& config, PageMapMode mode) {
  if (mode == PageMapMode::UPM) {
    const auto topology = config.llc.topology;
    return [topology](const Frame& f, std::uint32_t core) {
      return f.latency_class + noc_latency(topology, core, f.bank);
    };
  }
  return [](const Frame& f, std::uint32_t) { return f.latency_class; };
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto workload = load_workload(config);
  return run_experiment(config, workload);
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const TraceRecord> workload) {
  config.validate();
  ExperimentResult result;
  result.name = config.name;
  result.config = config;

  auto stream = llc_stream(config, workload);
  result.l1_misses = config.l1.enabled ? stream.size() : 0;
  Llc llc = build_llc(config);
  for (std::uint32_t b = 0; b < llc.num_banks(); ++b) {
    result.bank_mean_latency.push_back(llc.mean_way_latency(b));
  }

  if (config.pagemap != PageMapMode::None) {
    result.profile = config.profile_raw
                         ? profile_records(workload, config.page_bytes, config.num_cores)
                         : profile_records(stream, config.page_bytes, config.num_cores);
    auto inventory = build_inventory(config, llc, result.profile.pages.size());
    const auto cost = frame_cost(config, config.pagemap);
    result.page_map = assign_pages(result.profile, inventory, cost);
    result.mapping_cost = mapping_cost(result.profile, *result.page_map, inventory, cost);
    result.inventory = std::move(inventory);
  }

  std::uint64_t writer = 0;
  for (const auto& rec : stream) {
    Request req;
    req.addr = result.page_map ? result.page_map->translate(rec.vaddr) : rec.vaddr;
    req.op = rec.op;
    if (rec.op == Op::Write) req.data = ++writer;
    const auto r = llc.access(rec.core, req);
    record_access(result.stats, req, r, config.energy);
  }
  result.amat_cycles = result.stats.accesses ? amat(result.stats, config.energy) : 0.0;
  result.energy = energy(result.stats, config.energy);
  return result;
}

void write_report(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "name,policy,layout,pagemap,nuca,workload_seed,cnt_seed,accesses,hits,misses,reads,"
         "writes,shuffle_moves,writebacks,bypasses,hit_cycles,noc_cycles,total_llc_cycles,"
         "miss_rate,mean_hit_latency,amat_cycles,static_energy,dynamic_energy,total_energy\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    const auto& s = r.stats;
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
               r.name, to_string(c.llc.policy), to_string(c.llc.layout), to_string(c.pagemap),
               c.llc.nuca ? "nuca" : "uca", c.trace_path ? std::string("trace") : fmt::format("{}", c.synthetic.seed),
               c.llc.cnt.seed, s.accesses, s.hits, s.misses, s.reads, s.writes, s.shuffle_moves,
               s.writebacks, s.bypasses, s.hit_cycles, s.noc_cycles, s.total_llc_cycles,
               fmt_double(s.miss_rate()), fmt_double(s.mean_hit_latency()),
               fmt_double(r.amat_cycles), fmt_double(r.energy.static_units),
               fmt_double(r.energy.dynamic_units), fmt_double(r.energy.total()));
  }
}

void write_comparison(std::ostream& out, std::span<const ExperimentResult> results) {
  if (results.size() < 2) throw ConfigError("compare needs at least two configurations");
  const auto& base = results.front();
  for (const auto& r : results) {
    if (r.config.workload_id() != base.config.workload_id()) {
      throw ConfigError(fmt::format("workload of '{}' differs from '{}'", r.name, base.name));
    }
    if (r.config.llc.cnt.seed != base.config.llc.cnt.seed) {
      throw ConfigError(fmt::format("variation seed of '{}' differs from '{}'", r.name, base.name));
    }
  }
  auto ratio = [](double a, double b) { return b == 0.0 ? (a == 0.0 ? 1.0 : 0.0) : a / b; };
  out << "name,policy,layout,pagemap,nuca,mean_hit_latency,hit_latency_ratio,amat_cycles,"
         "amat_ratio,miss_rate,total_energy,energy_ratio,dynamic_energy,dynamic_energy_ratio\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.name,
               to_string(c.llc.policy), to_string(c.llc.layout), to_string(c.pagemap),
               c.llc.nuca ? "nuca" : "uca", fmt_double(r.stats.mean_hit_latency()),
               fmt_double(ratio(r.stats.mean_hit_latency(), base.stats.mean_hit_latency())),
               fmt_double(r.amat_cycles), fmt_double(ratio(r.amat_cycles, base.amat_cycles)),
               fmt_double(r.stats.miss_rate()), fmt_double(r.energy.total()),
               fmt_double(ratio(r.energy.total(), base.energy.total())),
               fmt_double(r.energy.dynamic_units),
               fmt_double(ratio(r.energy.dynamic_units, base.energy.dynamic_units)));
  }
}

void write_overhead(std::ostream& out, const ExperimentConfig& config) {
  const auto geometry = config.llc.bank_geometry();
  const auto banks = config.llc.num_banks();
  out << "key,value\n";
  fmt::print(out, "policy,{}\n", to_string(config.llc.policy));
  fmt::print(out, "banks,{}\n", banks);
  switch (config.llc.policy) {
    case PolicyKind::VASA:
    case PolicyKind::VASA_DS: {
      const auto o = vasa_overhead(geometry, config.llc.policy == PolicyKind::VASA_DS);
      fmt::print(out, "delay_register_bytes_per_bank,{}\n", o.delay_register_bytes);
      fmt::print(out, "priority_bits_per_set,{}\n", o.priority_bits_per_set);
      fmt::print(out, "priority_metadata_bytes_per_bank,{}\n", o.priority_metadata_bytes);
      fmt::print(out, "shuffle_register_bytes_per_bank,{}\n", o.shuffle_register_bytes);
      break;
    }
    case PolicyKind::VAWA_UG:
    case PolicyKind::VAWA_NG: {
      const auto o = vawa_overhead(geometry, config.llc.uniform_groups, config.llc.ng_classes.size(),
                                   config.llc.ng_budget);
      fmt::print(out, "uniform_register_bytes_per_bank,{}\n", o.uniform_register_bytes);
      fmt::print(out, "uniform_register_bytes_quoted,{}\n", kUniformGroupingRegisterBytes);
      fmt::print(out, "nonuniform_index_registers_per_bank,{}\n", o.nonuniform_index_registers);
      fmt::print(out, "nonuniform_index_registers_quoted,{}\n", kNonuniformGroupingQuotedRegisters);
      fmt::print(out, "nonuniform_register_bytes_per_bank,{}\n", o.nonuniform_register_bytes);
      fmt::print(out, "nonuniform_register_bytes_quoted,{}\n", kNonuniformGroupingRegisterBytes);
      break;
    }
    default:
      fmt::print(out, "extra_register_bytes,0\n");
      break;
  }
}

namespace {

KeyValues common_recipe_keys(bool nuca) {
  KeyValues kv = {
      {"cache.capacity_bytes", "2097152"},
      {"cache.ways", "8"},
      {"cache.line_bytes", "64"},
      {"cnt.seed", "1"},
      {"l1.enabled", "false"},
      {"workload.synthetic.num_pages", "24"},
      {"workload.synthetic.zipf", "1.2"},
      {"workload.synthetic.read_fraction", "0.8"},
      {"workload.synthetic.length", "100000"},
      {"workload.synthetic.seed", "7"},
  };
  if (nuca) {
    kv.emplace_back("nuca.enabled", "true");
    kv.emplace_back("system.cores", "4");
    kv.emplace_back("workload.synthetic.private_pages", "true");
  }
  return kv;
}

KeyValues with(KeyValues base, std::initializer_list<std::pair<std::string, std::string>> extra) {
  for (const auto& e : extra) base.push_back(e);
  return base;
}

}  // namespace

std::vector<std::string_view> recipe_names() {
  return {"uca-set-aligned", "uca-way-aligned", "nuca-set-aligned", "nuca-way-aligned",
          "six-policy"};
}

std::vector<KeyValues> recipe(std::string_view name) {
  const bool nuca = name.starts_with("nuca");
  const auto base = common_recipe_keys(nuca);
  const auto set = with(base, {{"cache.layout", "set_aligned"}});
  const auto way = with(base, {{"cache.layout", "way_aligned"}});
  auto run = [](const KeyValues& kv, std::string n, std::string policy, std::string pm) {
    return with(kv, {{"experiment.name", n}, {"cache.policy", policy}, {"pagemap.mode", pm}});
  };
  if (name == "uca-set-aligned") {
    return {run(set, "baseline", "baseline", "none"), run(set, "baseline+pd", "baseline-pd", "none"),
            run(set, "vasa", "vasa", "none"), run(set, "vasa+ds", "vasa-ds", "none")};
  }
  if (name == "uca-way-aligned") {
    return {run(way, "baseline", "baseline", "none"), run(way, "baseline+pd", "baseline-pd", "none"),
            run(way, "vawa+ug", "vawa-ug", "none"), run(way, "vawa+ng", "vawa-ng", "none"),
            run(way, "vawa+ng+pm", "vawa-ng", "pm")};
  }
  if (name == "nuca-set-aligned") {
    return {run(set, "baseline", "baseline", "none"), run(set, "vasa", "vasa", "none"),
            run(set, "vasa+ds", "vasa-ds", "none"), run(set, "vasa+ds+upm", "vasa-ds", "upm")};
  }
  if (name == "nuca-way-aligned") {
    return {run(way, "baseline", "baseline", "none"), run(way, "vawa+ng", "vawa-ng", "none"),
            run(way, "vawa+ng+pm", "vawa-ng", "pm"), run(way, "vawa+ng+upm", "vawa-ng", "upm")};
  }
  if (name == "six-policy") {
    return {run(set, "baseline", "baseline", "none"), run(set, "baseline+pd", "baseline-pd", "none"),
            run(set, "vasa", "vasa", "none"), run(set, "vasa+ds", "vasa-ds", "none"),
            run(way, "vawa+ug", "vawa-ug", "none"), run(way, "vawa+ng+pm", "vawa-ng", "pm")};
  }
  throw ConfigError(fmt::format("unknown recipe '{}'", name));
}

}  // namespace cnfet
