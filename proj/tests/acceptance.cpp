// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. The optional argument is the path of the
// cnfet-sim executable used by the determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "cnfet/experiment.hpp"
#include "cnfet/vasa.hpp"
#include "cnfet/vawa.hpp"
#include "oracles/analytic.hpp"
#include "oracles/shuffle_scenarios.hpp"
#include "oracles/grouping.hpp"

using namespace cnfet;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------

const CacheGeometry kOneSet = CacheGeometry::make(8 * 64, 8, 64);

LatencyMap scenario_map() {
  LatencyMap m;
  m.layout = LayoutKind::SetAligned;
  m.geometry = kOneSet;
  m.min_cycles = 6;
  m.max_cycles = 12;
  m.latencies = {6, 6, 7, 7, 9, 9, 12, 12};
  return m;
}

Request read_tag(std::uint64_t tag) { return {tag * 64, Op::Read, 0}; }

CacheState filled_set(const WayGroups& g,
                      std::initializer_list<std::pair<std::uint32_t, std::uint64_t>> order) {
  CacheState s(kOneSet);
  for (const auto& [way, tag] : order) {
    CacheLine l;
    l.tag = tag;
    s.replace(0, way, l, g.groups[g.group_of_way[way]]);
  }
  return s;
}

Verdict shuffle_scenarios() {
  Verdict v;
  const auto start = Clock::now();
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  auto tag = [](const CacheState& s, std::uint32_t w) { return s.line(0, w).tag; };
  auto T = [](const CacheState& s, std::uint32_t w) { return int(s.line(0, w).priority_bit); };

  {
    auto s = filled_set(g, {{1, 11}, {0, 10}, {2, 12}, {3, 13}, {4, 14}, {5, 15}, {6, 16}, {7, 17}});
    const auto r = access_vasa_ds(s, read_tag(11), m, g);
    v.require(r.hit && r.way == 1u && r.shuffle_moves == 0 && T(s, 1) == 0 && T(s, 0) == 1,
              "scenario a");
  }
  {
    auto s = filled_set(g, {{0, 10}, {1, 11}, {2, 12}, {3, 13}, {4, 14}, {5, 15}, {6, 16}, {7, 17}});
    const auto r = access_vasa_ds(s, read_tag(13), m, g);
    v.require(r.hit && r.way == 3u && r.shuffle_moves == 2 && tag(s, 0) == 13 && tag(s, 3) == 10 &&
                  T(s, 0) == 0 && T(s, 1) == 1 && T(s, 3) == 0 && T(s, 2) == 1,
              "scenario b");
  }
  {
    auto s = filled_set(g, {{1, 11}, {0, 10}, {3, 13}, {2, 12}, {5, 15}, {4, 14}, {6, 16}, {7, 17}});
    const auto r = access_vasa_ds(s, read_tag(17), m, g);
    bool ok = r.hit && r.way == 7u && r.shuffle_moves == 4 && tag(s, 1) == 17 && tag(s, 3) == 11 &&
              tag(s, 5) == 13 && tag(s, 7) == 15;
    for (std::uint32_t w = 0; w < 8; ++w) ok = ok && T(s, w) == int(w % 2 == 0);
    v.require(ok, "scenario c");
  }
  {
    auto s = filled_set(g, {{1, 11}, {0, 10}, {3, 13}, {2, 12}, {5, 15}, {4, 14}, {7, 17}, {6, 16}});
    const auto r = access_vasa_ds(s, read_tag(50), m, g);
    bool ok = !r.hit && r.way == 1u && r.shuffle_moves == 4 && r.evicted_tag == 17u &&
              tag(s, 1) == 50 && tag(s, 3) == 11 && tag(s, 5) == 13 && tag(s, 7) == 15;
    for (std::uint32_t w = 0; w < 8; ++w) ok = ok && T(s, w) == int(w % 2 == 0);
    v.require(ok, "scenario d");
  }

  std::mt19937_64 rng(2023);
  CacheState s(kOneSet);
  oracle::ShuffleSet ref;
  std::uint64_t disagreements = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t t = rng() % 13;
    const auto expect = ref.access(t);
    const auto got = access_vasa_ds(s, read_tag(t), m, g);
    bool same = got.hit == expect.hit && int(got.way.value_or(99)) == expect.way &&
                int(got.shuffle_moves) == expect.moves && got.evicted_tag == expect.evicted;
    for (std::uint32_t w = 0; w < 8 && same; ++w) {
      const auto& l = s.line(0, w);
      same = l.valid == ref.valid[w] &&
             (!l.valid || (l.tag == ref.tag[w] && int(l.priority_bit) == ref.t[w]));
    }
    disagreements += !same;
  }
  v.require(disagreements == 0, fmt::format("{} disagreements with the transcription", disagreements));
  const double secs = seconds_since(start);
  v.require(secs < 10.0, "over 10 s");
  v.detail = fmt::format("4 scenarios, {} oracle accesses, {:.2f} s{}{}", n, secs,
                         v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

// ---------------------------------------------------------------------------

struct Variant {
  const char* policy;
  const char* layout;
};

Verdict memory_consistency() {
  Verdict v;
  const auto start = Clock::now();
  const Variant variants[] = {{"baseline", "set_aligned"}, {"baseline-pd", "set_aligned"},
                              {"baseline-pd", "way_aligned"}, {"vasa", "set_aligned"},
                              {"vasa-ds", "set_aligned"},   {"vawa-ug", "way_aligned"},
                              {"vawa-ng", "way_aligned"}};
  std::uint64_t runs = 0, hits = 0, checked = 0;
  for (const bool nuca : {false, true}) {
    for (const bool mapped : {false, true}) {
      for (const auto& var : variants) {
        KeyValues kv = {{"cache.policy", var.policy},
                        {"cache.layout", var.layout},
                        {"cnt.seed", "17"},
                        {"l1.enabled", "false"},
                        {"workload.synthetic.num_pages", "1024"},
                        {"workload.synthetic.zipf", "0.8"},
                        {"workload.synthetic.read_fraction", "0.5"},
                        {"workload.synthetic.length", "100000"},
                        {"workload.synthetic.seed", std::to_string(100 + runs)}};
        if (nuca) {
          kv.push_back({"nuca.enabled", "true"});
          kv.push_back({"system.cores", "4"});
        }
        if (mapped) kv.push_back({"pagemap.mode", nuca ? "upm" : "pm"});
        const auto config = make_config(kv);
        const auto workload = load_workload(config);
        Llc llc = build_llc(config);
        std::optional<PageMap> map;
        if (mapped) {
          const auto profile = profile_records(workload, config.page_bytes, config.num_cores);
          const auto inv = build_inventory(config, llc, profile.pages.size());
          map = assign_pages(profile, inv, frame_cost(config, config.pagemap));
        }
        std::unordered_map<std::uint64_t, std::uint64_t> shadow;
        std::uint64_t value = 0, bad = 0;
        for (const auto& rec : workload) {
          Request req;
          req.addr = map ? map->translate(rec.vaddr) : rec.vaddr;
          req.op = rec.op;
          const std::uint64_t line = req.addr / 64;
          if (rec.op == Op::Write) {
            req.data = ++value;
            shadow[line] = value;
          }
          const auto r = llc.access(rec.core, req);
          hits += r.hit;
          if (rec.op == Op::Read) {
            const auto it = shadow.find(line);
            const std::uint64_t expect = it == shadow.end() ? 0 : it->second;
            ++checked;
            bad += r.data != expect;
          }
        }
        v.require(bad == 0, fmt::format("{} {} {}{}: {} stale reads", nuca ? "nuca" : "uca", var.policy,
                                        var.layout, mapped ? "+map" : "", bad));
        ++runs;
      }
    }
  }
  const double secs = seconds_since(start);
  v.require(secs < 60.0, "over 60 s");
  v.detail = fmt::format("{} configurations, {} reads checked, {} hits, {:.1f} s{}{}", runs, checked,
                         hits, secs, v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

// ---------------------------------------------------------------------------

Verdict grouping_optimality() {
  Verdict v;
  const auto geometry = CacheGeometry::make(64 * 8 * 64, 8, 64);
  const std::vector<std::uint32_t> classes = {6, 7};
  int matched = 0;
  std::uint64_t total_gap = 0, worst_gap = 0, total_best = 0;
  std::vector<LatencyMap> maps;
  std::vector<SegmentTable> tables;
  for (std::uint64_t i = 0; i < 200; ++i) {
    CntParams p;
    p.seed = 1000 + i;
    auto m = build_latency_map(geometry, LayoutKind::WayAligned, p);
    const std::uint32_t budget = 1 + static_cast<std::uint32_t>(i % 4);
    auto t = build_nonuniform_groups(m, classes, budget, 1);
    const auto got = latency_savings(t);
    const auto best = oracle::best_savings_dp(m.latencies, classes, budget, m.max_cycles);
    if (got > best) v.require(false, fmt::format("map {} beats the optimum", i));
    const auto gap = best > got ? best - got : 0;
    matched += gap == 0;
    total_gap += gap;
    total_best += best;
    worst_gap = std::max(worst_gap, gap);
    maps.push_back(std::move(m));
    tables.push_back(std::move(t));
  }
  std::mt19937_64 rng(77);
  std::uint64_t undercuts = 0;
  for (int q = 0; q < 1'000'000; ++q) {
    const auto i = rng() % maps.size();
    const auto set = static_cast<std::uint32_t>(rng() % 64);
    undercuts += lookup_latency(tables[i], set) < maps[i][set];
  }
  v.require(undercuts == 0, fmt::format("{} lookups below the physical latency", undercuts));
  v.detail = fmt::format(
      "optimal on {}/200 maps, savings gap {} of {} cycles ({:.2f}%), worst single gap {}, "
      "{} of 1000000 lookups undercut{}{}",
      matched, total_gap, total_best, total_best ? 100.0 * total_gap / total_best : 0.0, worst_gap,
      undercuts, v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

// ---------------------------------------------------------------------------

Verdict distribution_check() {
  Verdict v;
  const auto geometry = CacheGeometry::make(2 * 1024 * 1024, 8, 64);
  int mode_ok = 0, tail_ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CntParams p;
    p.seed = seed;
    const auto m = build_latency_map(geometry, LayoutKind::WayAligned, p);
    const auto s = summarize(m);
    mode_ok += m.size() == 4096 && s.mode == 6;
    tail_ok += s.histogram.count(10) && s.histogram.at(10) > 0;
  }
  v.require(mode_ok == 20, fmt::format("mode at 6 for {}/20 seeds", mode_ok));
  v.require(tail_ok == 20, fmt::format("tail at 10 for {}/20 seeds", tail_ok));

  CntParams p;
  const double q = p.survival_probability();
  const auto raw = oracle::raw_count_pmf(p.mu, p.sigma, 60);
  double expected = 0.0;
  for (std::size_t n = 0; n < raw.size(); ++n) expected += raw[n] * double(n) * q;
  Rng rng(4242);
  double sum = 0.0;
  const int trials = 1'000'000;
  for (int i = 0; i < trials; ++i) {
    sum += effective_conducting_count(sample_cnfet_count(p, rng), p, rng);
  }
  const double mean = sum / trials;
  v.require(std::abs(mean - 8.1225) <= 0.02, fmt::format("Monte Carlo mean {:.4f}", mean));
  v.detail = fmt::format("mode 6 and tail at 10 on {}/20 seeds, mean effective count {:.4f} "
                         "(analytic {:.4f}){}{}",
                         std::min(mode_ok, tail_ok), mean, expected, v.detail.empty() ? "" : ": ",
                         v.detail);
  return v;
}

// ---------------------------------------------------------------------------

std::vector<ExperimentResult> run_recipe(std::string_view name) {
  std::vector<ExperimentResult> out;
  for (const auto& kv : recipe(name)) out.push_back(run_experiment(make_config(kv)));
  return out;
}

const ExperimentResult& by_name(const std::vector<ExperimentResult>& rows, std::string_view name) {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw std::runtime_error(fmt::format("no result named {}", name));
}

std::vector<ExperimentResult> g_set_aligned;

Verdict latency_reduction() {
  Verdict v;
  const auto start = Clock::now();
  g_set_aligned = run_recipe("uca-set-aligned");
  const auto way = run_recipe("uca-way-aligned");
  const double set_ratio = by_name(g_set_aligned, "vasa+ds").stats.mean_hit_latency() /
                           by_name(g_set_aligned, "baseline").stats.mean_hit_latency();
  const double way_ratio = by_name(way, "vawa+ng+pm").stats.mean_hit_latency() /
                           by_name(way, "baseline").stats.mean_hit_latency();
  v.require(set_ratio <= 0.75 + 0.10, fmt::format("VASA+DS ratio {:.3f}", set_ratio));
  v.require(way_ratio <= 0.70 + 0.10, fmt::format("VAWA+NG+PM ratio {:.3f}", way_ratio));
  const double secs = seconds_since(start);
  v.require(secs < 120.0, "over 2 min");
  v.detail = fmt::format("VASA+DS/baseline {:.3f} (limit 0.85), VAWA+NG+PM/baseline {:.3f} "
                         "(limit 0.80), {:.1f} s{}{}",
                         set_ratio, way_ratio, secs, v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

// ---------------------------------------------------------------------------

Verdict unified_mapping() {
  Verdict v;
  const auto config = make_config({{"nuca.enabled", "true"},
                                    {"system.cores", "4"},
                                    {"cache.layout", "way_aligned"},
                                    {"cache.policy", "vawa-ng"},
                                    {"pagemap.mode", "upm"},
                                    {"cnt.seed", "5"}});
  const Llc llc = build_llc(config);
  const auto unified = frame_cost(config, PageMapMode::UPM);
  const auto oblivious = frame_cost(config, PageMapMode::PM);
  std::mt19937_64 rng(606);
  int not_worse = 0, strict = 0;
  const int profiles = 50;
  for (int i = 0; i < profiles; ++i) {
    PageProfile prof;
    prof.num_cores = 4;
    const std::uint64_t pages = 64 + rng() % 512;
    std::geometric_distribution<int> heavy(0.02);
    for (std::uint64_t p = 0; p < pages; ++p) {
      const auto core = static_cast<std::uint32_t>(rng() % 4);
      prof.add(rng() % 100'000, core, 1 + heavy(rng));
    }
    const auto inv = build_inventory(config, llc, prof.pages.size());
    const auto a = mapping_cost(prof, assign_pages(prof, inv, unified), inv, unified);
    const auto b = mapping_cost(prof, assign_pages(prof, inv, oblivious), inv, unified);
    not_worse += a <= b;
    strict += a < b;
  }
  v.require(not_worse == profiles, fmt::format("worse on {} profiles", profiles - not_worse));
  v.require(strict * 10 >= profiles * 8, fmt::format("strictly better on only {}", strict));
  v.detail = fmt::format("no worse on {}/{}, strictly better on {}/{}{}{}", not_worse, profiles, strict,
                         profiles, v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

// ---------------------------------------------------------------------------

Verdict energy_accounting() {
  Verdict v;
  std::vector<ExperimentResult> all = g_set_aligned;
  if (all.empty()) all = run_recipe("uca-set-aligned");
  for (const auto& r : all) {
    v.require(r.energy.total() == r.energy.static_units + r.energy.dynamic_units,
              r.name + " does not decompose");
  }

  // A set-aligned cache whose way groups differ by one cycle, cycled through
  // nine lines per set so that nearly every access shuffles.
  LatencyMap flat;
  flat.layout = LayoutKind::SetAligned;
  flat.geometry = CacheGeometry::make(2 * 1024 * 1024, 8, 64);
  flat.min_cycles = 6;
  flat.max_cycles = 12;
  flat.latencies = {6, 6, 6, 6, 6, 6, 7, 7};
  const auto path = (std::filesystem::temp_directory_path() / "cnfet_acceptance_flat.txt").string();
  {
    std::ofstream out(path);
    write_latency_map(out, flat);
  }
  std::vector<TraceRecord> trace;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100'000; ++i) {
    const std::uint64_t set = rng() % 64, slot = rng() % 9;
    trace.push_back({0, rng() % 4 ? Op::Read : Op::Write, AccessKind::Data, (slot * 4096 + set) * 64});
  }
  auto run = [&](const char* policy) {
    return run_experiment(
        make_config({{"cache.policy", policy}, {"timing.latency_map", path}, {"l1.enabled", "false"}}),
        trace);
  };
  const auto plain = run("vasa");
  const auto ds = run("vasa-ds");
  std::filesystem::remove(path);
  const double saved = double(plain.stats.hit_cycles) - double(ds.stats.hit_cycles);
  v.require(ds.energy.dynamic_units > plain.energy.dynamic_units,
            "shuffle-heavy trace: DS dynamic energy not higher");

  const auto& hot_plain = by_name(all, "vasa");
  const auto& hot_ds = by_name(all, "vasa+ds");
  v.require(hot_ds.energy.total() < hot_plain.energy.total(), "hot trace: DS total energy not lower");
  v.detail = fmt::format(
      "decomposition exact; shuffle-heavy trace: {} moves, {:.0f} cycles saved, dynamic {:.0f} vs {:.0f}; "
      "hot trace total {:.0f} (DS) vs {:.0f}{}{}",
      ds.stats.shuffle_moves, saved, ds.energy.dynamic_units, plain.energy.dynamic_units,
      hot_ds.energy.total(), hot_plain.energy.total(), v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism(const std::string& cli) {
  Verdict v;
  if (cli.empty() || !std::filesystem::exists(cli)) {
    v.require(false, "simulator executable not given");
    return v;
  }
  const auto dir = std::filesystem::temp_directory_path();
  int identical = 0;
  const auto names = recipe_names();
  for (auto name : names) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const auto file = (dir / fmt::format("cnfet_acceptance_{}_{}.csv", name, k)).string();
      const auto cmd = fmt::format("\"{}\" simulate -r {} -o \"{}\"", cli, name, file);
      if (std::system(cmd.c_str()) != 0) v.require(false, fmt::format("{} run {} failed", name, k));
      outputs[k] = slurp(file);
      std::filesystem::remove(file);
    }
    if (!outputs[0].empty() && outputs[0] == outputs[1]) {
      ++identical;
    } else {
      v.require(false, fmt::format("{} differs between runs", name));
    }
  }
  v.detail = fmt::format("{}/{} recipes byte-identical{}{}", identical, names.size(),
                         v.detail.empty() ? "" : ": ", v.detail);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"shuffle-scenarios", shuffle_scenarios},
      {"memory-consistency", memory_consistency},
      {"grouping-optimality", grouping_optimality},
      {"latency-distribution", distribution_check},
      {"latency-reduction", latency_reduction},
      {"unified-mapping", unified_mapping},
      {"energy-accounting", energy_accounting},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += !v.pass;
    std::cout << fmt::format("{} {} {}: {}", v.pass ? "PASS" : "FAIL", index, name, v.detail)
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
