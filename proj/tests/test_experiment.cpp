#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cnfet/errors.hpp"
#include "cnfet/experiment.hpp"

using namespace cnfet;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cnfet_test_" + name);
}

std::string write_set_map(const std::string& name, std::vector<std::uint32_t> lat) {
  LatencyMap m;
  m.layout = LayoutKind::SetAligned;
  m.geometry = CacheGeometry::make(2 * 1024 * 1024, 8, 64);
  m.min_cycles = 6;
  m.max_cycles = 12;
  m.latencies = std::move(lat);
  const auto path = temp_file(name).string();
  std::ofstream out(path);
  write_latency_map(out, m);
  return path;
}

// One line in each of `sets` sets, revisited `rounds` times.
std::vector<TraceRecord> sparse_hot_trace(std::uint64_t sets, int rounds) {
  std::vector<TraceRecord> out;
  for (int r = 0; r < rounds; ++r) {
    for (std::uint64_t s = 0; s < sets; ++s) out.push_back({0, Op::Read, AccessKind::Data, s * 64});
  }
  return out;
}

KeyValues small(KeyValues kv) {
  kv.push_back({"workload.synthetic.length", "20000"});
  return kv;
}

}  // namespace

TEST_CASE("key=value parsing") {
  std::istringstream in("# header\n\ncache.ways = 4\ncache.policy=vasa\n");
  const auto kv = parse_key_values(in);
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == std::pair<std::string, std::string>{"cache.ways", "4"});
  CHECK(parse_assignment("a.b=c=d").second == "c=d");
  CHECK_THROWS_AS(parse_assignment("novalue"), ConfigError);
  std::istringstream bad("cache.ways\n");
  CHECK_THROWS(parse_key_values(bad));

  const auto c = make_config({{"cache.ways", "4"}, {"vawa.classes", "6,7,8"}, {"system.cores", "1"}});
  CHECK(c.llc.geometry.num_ways == 4);
  CHECK(c.llc.ng_classes == std::vector<std::uint32_t>{6, 7, 8});
  CHECK(config_keys().size() >= 50);
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(make_config({{"no.such.key", "1"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"cache.ways", "three"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"cache.policy", "vasa"}, {"cache.layout", "way_aligned"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"cache.policy", "vawa-ng"}, {"cache.layout", "set_aligned"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"pagemap.mode", "upm"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"nuca.enabled", "true"}, {"system.cores", "5"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"workload.synthetic.read_fraction", "1.5"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"cache.capacity_bytes", "3000"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"vawa.classes", "7,6"}, {"cache.layout", "way_aligned"},
                               {"cache.policy", "vawa-ng"}}),
                  ConfigError);
  CHECK_NOTHROW(make_config({{"nuca.enabled", "true"}, {"system.cores", "4"}, {"pagemap.mode", "upm"}}));
}

TEST_CASE("later assignments override earlier ones") {
  const auto c = make_config({{"cache.ways", "4"}, {"cache.ways", "16"}});
  CHECK(c.llc.geometry.num_ways == 16);
  const auto d = apply_config(c, {{"cache.ways", "2"}});
  CHECK(d.llc.geometry.num_ways == 2);
}

TEST_CASE("every recipe yields valid configurations") {
  for (auto name : recipe_names()) {
    for (const auto& kv : recipe(name)) CHECK_NOTHROW(make_config(kv));
  }
  CHECK_THROWS_AS(recipe("nope"), ConfigError);
}

TEST_CASE("baseline and set-aligned policies see the same misses") {
  const auto base = make_config(small({{"cache.policy", "baseline"}}));
  const auto workload = load_workload(base);
  const auto a = run_experiment(base, workload);
  const auto b = run_experiment(make_config(small({{"cache.policy", "vasa"}})), workload);
  const auto c = run_experiment(make_config(small({{"cache.policy", "vasa-ds"}})), workload);
  CHECK(a.stats.misses == b.stats.misses);
  CHECK(a.stats.misses == c.stats.misses);
  CHECK(b.stats.mean_hit_latency() <= a.stats.mean_hit_latency());
}

TEST_CASE("data shuffling lowers the mean hit latency on a hot trace") {
  const auto path = write_set_map("ds_map.txt", {12, 11, 10, 9, 8, 7, 6, 6});
  const auto trace = sparse_hot_trace(1000, 20);
  const auto vasa = run_experiment(
      make_config({{"cache.policy", "vasa"}, {"timing.latency_map", path}, {"l1.enabled", "false"}}), trace);
  const auto ds = run_experiment(
      make_config({{"cache.policy", "vasa-ds"}, {"timing.latency_map", path}, {"l1.enabled", "false"}}), trace);
  CHECK(vasa.stats.hits == ds.stats.hits);
  CHECK(ds.stats.mean_hit_latency() < vasa.stats.mean_hit_latency());
  CHECK(ds.stats.mean_hit_latency() == doctest::Approx(6.0));
}

TEST_CASE("partial disabling helps when the hot data fits the fast ways") {
  const auto path = write_set_map("pd_map.txt", {6, 6, 6, 6, 6, 6, 6, 12});
  const auto trace = sparse_hot_trace(1000, 20);
  std::vector<ExperimentResult> rows;
  rows.push_back(run_experiment(
      make_config({{"experiment.name", "baseline"}, {"timing.latency_map", path}, {"l1.enabled", "false"}}),
      trace));
  rows.push_back(run_experiment(make_config({{"experiment.name", "pd"},
                                             {"cache.policy", "baseline-pd"},
                                             {"timing.latency_map", path},
                                             {"l1.enabled", "false"}}),
                                trace));
  CHECK(rows[0].stats.mean_hit_latency() == 12.0);
  CHECK(rows[1].stats.mean_hit_latency() == 6.0);
  std::ostringstream out;
  write_comparison(out, rows);
  CHECK(out.str().find("pd,baseline-pd,set_aligned,none,uca,6.000000,0.500000") != std::string::npos);
}

TEST_CASE("comparing a configuration with itself gives unit ratios") {
  const auto c = make_config(small({{"cache.policy", "vasa-ds"}}));
  const std::vector<ExperimentResult> rows = {run_experiment(c), run_experiment(c)};
  std::ostringstream out;
  write_comparison(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto f = [&] {
      std::vector<std::string> v;
      std::stringstream ls(line);
      for (std::string x; std::getline(ls, x, ',');) v.push_back(x);
      return v;
    }();
    REQUIRE(f.size() == 14);
    CHECK(f[6] == "1.000000");
    CHECK(f[8] == "1.000000");
    CHECK(f[11] == "1.000000");
    CHECK(f[13] == "1.000000");
  }
}

TEST_CASE("comparisons across different workloads are refused") {
  const auto a = run_experiment(make_config(small({})));
  const auto b = run_experiment(make_config(small({{"workload.synthetic.seed", "99"}})));
  const std::vector<ExperimentResult> rows = {a, b};
  std::ostringstream out;
  CHECK_THROWS_AS(write_comparison(out, rows), ConfigError);
}

TEST_CASE("reports are byte identical across runs") {
  for (const auto& kv : recipe("nuca-way-aligned")) {
    const auto c = make_config(small(kv));
    const std::vector<ExperimentResult> a = {run_experiment(c)};
    const std::vector<ExperimentResult> b = {run_experiment(c)};
    std::ostringstream x, y;
    write_report(x, a);
    write_report(y, b);
    CHECK(x.str() == y.str());
  }
}

TEST_CASE("six-policy sweep completes") {
  std::vector<ExperimentResult> rows;
  for (const auto& kv : recipe("six-policy")) rows.push_back(run_experiment(make_config(small(kv))));
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.stats.accesses == 20000);
    CHECK(r.energy.total() == r.energy.static_units + r.energy.dynamic_units);
  }
  std::ostringstream out;
  write_comparison(out, rows);
  const auto text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("NUCA totals split into hit and route cycles") {
  const auto c = make_config(small({{"nuca.enabled", "true"},
                                    {"system.cores", "4"},
                                    {"cache.layout", "way_aligned"},
                                    {"cache.policy", "vawa-ng"},
                                    {"pagemap.mode", "upm"},
                                    {"workload.synthetic.private_pages", "true"}}));
  const auto r = run_experiment(c);
  CHECK(r.stats.noc_cycles > 0);
  CHECK(r.stats.total_llc_cycles >= r.stats.hit_cycles + r.stats.misses * 30);
  CHECK(r.stats.total_llc_cycles <= r.stats.hit_cycles + r.stats.misses * 30 + r.stats.noc_cycles);
  REQUIRE(r.page_map.has_value());
  CHECK(r.page_map->injective());
  CHECK(r.bank_mean_latency.size() == 8);
}

TEST_CASE("overhead output") {
  std::ostringstream out;
  write_overhead(out, make_config({{"cache.policy", "vasa-ds"}}));
  CHECK(out.str().find(',') != std::string::npos);
}
