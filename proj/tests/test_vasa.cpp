#include <doctest.h>

#include <algorithm>
#include <random>

#include "cnfet/errors.hpp"
#include "cnfet/vasa.hpp"
#include "oracles/shuffle_scenarios.hpp"

using namespace cnfet;

namespace {

// One 8-way set; tag t lives at address t * 64.
const CacheGeometry kSet = CacheGeometry::make(8 * 64, 8, 64);

LatencyMap scenario_map() {
  LatencyMap m;
  m.layout = LayoutKind::SetAligned;
  m.geometry = kSet;
  m.min_cycles = 6;
  m.max_cycles = 12;
  m.latencies = {6, 6, 7, 7, 9, 9, 12, 12};
  return m;
}

Request rd(std::uint64_t tag) { return {tag * 64, Op::Read, 0}; }

// Installs tags so that in every group the first listed way ends with T=1
// and the second with T=0.
void install(CacheState& s, const WayGroups& g,
             std::initializer_list<std::pair<std::uint32_t, std::uint64_t>> order) {
  for (const auto& [way, tag] : order) {
    CacheLine l;
    l.tag = tag;
    s.replace(0, way, l, g.groups[g.group_of_way[way]]);
  }
}

std::uint8_t T(const CacheState& s, std::uint32_t way) { return s.line(0, way).priority_bit; }
std::uint64_t tag_at(const CacheState& s, std::uint32_t way) { return s.line(0, way).tag; }

}  // namespace

TEST_CASE("way groups sort by latency") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m, 2);
  REQUIRE(g.size() == 4);
  CHECK(g.groups[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(g.groups[3] == std::vector<std::uint32_t>{6, 7});
  CHECK(g.group_latency == std::vector<std::uint32_t>{6, 7, 9, 12});

  LatencyMap shuffled = m;
  shuffled.latencies = {12, 6, 9, 7, 6, 12, 7, 9};
  const auto h = build_way_groups(shuffled, 2);
  CHECK(h.groups[0] == std::vector<std::uint32_t>{1, 4});
  CHECK(h.groups[1] == std::vector<std::uint32_t>{3, 6});
  CHECK(h.groups[2] == std::vector<std::uint32_t>{2, 7});
  CHECK(h.groups[3] == std::vector<std::uint32_t>{0, 5});
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h.group_latency[i - 1] <= h.group_latency[i]);
  CHECK_THROWS_AS(build_way_groups(m, 3), ConfigError);
}

TEST_CASE("delay registers hold 4-bit way latencies") {
  const DelayRegisters r(scenario_map());
  CHECK(r.size() == 8);
  CHECK(r.storage_bytes() == 4);
  CHECK(r.delay(6) == 12);
  auto bad = scenario_map();
  bad.max_cycles = 20;
  bad.latencies[0] = 16;
  CHECK_THROWS_AS(DelayRegisters{bad}, ConfigError);
}

TEST_CASE("VASA hit latency follows the hit way") {
  const auto m = scenario_map();
  CacheState s(kSet);
  install(s, build_way_groups(m), {{0, 10}, {7, 17}});
  auto r = access_vasa(s, rd(10), m);
  CHECK(r.hit);
  CHECK(r.latency_cycles == 6);
  r = access_vasa(s, rd(17), m);
  CHECK(r.latency_cycles == 12);
  r = access_vasa(s, rd(99), m);
  CHECK_FALSE(r.hit);
  CHECK(r.shuffle_moves == 0);
}

TEST_CASE("data shuffling scenario (a): hit in G0") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  install(s, g, {{1, 11}, {0, 10}, {2, 12}, {3, 13}, {4, 14}, {5, 15}, {6, 16}, {7, 17}});
  REQUIRE(T(s, 0) == 0);
  REQUIRE(T(s, 1) == 1);
  const auto r = access_vasa_ds(s, rd(11), m, g);
  CHECK(r.hit);
  CHECK(r.way == std::optional<std::uint32_t>{1});
  CHECK(r.latency_cycles == 6);
  CHECK(r.shuffle_moves == 0);
  CHECK(T(s, 1) == 0);
  CHECK(T(s, 0) == 1);
  CHECK(tag_at(s, 0) == 10);
  CHECK(tag_at(s, 1) == 11);
}

TEST_CASE("data shuffling scenario (b): hit in G1 swaps with G0's T=1 way") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  install(s, g, {{0, 10}, {1, 11}, {2, 12}, {3, 13}, {4, 14}, {5, 15}, {6, 16}, {7, 17}});
  REQUIRE(T(s, 0) == 1);
  const auto r = access_vasa_ds(s, rd(13), m, g);
  CHECK(r.hit);
  CHECK(r.way == std::optional<std::uint32_t>{3});
  CHECK(r.latency_cycles == 7);
  CHECK(r.shuffle_moves == 2);
  CHECK(tag_at(s, 0) == 13);
  CHECK(tag_at(s, 3) == 10);
  CHECK(T(s, 0) == 0);
  CHECK(T(s, 1) == 1);
  CHECK(T(s, 3) == 0);
  CHECK(T(s, 2) == 1);
  for (std::uint32_t w : {1u, 2u, 4u, 5u, 6u, 7u}) CHECK(tag_at(s, w) == 10 + w);
}

TEST_CASE("data shuffling scenario (c): hit in G3 cascades one group at a time") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  install(s, g, {{1, 11}, {0, 10}, {3, 13}, {2, 12}, {5, 15}, {4, 14}, {6, 16}, {7, 17}});
  const auto r = access_vasa_ds(s, rd(17), m, g);
  CHECK(r.hit);
  CHECK(r.way == std::optional<std::uint32_t>{7});
  CHECK(r.latency_cycles == 12);
  CHECK(r.shuffle_moves == 4);
  CHECK(tag_at(s, 1) == 17);
  CHECK(tag_at(s, 3) == 11);
  CHECK(tag_at(s, 5) == 13);
  CHECK(tag_at(s, 7) == 15);
  for (std::uint32_t w : {1u, 3u, 5u, 7u}) CHECK(T(s, w) == 0);
  for (std::uint32_t w : {0u, 2u, 4u, 6u}) CHECK(T(s, w) == 1);
}

TEST_CASE("data shuffling scenario (d): miss inserts at G0 and evicts from G3") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  install(s, g, {{1, 11}, {0, 10}, {3, 13}, {2, 12}, {5, 15}, {4, 14}, {7, 17}, {6, 16}});
  const auto r = access_vasa_ds(s, rd(50), m, g);
  CHECK_FALSE(r.hit);
  CHECK(r.way == std::optional<std::uint32_t>{1});
  CHECK(r.shuffle_moves == 4);
  CHECK(r.evicted_tag == std::optional<std::uint64_t>{17});
  CHECK(tag_at(s, 1) == 50);
  CHECK(tag_at(s, 3) == 11);
  CHECK(tag_at(s, 5) == 13);
  CHECK(tag_at(s, 7) == 15);
  for (std::uint32_t w : {1u, 3u, 5u, 7u}) CHECK(T(s, w) == 0);
  for (std::uint32_t w : {0u, 2u, 4u, 6u}) CHECK(T(s, w) == 1);
}

TEST_CASE("data shuffling agrees with the straight-line transcription") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  std::mt19937_64 rng(2023);
  for (int round = 0; round < 4; ++round) {
    CacheState s(kSet);
    oracle::ShuffleSet ref;
    const std::uint64_t universe = 9 + round * 4;
    for (int i = 0; i < 25'000; ++i) {
      const std::uint64_t tag = rng() % universe;
      const auto expect = ref.access(tag);
      const auto got = access_vasa_ds(s, rd(tag), m, g);
      REQUIRE(got.hit == expect.hit);
      REQUIRE(static_cast<int>(got.way.value_or(99)) == expect.way);
      REQUIRE(static_cast<int>(got.shuffle_moves) == expect.moves);
      REQUIRE(got.evicted_tag == expect.evicted);
      for (std::uint32_t w = 0; w < 8; ++w) {
        const auto& l = s.line(0, w);
        REQUIRE(l.valid == ref.valid[w]);
        if (l.valid) {
          REQUIRE(l.tag == ref.tag[w]);
          REQUIRE(int(l.priority_bit) == ref.t[w]);
        }
      }
    }
  }
}

TEST_CASE("shuffling preserves the tag multiset and T-bit wellformedness") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20'000; ++i) {
    const std::uint64_t tag = rng() % 14;
    auto before = s.valid_tags(0);
    const auto r = access_vasa_ds(s, rd(tag), m, g);
    auto after = s.valid_tags(0);
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    if (r.hit) CHECK(before == after);
    for (const auto& grp : g.groups) {
      int zeros = 0;
      for (auto w : grp) zeros += s.line(0, w).valid && s.line(0, w).priority_bit == 0;
      CHECK(zeros <= 1);
    }
  }
}

TEST_CASE("a repeatedly hit block converges to G0") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  for (std::uint64_t t = 0; t < 8; ++t) access_vasa_ds(s, rd(t), m, g);
  // Tag 0 is now the least recent block in G3.
  auto first = access_vasa_ds(s, rd(0), m, g);
  CHECK(first.hit);
  CHECK(g.group_of_way[*first.way] == 3);
  for (int i = 0; i < 5; ++i) {
    const auto r = access_vasa_ds(s, rd(0), m, g);
    CHECK(r.latency_cycles == 6);
    CHECK(r.shuffle_moves == 0);
    CHECK(s.line(0, *r.way).priority_bit == 0);
  }
}

TEST_CASE("groups larger than two use group LRU") {
  auto m = scenario_map();
  const auto g = build_way_groups(m, 4);
  REQUIRE(g.size() == 2);
  CacheState s(kSet);
  std::mt19937_64 rng(8);
  std::vector<std::uint64_t> resident;
  for (int i = 0; i < 10'000; ++i) {
    const std::uint64_t tag = rng() % 12;
    const auto r = access_vasa_ds(s, rd(tag), m, g);
    if (r.hit && g.group_of_way[*r.way] == 1) CHECK(r.shuffle_moves == 2);
    if (!r.hit && r.evicted_tag) CHECK(r.shuffle_moves == 2);
    for (const auto& grp : g.groups) {
      std::vector<std::uint32_t> ranks;
      for (auto w : grp) {
        if (s.line(0, w).valid) ranks.push_back(s.line(0, w).lru_rank);
      }
      std::sort(ranks.begin(), ranks.end());
      for (std::size_t k = 0; k < ranks.size(); ++k) CHECK(ranks[k] == k);
    }
  }
}

TEST_CASE("shuffling keeps data consistent") {
  const auto m = scenario_map();
  const auto g = build_way_groups(m);
  CacheState s(kSet);
  std::mt19937_64 rng(12);
  std::vector<std::uint64_t> ref(20, 0);
  std::uint64_t id = 0;
  for (int i = 0; i < 30'000; ++i) {
    const std::uint64_t tag = rng() % 20;
    if (rng() % 2) {
      access_vasa_ds(s, {tag * 64, Op::Write, ++id}, m, g);
      ref[tag] = id;
    } else {
      CHECK(access_vasa_ds(s, rd(tag), m, g).data == ref[tag]);
    }
  }
}

TEST_CASE("overhead bookkeeping") {
  const auto g = CacheGeometry::make(2 * 1024 * 1024, 8, 64);
  const auto plain = vasa_overhead(g, false);
  CHECK(plain.delay_register_bytes == 4);
  CHECK(plain.shuffle_register_bytes == 0);
  const auto ds = vasa_overhead(g, true);
  CHECK(ds.priority_bits_per_set == 8);
  CHECK(ds.priority_metadata_bytes == 4096);
  CHECK(ds.shuffle_register_bytes == 260);
}
