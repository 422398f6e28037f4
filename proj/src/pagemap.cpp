#include "cnfet/pagemap.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "cnfet/kernels.hpp"
#include "text_util.hpp"

namespace cnfet {

std::uint32_t page_granularity(std::uint32_t page_bytes, std::uint32_t line_bytes,
                               std::uint32_t num_ways) {
  const std::uint64_t row = std::uint64_t{line_bytes} * num_ways;
  if (row == 0 || page_bytes == 0 || page_bytes % row != 0) {
    throw ConfigError(fmt::format("page size {} is not a multiple of line_bytes*ways = {}",
                                  page_bytes, row));
  }
  return static_cast<std::uint32_t>(page_bytes / row);
}

std::uint32_t PageCounts::dominant_core() const {
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < per_core.size(); ++c) {
    if (per_core[c] > per_core[best]) best = c;
  }
  return best;
}

void PageProfile::add(std::uint64_t vpage, std::uint32_t core, std::uint64_t n) {
  if (core >= num_cores) throw ConfigError("profile core id out of range");
  auto& entry = pages[vpage];
  if (entry.per_core.empty()) entry.per_core.assign(num_cores, 0);
  entry.count += n;
  entry.per_core[core] += n;
}

void PageProfile::merge(const PageProfile& other) {
  if (other.num_cores != num_cores || other.page_bytes != page_bytes) {
    throw ConfigError("cannot merge profiles with different shapes");
  }
  for (const auto& [vpage, counts] : other.pages) {
    for (std::uint32_t c = 0; c < num_cores; ++c) {
      if (counts.per_core[c] != 0) add(vpage, c, counts.per_core[c]);
    }
  }
}

std::uint64_t PageProfile::total() const {
  std::uint64_t t = 0;
  for (const auto& [_, c] : pages) t += c.count;
  return t;
}

PageProfile profile_records(std::span<const TraceRecord> records, std::uint32_t page_bytes,
                            std::uint32_t num_cores) {
  if (page_bytes == 0) throw ConfigError("page size must be positive");
  PageProfile profile;
  profile.num_cores = num_cores;
  profile.page_bytes = page_bytes;
  for (const auto& r : records) profile.add(r.vaddr / page_bytes, r.core);
  return profile;
}

PageProfile profile_trace(std::span<const TraceRecord> records, const L1Config& l1,
                          std::uint32_t page_bytes, std::uint32_t num_cores) {
  if (!l1.enabled) return profile_records(records, page_bytes, num_cores);
  const auto filtered = l1_filter(records, l1, num_cores);
  return profile_records(filtered.llc_records, page_bytes, num_cores);
}

std::uint32_t FrameLayout::granularity() const {
  return page_granularity(page_bytes, line_bytes, num_ways);
}

void FrameLayout::validate() const {
  const auto g = granularity();
  if (!is_power_of_two(page_bytes) || !is_power_of_two(line_bytes) || !is_power_of_two(num_ways) ||
      !is_power_of_two(sets_per_bank) || !is_power_of_two(num_banks)) {
    throw ConfigError("frame layout fields must be powers of two");
  }
  if (sets_per_bank % g != 0) throw ConfigError("page granularity exceeds the sets per bank");
}

std::uint32_t FrameLayout::bank_of_frame(std::uint64_t frame) const {
  return static_cast<std::uint32_t>((frame / colors_per_bank()) % num_banks);
}

std::uint32_t FrameLayout::first_set_of_frame(std::uint64_t frame) const {
  return static_cast<std::uint32_t>(frame % colors_per_bank()) * granularity();
}

std::uint64_t FrameLayout::physical_address(std::uint64_t frame, std::uint32_t page_offset) const {
  const std::uint64_t g = granularity();
  const std::uint64_t colors = colors_per_bank();
  const std::uint64_t copy = frame / (colors * num_banks);
  const std::uint64_t line = page_offset / line_bytes;
  const std::uint64_t set = first_set_of_frame(frame) + line % g;
  const std::uint64_t chunk = line / g;
  const std::uint64_t tag_part = copy * num_ways + chunk;
  const std::uint64_t line_number = (tag_part * num_banks + bank_of_frame(frame)) * sets_per_bank + set;
  return line_number * line_bytes + page_offset % line_bytes;
}

FrameInventory make_frame_inventory(
    const FrameLayout& layout, std::uint64_t num_frames,
    const std::function<std::uint32_t(std::uint32_t bank, std::uint32_t first_set)>& latency_of) {
  layout.validate();
  FrameInventory inv;
  inv.layout = layout;
  inv.frames.reserve(num_frames);
  for (std::uint64_t f = 0; f < num_frames; ++f) {
    Frame frame;
    frame.number = f;
    frame.bank = layout.bank_of_frame(f);
    frame.first_set = layout.first_set_of_frame(f);
    frame.latency_class = latency_of(frame.bank, frame.first_set);
    inv.frames.push_back(frame);
  }
  return inv;
}

std::uint64_t PageMap::translate(std::uint64_t vaddr) const {
  const std::uint64_t vpage = vaddr / layout.page_bytes;
  const auto it = frames.find(vpage);
  if (it == frames.end()) return vaddr;
  return layout.physical_address(it->second, static_cast<std::uint32_t>(vaddr % layout.page_bytes));
}

bool PageMap::injective() const {
  std::set<std::uint64_t> seen;
  for (const auto& [_, f] : frames) {
    if (!seen.insert(f).second) return false;
  }
  return true;
}

PageMap assign_pages(const PageProfile& profile, const FrameInventory& inventory,
                     const FrameCost& cost) {
  if (profile.pages.size() > inventory.frames.size()) {
    throw CapacityError(fmt::format("{} pages but only {} frames", profile.pages.size(),
                                    inventory.frames.size()));
  }
  std::vector<std::pair<std::uint64_t, const PageCounts*>> pages;
  pages.reserve(profile.pages.size());
  for (const auto& [vpage, counts] : profile.pages) pages.emplace_back(vpage, &counts);
  std::stable_sort(pages.begin(), pages.end(), [](const auto& a, const auto& b) {
    return a.second->count > b.second->count;
  });

  struct Cursor {
    std::vector<std::size_t> order;
    std::size_t next = 0;
  };
  std::unordered_map<std::uint32_t, Cursor> cursors;
  std::vector<std::uint8_t> used(inventory.frames.size(), 0);

  auto cursor_for = [&](std::uint32_t core) -> Cursor& {
    auto [it, inserted] = cursors.try_emplace(core);
    if (inserted) {
      std::vector<std::pair<std::uint32_t, std::size_t>> keyed;
      keyed.reserve(inventory.frames.size());
      for (std::size_t i = 0; i < inventory.frames.size(); ++i) {
        keyed.emplace_back(cost(inventory.frames[i], core), i);
      }
      std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return inventory.frames[a.second].number < inventory.frames[b.second].number;
      });
      it->second.order.reserve(keyed.size());
      for (const auto& k : keyed) it->second.order.push_back(k.second);
    }
    return it->second;
  };

  PageMap map;
  map.layout = inventory.layout;
  for (const auto& [vpage, counts] : pages) {
    auto& cur = cursor_for(counts->dominant_core());
    while (used[cur.order[cur.next]]) ++cur.next;
    const std::size_t idx = cur.order[cur.next];
    used[idx] = 1;
    map.frames.emplace(vpage, inventory.frames[idx].number);
  }
  return map;
}

PageMap assign_pages(const PageProfile& profile, const FrameInventory& inventory) {
  return assign_pages(profile, inventory,
                      [](const Frame& f, std::uint32_t) { return f.latency_class; });
}

std::uint64_t mapping_cost(const PageProfile& profile, const PageMap& map,
                           const FrameInventory& inventory, const FrameCost& cost) {
  std::unordered_map<std::uint64_t, std::size_t> by_number;
  for (std::size_t i = 0; i < inventory.frames.size(); ++i) by_number[inventory.frames[i].number] = i;
  std::vector<std::uint64_t> weights;
  std::vector<std::uint32_t> costs;
  for (const auto& [vpage, frame] : map.frames) {
    const auto p = profile.pages.find(vpage);
    if (p == profile.pages.end()) continue;
    const auto f = by_number.find(frame);
    if (f == by_number.end()) throw ConfigError("page mapped to a frame outside the inventory");
    weights.push_back(p->second.count);
    costs.push_back(cost(inventory.frames[f->second], p->second.dominant_core()));
  }
  return kernels::active().weighted_sum(weights.data(), costs.data(), weights.size());
}

void write_page_map(std::ostream& out, const PageMap& map) {
  for (const auto& [vpage, frame] : map.frames) {
    if (map.layout.num_banks > 1) {
      fmt::print(out, "{},{},{}\n", vpage, frame, map.layout.bank_of_frame(frame));
    } else {
      fmt::print(out, "{},{}\n", vpage, frame);
    }
  }
}

PageMap read_page_map(std::istream& in, const FrameLayout& layout) {
  PageMap map;
  map.layout = layout;
  text::for_each_data_line(in, [&](std::size_t line_no, std::string_view line) {
    const auto f = text::split(line, ',');
    if (f.size() != 2 && f.size() != 3) throw ParseError(line_no, "expected vpage,frame[,bank]");
    const auto vpage = text::require_uint<std::uint64_t>(f[0], line_no, "vpage");
    const auto frame = text::require_uint<std::uint64_t>(f[1], line_no, "frame");
    if (f.size() == 3 &&
        text::require_uint<std::uint32_t>(f[2], line_no, "bank") != layout.bank_of_frame(frame)) {
      throw ParseError(line_no, "bank column disagrees with the frame number");
    }
    if (!map.frames.emplace(vpage, frame).second) throw ParseError(line_no, "duplicate vpage");
  });
  return map;
}

void write_profile(std::ostream& out, const PageProfile& profile) {
  for (const auto& [vpage, counts] : profile.pages) {
    fmt::print(out, "{},{},{}\n", vpage, counts.count, fmt::join(counts.per_core, ","));
  }
}

}  // namespace cnfet
