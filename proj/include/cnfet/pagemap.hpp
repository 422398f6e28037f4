#pragma once

// Two-pass variation-aware page mapping: profile page hotness, tag physical
// frames by latency, hand the hottest pages the cheapest frames.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "cnfet/workload.hpp"

namespace cnfet {

// Sets covered by one page: page_bytes / (line_bytes * ways).
std::uint32_t page_granularity(std::uint32_t page_bytes, std::uint32_t line_bytes,
                               std::uint32_t num_ways);

struct PageCounts {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> per_core;

  // Core with the most accesses, lowest id on ties.
  std::uint32_t dominant_core() const;
};

struct PageProfile {
  std::uint32_t num_cores = 1;
  std::uint32_t page_bytes = 4096;
  std::map<std::uint64_t, PageCounts> pages;  // by virtual page number

  void add(std::uint64_t vpage, std::uint32_t core, std::uint64_t n = 1);
  // Associative, commutative merge of shard profiles.
  void merge(const PageProfile& other);
  std::uint64_t total() const;
};

// Counts records per virtual page, as given.
PageProfile profile_records(std::span<const TraceRecord> records, std::uint32_t page_bytes,
                            std::uint32_t num_cores);

// Counts LLC-bound accesses: the trace after the L1 filter (or the raw trace
// when the filter is disabled).
PageProfile profile_trace(std::span<const TraceRecord> records, const L1Config& l1,
                          std::uint32_t page_bytes, std::uint32_t num_cores);

// Physical placement of frames. A frame is one page colour: G consecutive
// sets of one bank across all W ways. Line i of a page lands in set
// first_set + (i mod G) and in the (i / G)-th way-sized chunk of the frame's
// address stride, so with conventional set indexing the page occupies exactly
// its G sets.
struct FrameLayout {
  std::uint32_t page_bytes = 4096;
  std::uint32_t line_bytes = 64;
  std::uint32_t num_ways = 8;
  std::uint32_t sets_per_bank = 4096;
  std::uint32_t num_banks = 1;

  std::uint32_t granularity() const;
  std::uint32_t colors_per_bank() const { return sets_per_bank / granularity(); }
  // Frame number -> (bank, first set, copy).
  std::uint32_t bank_of_frame(std::uint64_t frame) const;
  std::uint32_t first_set_of_frame(std::uint64_t frame) const;
  std::uint64_t physical_address(std::uint64_t frame, std::uint32_t page_offset) const;
  void validate() const;
};

struct Frame {
  std::uint64_t number = 0;
  std::uint32_t bank = 0;
  std::uint32_t first_set = 0;  // within the bank, G-aligned
  std::uint32_t latency_class = 0;
};

struct FrameInventory {
  FrameLayout layout;
  std::vector<Frame> frames;  // ordered by frame number
};

// Frames 0..num_frames-1 of `layout`; latency_of(bank, first_set) tags each.
FrameInventory make_frame_inventory(
    const FrameLayout& layout, std::uint64_t num_frames,
    const std::function<std::uint32_t(std::uint32_t bank, std::uint32_t first_set)>& latency_of);

class PageMap {
 public:
  FrameLayout layout;
  std::map<std::uint64_t, std::uint64_t> frames;  // vpage -> frame

  // Unmapped pages pass through untranslated.
  std::uint64_t translate(std::uint64_t vaddr) const;
  bool injective() const;
};

// Cost of placing a page whose dominant core is `core` in `frame`.
using FrameCost = std::function<std::uint32_t(const Frame& frame, std::uint32_t core)>;

// Pages by count descending (ties: lower page); each takes the cheapest free
// frame for its dominant core (ties: lower frame number). With a
// core-independent cost this is the sort-and-zip greedy. Throws
// CapacityError when pages outnumber frames.
PageMap assign_pages(const PageProfile& profile, const FrameInventory& inventory,
                     const FrameCost& cost);

// Frame latency tags as the cost.
PageMap assign_pages(const PageProfile& profile, const FrameInventory& inventory);

// Sum of count * cost(frame, dominant core) over mapped pages.
std::uint64_t mapping_cost(const PageProfile& profile, const PageMap& map,
                           const FrameInventory& inventory, const FrameCost& cost);

// `vpage,frame[,bank]`; the bank column appears for multi-bank layouts.
void write_page_map(std::ostream& out, const PageMap& map);
PageMap read_page_map(std::istream& in, const FrameLayout& layout);
// `vpage,count,core0,core1,...`
void write_profile(std::ostream& out, const PageProfile& profile);

}  // namespace cnfet
