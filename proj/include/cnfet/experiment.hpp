#pragma once

// Experiment configuration, the simulation pipeline and report output.
//
// A configuration is a list of flat dotted `key=value` pairs applied over
// defaults. Running one walks variation -> timing -> grouping -> profiling
// -> mapping -> simulation and yields the counters for a report row.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnfet/llc.hpp"
#include "cnfet/metrics.hpp"
#include "cnfet/pagemap.hpp"
#include "cnfet/workload.hpp"

namespace cnfet {

enum class PageMapMode { None, PM, UPM };
std::string_view to_string(PageMapMode mode);
PageMapMode parse_pagemap_mode(std::string_view text);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
  std::string name = "run";
  LlcConfig llc;
  std::optional<std::string> latency_map_path;
  PageMapMode pagemap = PageMapMode::None;
  std::uint32_t page_bytes = 4096;
  std::optional<std::uint64_t> frames;
  bool profile_raw = false;
  std::uint32_t num_cores = 1;
  L1Config l1;
  EnergyParams energy;
  std::optional<std::string> trace_path;
  SyntheticSpec synthetic;
  std::optional<std::string> report_path;
  std::optional<std::string> histogram_path;

  // Rejects inconsistent combinations; throws ConfigError.
  void validate() const;
  // Identifies the input workload for comparisons.
  std::string workload_id() const;
};

// `key=value` lines; `#` comments and blank lines are skipped.
KeyValues parse_key_values(std::istream& in);
// `key=value` from a single command-line token.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

// Applies pairs in order over `base`, then validates. Unknown keys and bad
// values throw ConfigError.
ExperimentConfig apply_config(ExperimentConfig base, const KeyValues& pairs);
inline ExperimentConfig make_config(const KeyValues& pairs) { return apply_config({}, pairs); }

// Every recognised key.
std::span<const std::string_view> config_keys();

std::vector<TraceRecord> load_workload(const ExperimentConfig& config);

// The LLC-bound stream: the workload after the L1 filter, if enabled.
std::vector<TraceRecord> llc_stream(const ExperimentConfig& config,
                                    std::span<const TraceRecord> workload);

struct ExperimentResult {
  std::string name;
  ExperimentConfig config;
  RunStats stats;
  double amat_cycles = 0.0;
  Energy energy;
  std::optional<PageMap> page_map;
  std::optional<FrameInventory> inventory;
  PageProfile profile;
  std::uint64_t mapping_cost = 0;
  std::vector<double> bank_mean_latency;
  std::uint64_t l1_misses = 0;
};

// Builds the LLC for a configuration (sampling or loading its maps).
Llc build_llc(const ExperimentConfig& config);

// Frame inventory tagged with the LLC's per-frame hit latency, and the page
// map for the configured mode; frames default to enough whole copies of the
// cache's colours to hold every profiled page.
FrameInventory build_inventory(const ExperimentConfig& config, const Llc& llc,
                               std::size_t pages);
FrameCost frame_cost(const ExperimentConfig& config, PageMapMode mode);

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const TraceRecord> workload);

// One CSV row per result with every RunStats counter.
void write_report(std::ostream& out, std::span<const ExperimentResult> results);

// Ratios of hit latency, AMAT and energy against the first result. Throws
// ConfigError when workloads or variation seeds differ.
void write_comparison(std::ostream& out, std::span<const ExperimentResult> results);

// Register and metadata overheads of the configured policy as `key,value`.
void write_overhead(std::ostream& out, const ExperimentConfig& config);

// Built-in experiment sets: uca-set-aligned, uca-way-aligned,
// nuca-set-aligned, nuca-way-aligned, six-policy.
std::vector<std::string_view> recipe_names();
std::vector<KeyValues> recipe(std::string_view name);

}  // namespace cnfet
