#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "cnfet/experiment.hpp"
#include "cnfet/timing.hpp"

namespace {

using namespace cnfet;

struct CommonArgs {
  std::vector<std::string> config_files;
  std::vector<std::string> sets;
  std::string recipe_name;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool many_configs) {
  if (many_configs) {
    cmd->add_option("-c,--config", args.config_files, "configuration file (repeatable)");
  } else {
    cmd->add_option("-c,--config", args.config_files, "configuration file")->expected(0, 1);
  }
  cmd->add_option("-s,--set", args.sets, "override a key: key=value (repeatable)");
}

KeyValues read_file_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open configuration '{}'", path));
  return parse_key_values(in);
}

KeyValues overrides(const CommonArgs& args) {
  KeyValues kv;
  for (const auto& s : args.sets) kv.push_back(parse_assignment(s));
  return kv;
}

// One config per file (or per recipe entry), each followed by the overrides.
std::vector<ExperimentConfig> collect_configs(const CommonArgs& args) {
  std::vector<KeyValues> bases;
  if (!args.recipe_name.empty()) {
    for (auto& kv : recipe(args.recipe_name)) bases.push_back(std::move(kv));
    if (!args.config_files.empty()) {
      const auto file = read_file_pairs(args.config_files.front());
      for (auto& b : bases) b.insert(b.end(), file.begin(), file.end());
    }
  } else if (!args.config_files.empty()) {
    for (const auto& f : args.config_files) bases.push_back(read_file_pairs(f));
  } else {
    bases.emplace_back();
  }
  const auto extra = overrides(args);
  std::vector<ExperimentConfig> out;
  for (auto& b : bases) {
    b.insert(b.end(), extra.begin(), extra.end());
    out.push_back(make_config(b));
  }
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  fn(out);
}

void cmd_gen_variation(const CommonArgs& args, const std::string& out_path,
                       const std::string& summary_path) {
  const auto config = collect_configs(args).front();
  const auto maps = sample_bank_maps(config.llc);
  for (std::size_t b = 0; b < maps.size(); ++b) {
    std::string path = out_path;
    if (maps.size() > 1 && !path.empty() && path != "-") path += fmt::format(".bank{}", b);
    emit(path, [&](std::ostream& os) { write_latency_map(os, maps[b]); });
  }
  if (!summary_path.empty()) {
    emit(summary_path, [&](std::ostream& os) {
      os << "bank,metric,value\n";
      for (std::size_t b = 0; b < maps.size(); ++b) {
        CntParams params = config.llc.cnt;
        if (maps.size() > 1) params.seed = mix_seed(config.llc.cnt.seed, b);
        const auto strengths = sample_group_strengths(
            params, maps[b].size(), config.llc.timing.stages_per_group);
        const double nominal = config.llc.timing.nominal_count.value_or(
            reference_strength(params, config.llc.timing.stages_per_group));
        const auto s = summarize(maps[b], strengths, nominal);
        fmt::print(os, "{},min,{}\n{},max,{}\n{},mode,{}\n", b, s.min, b, s.max, b, s.mode);
        fmt::print(os, "{},mean,{:.6f}\n", b, s.mean);
        fmt::print(os, "{},raw_spread,{:.6f}\n{},quantized_spread,{:.6f}\n", b, s.raw_spread, b,
                   s.quantized_spread);
        fmt::print(os, "{},failed_groups,{}\n", b, maps[b].failed.size());
        for (const auto& [cycles, n] : s.histogram) fmt::print(os, "{},hist_{},{}\n", b, cycles, n);
      }
    });
  }
}

void cmd_simulate(const CommonArgs& args, std::string report_path, std::string histogram_path,
                  const std::string& overhead_path, const std::string& page_map_path) {
  const auto configs = collect_configs(args);
  std::vector<ExperimentResult> results;
  for (const auto& c : configs) results.push_back(run_experiment(c));
  if (report_path.empty() && configs.front().report_path) report_path = *configs.front().report_path;
  if (histogram_path.empty() && configs.front().histogram_path) {
    histogram_path = *configs.front().histogram_path;
  }
  emit(report_path, [&](std::ostream& os) { write_report(os, results); });
  if (!histogram_path.empty()) {
    emit(histogram_path, [&](std::ostream& os) {
      os << "name,cycles,count\n";
      for (const auto& r : results) {
        for (const auto& [cycles, n] : r.stats.hit_latency_histogram) {
          fmt::print(os, "{},{},{}\n", r.name, cycles, n);
        }
      }
    });
  }
  if (!overhead_path.empty()) {
    emit(overhead_path, [&](std::ostream& os) { write_overhead(os, configs.front()); });
  }
  if (!page_map_path.empty()) {
    if (!results.front().page_map) throw ConfigError("page mapping is disabled for this run");
    emit(page_map_path, [&](std::ostream& os) { write_page_map(os, *results.front().page_map); });
  }
}

void cmd_profile(const CommonArgs& args, const std::string& out_path,
                 const std::string& page_map_path) {
  auto config = collect_configs(args).front();
  const auto workload = load_workload(config);
  const auto stream = llc_stream(config, workload);
  const auto profile = config.profile_raw
                           ? profile_records(workload, config.page_bytes, config.num_cores)
                           : profile_records(stream, config.page_bytes, config.num_cores);
  emit(out_path, [&](std::ostream& os) { write_profile(os, profile); });
  if (!page_map_path.empty()) {
    const auto mode = config.pagemap == PageMapMode::None ? PageMapMode::PM : config.pagemap;
    const Llc llc = build_llc(config);
    const auto inventory = build_inventory(config, llc, profile.pages.size());
    const auto map = assign_pages(profile, inventory, frame_cost(config, mode));
    emit(page_map_path, [&](std::ostream& os) { write_page_map(os, map); });
  }
}

void cmd_compare(const CommonArgs& args, const std::string& out_path) {
  const auto configs = collect_configs(args);
  if (configs.size() < 2) throw ConfigError("compare needs at least two configurations");
  std::vector<ExperimentResult> results;
  for (const auto& c : configs) {
    if (c.workload_id() != configs.front().workload_id()) {
      throw ConfigError(fmt::format("workload of '{}' differs from '{}'", c.name,
                                    configs.front().name));
    }
  }
  for (const auto& c : configs) results.push_back(run_experiment(c));
  emit(out_path, [&](std::ostream& os) { write_comparison(os, results); });
}

void cmd_gen_trace(const CommonArgs& args, const std::string& out_path) {
  const auto config = collect_configs(args).front();
  const auto records = generate_synthetic(config.synthetic);
  emit(out_path, [&](std::ostream& os) { write_trace(os, records); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven simulator of CNFET last-level caches under process variation"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string out, summary, report, histogram, overhead, page_map;

  auto* gen_var = app.add_subcommand("gen-variation", "sample and write a latency map");
  add_common(gen_var, args, false);
  gen_var->add_option("-o,--out", out, "latency map file (default stdout)");
  gen_var->add_option("--summary", summary, "distribution summary CSV");

  auto* sim = app.add_subcommand("simulate", "run one configuration or a recipe");
  add_common(sim, args, false);
  sim->add_option("-r,--recipe", args.recipe_name, "built-in recipe");
  sim->add_option("-o,--report", report, "report CSV (default stdout)");
  sim->add_option("--histogram", histogram, "hit latency histogram CSV");
  sim->add_option("--overhead", overhead, "register overhead CSV");
  sim->add_option("--page-map", page_map, "write the page map used by the run");

  auto* prof = app.add_subcommand("profile", "profile page hotness and optionally map pages");
  add_common(prof, args, false);
  prof->add_option("-o,--out", out, "profile CSV (default stdout)");
  prof->add_option("--page-map", page_map, "page map output");

  auto* cmp = app.add_subcommand("compare", "normalised comparison against the first config");
  add_common(cmp, args, true);
  cmp->add_option("-r,--recipe", args.recipe_name, "built-in recipe");
  cmp->add_option("-o,--out", out, "comparison CSV (default stdout)");

  auto* gen_trace = app.add_subcommand("gen-trace", "write a synthetic trace");
  add_common(gen_trace, args, false);
  gen_trace->add_option("-o,--out", out, "trace file (default stdout)");

  auto* recipes = app.add_subcommand("recipes", "list built-in recipes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_var) cmd_gen_variation(args, out, summary);
    else if (*sim) cmd_simulate(args, report, histogram, overhead, page_map);
    else if (*prof) cmd_profile(args, out, page_map);
    else if (*cmp) cmd_compare(args, out);
    else if (*gen_trace) cmd_gen_trace(args, out);
    else if (*recipes) {
      for (auto name : recipe_names()) fmt::print("{}\n", name);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
