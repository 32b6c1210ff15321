#pragma once

#include "zonesim/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zonesim {

// One simulation: a fully resolved config plus the seed.
struct RunSpec {
  std::string id;
  ConfigDocument config;
  std::uint64_t seed = 1;
};

struct ExperimentPlan {
  std::string name = "custom";
  std::vector<RunSpec> runs;

  // Throws InvalidValue on duplicate run ids.
  void validate() const;
  std::string to_json() const;
};

// fig3a (occupancy sweep), fig3b/fig3c/fig4c (threshold sweep), fig3d (wear
// run), fig4a (interference bench), all.
std::vector<std::string_view> recipe_names();

// Recipes take the device from `base` (or a recipe default profile) and
// accept list overrides: workload.strategies, workload.thresholds,
// workload.occupancy and workload.jobs ("a,b,c").
ExperimentPlan recipe_plan(std::string_view recipe, const ConfigDocument& base,
                           std::span<const std::uint64_t> seeds);

// A plan from a single config; comma-separated strategy.kind,
// workload.finish_threshold, workload.occupancy and workload.jobs values
// expand into a cartesian sweep.
ExperimentPlan config_plan(const ConfigDocument& base, std::span<const std::uint64_t> seeds);

// One metrics.csv row. Empty optionals render as empty cells.
struct MetricsRow {
  std::string run_id;
  std::string strategy;
  std::string workload;
  std::optional<std::uint32_t> finish_threshold;
  std::optional<double> dlwa;
  std::optional<double> sa_bytes;
  std::optional<double> sa_norm;
  std::optional<double> wear_median;
  std::optional<double> wear_stddev;
  std::optional<double> interference;
  std::int64_t makespan_us = 0;
  std::uint64_t seed = 0;
  std::optional<double> occupancy;
  std::optional<std::uint32_t> jobs;
  std::string outcome = "completed";
  std::uint64_t host_bytes = 0;
  std::uint64_t dummy_bytes = 0;

  static std::string csv_header();
  std::string csv_line() const;
};

// Executes one run, writing `run_dir`/events.jsonl.
MetricsRow execute_run(const RunSpec& run, const std::filesystem::path& run_dir);

// Executes every run (sequentially, or on `parallel` worker threads) and
// writes metrics.csv, summary.json, plan.json and runs/<id>/events.jsonl
// under `out_dir`. Rows come back in plan order.
std::vector<MetricsRow> run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_dir,
                                 unsigned parallel = 1);

// Builds the per-figure CSV tables from `out_dir`/runs/*/events.jsonl alone
// and writes them to `out_dir`. Throws MissingRuns when there are no traces.
// Returns the files written.
std::vector<std::filesystem::path> write_reports(const std::filesystem::path& out_dir);

std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace zonesim
