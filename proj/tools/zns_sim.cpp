#include "zonesim/config.hpp"
#include "zonesim/errors.hpp"
#include "zonesim/experiment.hpp"
#include "zonesim/geometry.hpp"
#include "zonesim/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace zonesim;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct RunArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string recipe;
  std::string out = "zns-out";
  std::string seeds = "1";
  unsigned parallel = 1;
};

struct VerifyArgs {
  std::string scope = "all";
  std::uint64_t instances = 400;
  std::uint64_t commands = 20'000;
  std::uint64_t seed = 1;
  bool mutant = false;
};

int cmd_run(const RunArgs& a) {
  ConfigDocument base = a.config.empty() ? ConfigDocument{} : ConfigDocument::load(a.config);
  for (const auto& s : a.sets) base.apply_override(s);
  const auto seeds = parse_seed_list(a.seeds);
  const ExperimentPlan plan = a.recipe.empty() ? config_plan(base, seeds) : recipe_plan(a.recipe, base, seeds);
  std::cerr << "plan " << plan.name << ": " << plan.runs.size() << " runs -> " << a.out << "\n";
  const auto rows = run_plan(plan, a.out, a.parallel);
  std::size_t oos = 0;
  for (const auto& r : rows) oos += r.outcome != "completed";
  const auto tables = write_reports(a.out);
  std::cout << "wrote " << rows.size() << " rows to " << a.out << "/metrics.csv";
  if (oos > 0) std::cout << " (" << oos << " out of space)";
  std::cout << ", " << tables.size() << " report tables\n";
  return kOk;
}

bool report_check(std::string_view name, const verify::CheckReport& r) {
  std::cout << name << ": " << r.checked << " checked";
  if (r.feasible != 0) std::cout << " (" << r.feasible << " feasible)";
  if (r.ok()) {
    std::cout << ", ok\n";
    return true;
  }
  std::cout << ", VIOLATION\n" << *r.counterexample << "\n";
  return false;
}

int cmd_verify(const VerifyArgs& a) {
  bool ok = true;
  const bool all = a.scope == "all";
  if (all || a.scope == "allocator") {
    const verify::Solver solver = a.mutant ? verify::Solver(verify::mutant_solve) : verify::Solver(allocate);
    ok = report_check("allocator", verify::check_allocator(a.instances, a.seed, solver)) && ok;
  }
  if (all || a.scope == "statemachine") {
    ok = report_check("statemachine", verify::check_state_machine()) && ok;
  }
  if (all || a.scope == "invariants") {
    const DeviceGeometry g = validate_geometry(g_small_profile());
    for (const char* s : {"lazy", "direct", "chunk-1", "chunk-2", "stripe"}) {
      const StrategyConfig st = validate_strategy(parse_strategy_name(s), g);
      ok = report_check(std::string("invariants ") + s, verify::check_invariants(g, st, a.commands, a.seed)) && ok;
    }
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zoned SSD simulator with flexible zone allocation"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute a recipe or a config sweep");
  run_cmd->add_option("--config", run.config, "INI config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--set", run.sets, "key=value override (repeatable)");
  run_cmd->add_option("--recipe", run.recipe, "fig3a, fig3b, fig3c, fig3d, fig4a, fig4c or all")
      ->check(CLI::IsMember({"fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4c", "all"}));
  run_cmd->add_option("--out", run.out, "output directory")->capture_default_str();
  run_cmd->add_option("--seeds", run.seeds, "comma-separated seed list")->capture_default_str();
  run_cmd->add_option("--parallel", run.parallel, "worker threads")->capture_default_str();

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check the allocator and zone state machine");
  verify_cmd->add_option("--scope", ver.scope)
      ->check(CLI::IsMember({"all", "allocator", "statemachine", "invariants"}))
      ->capture_default_str();
  verify_cmd->add_option("--instances", ver.instances, "random allocator instances per mode")->capture_default_str();
  verify_cmd->add_option("--commands", ver.commands, "random commands per strategy")->capture_default_str();
  verify_cmd->add_option("--seed", ver.seed)->capture_default_str();
  verify_cmd->add_flag("--mutant", ver.mutant)->group("");

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "Rebuild per-figure tables from run traces");
  report_cmd->add_option("dir", report_dir, "output directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*verify_cmd) return cmd_verify(ver);
    if (*report_cmd) {
      for (const auto& p : write_reports(report_dir)) std::cout << p.string() << "\n";
      return kOk;
    }
  } catch (const ZnsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
