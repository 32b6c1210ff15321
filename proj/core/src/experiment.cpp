#include "zonesim/experiment.hpp"

#include "zonesim/device.hpp"
#include "zonesim/errors.hpp"
#include "zonesim/flash.hpp"
#include "zonesim/geometry.hpp"
#include "zonesim/metrics.hpp"
#include "zonesim/trace.hpp"
#include "zonesim/workloads.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace zonesim {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    std::string t = text;
    const bool percent = !t.empty() && t.back() == '%';
    if (percent) t.pop_back();
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(key);
    return percent ? v / 100.0 : v;
  } catch (const std::logic_error&) {
    throw ZnsError(ErrorCode::InvalidValue, key + ": not a number: '" + text + "'");
  }
}

std::uint64_t get_u64(const ConfigDocument& c, const std::string& key, std::uint64_t fallback) {
  auto v = c.get(key);
  return v ? parse_size(*v, key) : fallback;
}

double get_double(const ConfigDocument& c, const std::string& key, double fallback) {
  auto v = c.get(key);
  return v ? parse_double(*v, key) : fallback;
}

std::string fmt(double v) { return format_ratio(v); }

std::string pct_label(double occupancy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "o%g", occupancy * 100.0);
  return buf;
}

std::string make_run_id(const ConfigDocument& c, std::uint64_t seed) {
  const std::string kind = c.get_or("workload.kind", "occupancy");
  std::string id = kind + "-" + c.get_or("strategy.kind", "stripe");
  if (kind == "occupancy") id += "-" + pct_label(get_double(c, "workload.occupancy", 0.5));
  if (kind == "zenfs" || kind == "wear") id += "-t" + c.get_or("workload.finish_threshold", "90");
  if (kind == "interference" || kind == "fio") id += "-j" + c.get_or("workload.jobs", "1");
  if (kind == "fio") id += "-" + c.get_or("workload.pattern", "seq_write");
  return id + "-s" + std::to_string(seed);
}

// Expands comma lists in `keys` into the cartesian product of configs.
std::vector<ConfigDocument> expand(const ConfigDocument& base, const std::vector<std::string>& keys) {
  std::vector<ConfigDocument> out{base};
  for (const std::string& key : keys) {
    std::vector<ConfigDocument> next;
    for (const ConfigDocument& doc : out) {
      auto v = doc.get(key);
      if (!v || v->find(',') == std::string::npos) {
        next.push_back(doc);
        continue;
      }
      for (const std::string& item : split_list(*v)) {
        ConfigDocument d = doc;
        d.set(key, item);
        next.push_back(std::move(d));
      }
    }
    out = std::move(next);
  }
  return out;
}

void add_runs(ExperimentPlan& plan, const std::vector<ConfigDocument>& docs,
              std::span<const std::uint64_t> seeds) {
  for (const ConfigDocument& doc : docs) {
    for (std::uint64_t seed : seeds) {
      RunSpec r;
      r.config = doc;
      r.seed = seed;
      r.id = make_run_id(doc, seed);
      plan.runs.push_back(std::move(r));
    }
  }
}

ConfigDocument with_default_device(const ConfigDocument& base, std::string_view profile) {
  ConfigDocument doc = base;
  bool has_device = false;
  for (const auto& k : base.keys()) has_device = has_device || k.rfind("device.", 0) == 0;
  if (!has_device) doc.set("device.profile", std::string(profile));
  return doc;
}

// Recipe default unless the user supplied a list.
std::string list_or(const ConfigDocument& base, const std::string& key, const std::string& fallback) {
  return base.get_or(key, fallback);
}

ExperimentPlan single_recipe(std::string_view recipe, const ConfigDocument& base,
                             std::span<const std::uint64_t> seeds) {
  ExperimentPlan plan;
  plan.name = std::string(recipe);
  if (recipe == "fig3a") {
    ConfigDocument doc = with_default_device(base, "zn540");
    doc.set("workload.kind", "occupancy");
    const DeviceGeometry geom = geometry_from_config(doc);
    std::string strategies;
    for (const std::string& s :
         split_list(list_or(base, "workload.strategies", "direct,lazy,chunk-1,chunk-2,chunk-11,stripe"))) {
      try {
        validate_strategy(parse_strategy_name(s), geom);
      } catch (const ZnsError& e) {
        if (e.code() != ErrorCode::InvalidChunkSize) throw;
        continue;  // chunk size not valid for this device
      }
      strategies += (strategies.empty() ? "" : ",") + s;
    }
    doc.set("strategy.kind", strategies);
    doc.set("workload.occupancy", list_or(base, "workload.occupancy", "0.10,0.25,0.50,0.75,0.95"));
    // Occupancy runs are seed-independent.
    add_runs(plan, expand(doc, {"strategy.kind", "workload.occupancy"}), seeds.first(1));
  } else if (recipe == "fig3b" || recipe == "fig3c" || recipe == "fig4c") {
    ConfigDocument doc = with_default_device(base, "desk");
    doc.set("workload.kind", "zenfs");
    doc.set("strategy.kind", list_or(base, "workload.strategies", "lazy,stripe"));
    doc.set("workload.finish_threshold", list_or(base, "workload.thresholds", "0,10,50,90,99"));
    add_runs(plan, expand(doc, {"strategy.kind", "workload.finish_threshold"}), seeds);
  } else if (recipe == "fig3d") {
    ConfigDocument doc = with_default_device(base, "desk");
    doc.set("workload.kind", "wear");
    doc.set("strategy.kind", list_or(base, "workload.strategies", "lazy,stripe"));
    doc.set("workload.finish_threshold", list_or(base, "workload.thresholds", "90"));
    if (!doc.has("workload.repeats")) doc.set("workload.repeats", "8");
    add_runs(plan, expand(doc, {"strategy.kind", "workload.finish_threshold"}), seeds);
  } else if (recipe == "fig4a") {
    ConfigDocument doc = with_default_device(base, "zn540");
    doc.set("workload.kind", "interference");
    doc.set("strategy.kind", list_or(base, "workload.strategies", "lazy,chunk-11,chunk-2,chunk-1,stripe"));
    doc.set("workload.jobs", list_or(base, "workload.jobs", "1,2,3,4,5,6,7"));
    add_runs(plan, expand(doc, {"strategy.kind", "workload.jobs"}), seeds);
  } else {
    throw ZnsError(ErrorCode::UnknownRecipe, "unknown recipe '" + std::string(recipe) + "'");
  }
  return plan;
}

// ---------------------------------------------------------------------------
// run execution

std::map<std::string, std::string> meta_fields(const RunSpec& run, const DeviceGeometry& geom,
                                               const StrategyConfig& strategy) {
  std::map<std::string, std::string> m;
  for (const std::string& key : run.config.keys()) m["cfg." + key] = *run.config.get(key);
  m["run_id"] = run.id;
  m["seed"] = std::to_string(run.seed);
  m["workload"] = run.config.get_or("workload.kind", "occupancy");
  m["strategy"] = strategy_name(strategy);
  const FlashState layout(geom, strategy);
  m["element_blocks"] = std::to_string(layout.blocks_per_element());
  m["elements_total"] = std::to_string(layout.element_count());
  m["zone_pages"] = std::to_string(geom.zone_pages());
  m["page_size"] = std::to_string(geom.page_size);
  m["capacity_bytes"] = std::to_string(geom.capacity_bytes());
  return m;
}

void fill_wear(MetricsRow& row, const WearStats& w) {
  row.wear_median = w.median;
  row.wear_stddev = w.stddev;
}

}  // namespace

void ExperimentPlan::validate() const {
  std::set<std::string> ids;
  for (const auto& r : runs) {
    if (!ids.insert(r.id).second) throw ZnsError(ErrorCode::InvalidValue, "duplicate run id " + r.id);
  }
}

std::string ExperimentPlan::to_json() const {
  Json j;
  j["name"] = name;
  j["runs"] = Json::array();
  for (const auto& r : runs) {
    Json run;
    run["id"] = r.id;
    run["seed"] = r.seed;
    Json cfg = Json::object();
    for (const auto& k : r.config.keys()) cfg[k] = *r.config.get(k);
    run["config"] = std::move(cfg);
    j["runs"].push_back(std::move(run));
  }
  return j.dump(2) + "\n";
}

std::vector<std::string_view> recipe_names() {
  return {"fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4c", "all"};
}

ExperimentPlan recipe_plan(std::string_view recipe, const ConfigDocument& base,
                           std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ZnsError(ErrorCode::InvalidArgument, "no seeds");
  ExperimentPlan plan;
  if (recipe == "all") {
    plan.name = "all";
    std::set<std::string> seen;
    for (std::string_view r : {"fig3a", "fig3b", "fig3d", "fig4a"}) {
      for (auto& run : single_recipe(r, base, seeds).runs) {
        if (seen.insert(run.id).second) plan.runs.push_back(std::move(run));
      }
    }
  } else {
    plan = single_recipe(recipe, base, seeds);
  }
  plan.validate();
  return plan;
}

ExperimentPlan config_plan(const ConfigDocument& base, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ZnsError(ErrorCode::InvalidArgument, "no seeds");
  const std::string kind = base.get_or("workload.kind", "occupancy");
  ConfigDocument doc = with_default_device(base, kind == "zenfs" || kind == "wear" ? "desk" : "zn540");
  if (auto s = base.get("workload.strategies")) doc.set("strategy.kind", *s);
  if (auto t = base.get("workload.thresholds")) doc.set("workload.finish_threshold", *t);
  ExperimentPlan plan;
  add_runs(plan,
           expand(doc, {"strategy.kind", "workload.finish_threshold", "workload.occupancy", "workload.jobs"}),
           seeds);
  plan.validate();
  return plan;
}

std::string MetricsRow::csv_header() {
  return "run_id,strategy,workload,finish_threshold,dlwa,sa_bytes,sa_norm,wear_median,wear_stddev,"
         "interference,makespan_us,seed,occupancy,jobs,outcome,host_bytes,dummy_bytes";
}

std::string MetricsRow::csv_line() const {
  auto opt = [](const auto& v) -> std::string {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
      return format_ratio(*v);
    } else {
      return std::to_string(*v);
    }
  };
  std::ostringstream os;
  os << run_id << ',' << strategy << ',' << workload << ',' << opt(finish_threshold) << ','
     << opt(dlwa) << ',' << opt(sa_bytes) << ',' << opt(sa_norm) << ',' << opt(wear_median) << ','
     << opt(wear_stddev) << ',' << opt(interference) << ',' << makespan_us << ',' << seed << ','
     << opt(occupancy) << ',' << opt(jobs) << ',' << outcome << ',' << host_bytes << ','
     << dummy_bytes;
  return os.str();
}

MetricsRow execute_run(const RunSpec& run, const fs::path& run_dir) {
  const ConfigDocument& c = run.config;
  const DeviceGeometry geom = geometry_from_config(c);
  const StrategyConfig strategy = validate_strategy(strategy_from_config(c), geom);
  const std::string kind = c.get_or("workload.kind", "occupancy");

  fs::create_directories(run_dir);
  std::ofstream out(run_dir / "events.jsonl", std::ios::binary | std::ios::trunc);
  if (!out) throw ZnsError(ErrorCode::InvalidArgument, "cannot write " + (run_dir / "events.jsonl").string());
  JsonlTraceWriter trace(out);
  // Per-command host I/O records are large for the long workloads; FINISH,
  // RESET, dummy, erase and invalidate records are always kept.
  const bool io_default = kind == "occupancy" || kind == "fio";
  trace.set_host_io(c.has("trace.host_io") ? parse_flag(*c.get("trace.host_io"), "trace.host_io") : io_default);
  trace.meta(meta_fields(run, geom, strategy));

  MetricsRow row;
  row.run_id = run.id;
  row.strategy = strategy_name(strategy);
  row.workload = kind;
  row.seed = run.seed;
  std::uint64_t host_pages = 0;
  std::uint64_t dummy_pages = 0;
  Micros end_time{0};

  if (kind == "occupancy") {
    const double occ = get_double(c, "workload.occupancy", 0.5);
    Device dev(geom, strategy, &trace);
    const auto zone = static_cast<ZoneId>(get_u64(c, "workload.zone", 0));
    const OccupancyResult r = run_occupancy(occ, dev, zone);
    row.occupancy = occ;
    row.dlwa = r.dlwa;
    host_pages = r.host_pages;
    dummy_pages = r.dummy_pages;
    fill_wear(row, wear_stats(dev.zones.flash().block_wear()));
    end_time = dev.sim.now();
  } else if (kind == "fio") {
    Device dev(geom, strategy, &trace);
    const auto jobs = static_cast<std::uint32_t>(get_u64(c, "workload.jobs", 1));
    const FioPattern pattern = parse_fio_pattern(c.get_or("workload.pattern", "seq_write"));
    std::vector<FioJobSpec> specs;
    for (std::uint32_t j = 0; j < jobs; ++j) {
      FioJobSpec s;
      s.pattern = pattern;
      s.request_pages = static_cast<std::uint32_t>(get_u64(c, "workload.request_pages", 1));
      s.zone = j;
      s.op_count = get_u64(c, "workload.op_count", 0);
      s.seed = run.seed + j;
      specs.push_back(s);
      if (pattern != FioPattern::SeqWrite) {
        dev.sim.issue({CmdKind::Append, j, 0, geom.zone_pages()}, dev.sim.now());
      }
    }
    const std::uint64_t h0 = dev.ledger.host_pages();
    const FioReport r = run_fio(specs, dev);
    row.jobs = jobs;
    host_pages = dev.ledger.host_pages() - h0;
    if (host_pages > 0) row.dlwa = dlwa(host_pages, dev.ledger.device_pages());
    end_time = dev.sim.now();
    if (host_pages == 0) host_pages = dev.ledger.host_pages();
  } else if (kind == "interference") {
    InterferenceSpec spec;
    spec.jobs = static_cast<std::uint32_t>(get_u64(c, "workload.jobs", 5));
    spec.fill_fraction = get_double(c, "workload.fill_fraction", 0.4);
    spec.writer_pages = get_u64(c, "workload.writer_pages", 0);
    spec.seed = run.seed;
    const InterferenceReport r = run_interference_bench(spec, geom, strategy, &trace);
    row.jobs = spec.jobs;
    row.interference = r.factor;
    dummy_pages = r.dummy_pages;
    host_pages = r.host_pages;
    end_time = r.end_time;
    row.dlwa = dlwa(host_pages, dummy_pages);
  } else if (kind == "zenfs" || kind == "wear") {
    KvMixSpec kv;
    kv.total_ops = get_u64(c, "workload.total_ops", kv.total_ops);
    kv.value_bytes_min = get_u64(c, "workload.value_bytes_min", kv.value_bytes_min);
    kv.value_bytes_max = get_u64(c, "workload.value_bytes_max", kv.value_bytes_max);
    kv.rng_seed = run.seed;
    ZenfsLiteConfig zf;
    zf.finish_threshold = static_cast<std::uint32_t>(get_u64(c, "workload.finish_threshold", 90));
    zf.lifetime_classes = default_lifetime_classes();
    if (auto fp = c.get("workload.file_pages")) {
      for (auto& cls : zf.lifetime_classes) cls.file_pages = parse_size(*fp, "workload.file_pages");
    }
    zf.streams_per_class = static_cast<std::uint32_t>(get_u64(c, "workload.streams_per_class", zf.streams_per_class));
    zf.rng_seed = run.seed;
    Device dev(geom, strategy, &trace);
    const ZenfsReport r = kind == "wear"
                              ? run_zenfs_repeated(kv, zf, static_cast<std::uint32_t>(get_u64(c, "workload.repeats", 8)), dev)
                              : run_zenfs_lite(kv, zf, dev);
    row.finish_threshold = zf.finish_threshold;
    row.outcome = std::string(to_string(r.outcome));
    row.sa_bytes = r.sa.avg_bytes;
    row.sa_norm = r.sa.avg_normalized;
    fill_wear(row, r.wear);
    host_pages = r.host_pages;
    dummy_pages = r.dummy_pages;
    if (host_pages > 0) row.dlwa = r.dlwa;
    end_time = dev.sim.now();
  } else {
    throw ZnsError(ErrorCode::InvalidValue, "unknown workload kind '" + kind + "'");
  }

  row.makespan_us = end_time.count();
  row.host_bytes = host_pages * geom.page_size;
  row.dummy_bytes = dummy_pages * geom.page_size;
  trace.end(end_time, row.outcome, host_pages);
  out.flush();
  return row;
}

std::vector<MetricsRow> run_plan(const ExperimentPlan& plan, const fs::path& out_dir, unsigned parallel) {
  plan.validate();
  fs::create_directories(out_dir / "runs");
  {
    std::ofstream p(out_dir / "plan.json", std::ios::binary | std::ios::trunc);
    p << plan.to_json();
  }
  std::vector<MetricsRow> rows(plan.runs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.runs.size(); i = next++) {
      try {
        rows[i] = execute_run(plan.runs[i], out_dir / "runs" / plan.runs[i].id);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = plan.runs.size();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(plan.runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::ofstream csv(out_dir / "metrics.csv", std::ios::binary | std::ios::trunc);
  csv << MetricsRow::csv_header() << '\n';
  for (const auto& r : rows) csv << r.csv_line() << '\n';

  Json summary;
  summary["plan"] = plan.name;
  summary["runs"] = Json::array();
  std::map<std::string, std::uint64_t> outcomes;
  for (const auto& r : rows) {
    Json j;
    j["id"] = r.run_id;
    j["strategy"] = r.strategy;
    j["workload"] = r.workload;
    j["seed"] = r.seed;
    j["outcome"] = r.outcome;
    if (r.dlwa) j["dlwa"] = fmt(*r.dlwa);
    if (r.sa_norm) j["sa_norm"] = fmt(*r.sa_norm);
    if (r.interference) j["interference"] = fmt(*r.interference);
    j["dummy_bytes"] = r.dummy_bytes;
    j["makespan_us"] = r.makespan_us;
    summary["runs"].push_back(std::move(j));
    ++outcomes[r.outcome];
  }
  summary["outcomes"] = outcomes;
  std::ofstream s(out_dir / "summary.json", std::ios::binary | std::ios::trunc);
  s << summary.dump(2) << '\n';
  return rows;
}

// ---------------------------------------------------------------------------
// reports

namespace {

struct TraceSummary {
  std::map<std::string, std::string> meta;
  std::string outcome = "completed";
  std::uint64_t host_pages = 0;
  std::uint64_t dummy_pages = 0;
  std::int64_t end_time = 0;
  std::vector<InvalidationSample> wi;
  std::map<std::uint64_t, std::uint32_t> element_erases;
  std::map<std::string, std::pair<std::uint64_t, std::int64_t>> phases;  // pages, span

  std::string get(const std::string& k) const {
    auto it = meta.find(k);
    return it == meta.end() ? std::string() : it->second;
  }
};

TraceSummary read_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  TraceSummary s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json r = Json::parse(line);
    const std::string kind = r.at("kind").get<std::string>();
    if (kind == "meta") {
      for (const auto& [k, v] : r.items()) {
        if (v.is_string()) s.meta[k] = v.get<std::string>();
      }
    } else if (kind == "dummy") {
      s.dummy_pages += r.at("pages").get<std::uint64_t>();
    } else if (kind == "erase") {
      ++s.element_erases[r.at("element").get<std::uint64_t>()];
    } else if (kind == "invalidate") {
      s.wi.push_back({r.at("clock").get<double>(), r.at("wi_bytes").get<std::uint64_t>()});
    } else if (kind == "phase") {
      s.phases[r.at("name").get<std::string>()] = {r.at("pages").get<std::uint64_t>(),
                                                   r.at("span_us").get<std::int64_t>()};
    } else if (kind == "end") {
      s.outcome = r.at("outcome").get<std::string>();
      s.host_pages = r.at("host_pages").get<std::uint64_t>();
      s.end_time = r.at("t").get<std::int64_t>();
    }
  }
  return s;
}

std::uint64_t meta_u64(const TraceSummary& s, const std::string& key) {
  const std::string v = s.get(key);
  return v.empty() ? 0 : std::stoull(v);
}

std::vector<std::uint32_t> block_wear_from(const TraceSummary& s) {
  const std::uint64_t n = meta_u64(s, "elements_total");
  const std::uint64_t blocks = meta_u64(s, "element_blocks");
  std::vector<std::uint32_t> wear;
  wear.reserve(n * blocks);
  for (std::uint64_t e = 0; e < n; ++e) {
    auto it = s.element_erases.find(e);
    const std::uint32_t w = it == s.element_erases.end() ? 0 : it->second;
    wear.insert(wear.end(), blocks, w);
  }
  return wear;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Numeric-aware ordering for table keys like "5" vs "10".
struct KeyLess {
  bool operator()(const std::string& a, const std::string& b) const {
    char* ea = nullptr;
    char* eb = nullptr;
    const double da = std::strtod(a.c_str(), &ea);
    const double db = std::strtod(b.c_str(), &eb);
    if (!a.empty() && !b.empty() && *ea == '\0' && *eb == '\0' && da != db) return da < db;
    return a < b;
  }
};

using Group = std::map<std::string, std::map<std::string, std::vector<const TraceSummary*>, KeyLess>>;

void write_file(const fs::path& path, const std::string& text, std::vector<fs::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  written.push_back(path);
}

}  // namespace

std::vector<fs::path> write_reports(const fs::path& out_dir) {
  const fs::path runs = out_dir / "runs";
  std::vector<fs::path> traces;
  if (fs::is_directory(runs)) {
    for (const auto& entry : fs::directory_iterator(runs)) {
      const fs::path p = entry.path() / "events.jsonl";
      if (fs::is_regular_file(p)) traces.push_back(p);
    }
  }
  if (traces.empty()) throw ZnsError(ErrorCode::MissingRuns, "no runs/*/events.jsonl under " + out_dir.string());
  std::sort(traces.begin(), traces.end());

  std::vector<TraceSummary> all;
  all.reserve(traces.size());
  for (const auto& p : traces) all.push_back(read_trace(p));

  Group occupancy, zenfs, wear, interference;
  for (const auto& s : all) {
    const std::string w = s.get("workload");
    const std::string strat = s.get("strategy");
    if (w == "occupancy") {
      occupancy[strat][s.get("cfg.workload.occupancy")].push_back(&s);
    } else if (w == "zenfs") {
      zenfs[strat][s.get("cfg.workload.finish_threshold")].push_back(&s);
    } else if (w == "wear") {
      wear[strat][s.get("seed")].push_back(&s);
    } else if (w == "interference") {
      interference[strat][s.get("cfg.workload.jobs")].push_back(&s);
    }
  }

  std::vector<fs::path> written;
  auto dlwa_of = [](const TraceSummary& s) {
    return s.host_pages == 0 ? 1.0 : dlwa(s.host_pages, s.dummy_pages);
  };

  if (!occupancy.empty()) {
    // Reduction is measured against the full-zone baseline (lazy, else direct).
    const auto* base = occupancy.count("lazy") ? &occupancy["lazy"]
                       : occupancy.count("direct") ? &occupancy["direct"] : nullptr;
    std::ostringstream os;
    os << "strategy,occupancy_pct,host_pages,dummy_pages,dlwa,reduction_pct\n";
    for (const auto& [strat, by_occ] : occupancy) {
      for (const auto& [occ, list] : by_occ) {
        const TraceSummary& s = *list.front();
        const double d = dlwa_of(s);
        std::string reduction;
        if (base && base->count(occ)) {
          const double b = dlwa_of(*base->at(occ).front());
          reduction = fmt((b - d) / b * 100.0);
        }
        os << strat << ',' << fmt(parse_double(occ, "occupancy") * 100.0) << ',' << s.host_pages << ','
           << s.dummy_pages << ',' << fmt(d) << ',' << reduction << '\n';
      }
    }
    write_file(out_dir / "fig3a_dlwa.csv", os.str(), written);
  }

  if (!zenfs.empty()) {
    std::ostringstream sa, dummy, latency;
    sa << "strategy,finish_threshold,runs,sa_bytes,sa_norm,out_of_space\n";
    dummy << "strategy,finish_threshold,runs,dummy_bytes,dlwa,out_of_space\n";
    latency << "strategy,finish_threshold,completed_runs,makespan_us\n";
    for (const auto& [strat, by_t] : zenfs) {
      for (const auto& [t, list] : by_t) {
        std::vector<double> sab, san, db, dl, mk;
        std::size_t oos = 0;
        for (const TraceSummary* s : list) {
          const std::uint64_t capacity = meta_u64(*s, "capacity_bytes");
          const SpaceAmplification a = space_amplification(s->wi, capacity);
          sab.push_back(a.avg_bytes);
          san.push_back(a.avg_normalized);
          db.push_back(static_cast<double>(s->dummy_pages * meta_u64(*s, "page_size")));
          dl.push_back(dlwa_of(*s));
          if (s->outcome == "completed") {
            mk.push_back(static_cast<double>(s->end_time));
          } else {
            ++oos;
          }
        }
        sa << strat << ',' << t << ',' << list.size() << ',' << fmt(mean(sab)) << ',' << fmt(mean(san))
           << ',' << oos << '\n';
        dummy << strat << ',' << t << ',' << list.size() << ',' << fmt(mean(db)) << ',' << fmt(mean(dl))
              << ',' << oos << '\n';
        // Runs that ran out of space have no workload latency.
        latency << strat << ',' << t << ',' << mk.size() << ',' << (mk.empty() ? "" : fmt(mean(mk))) << '\n';
      }
    }
    write_file(out_dir / "fig3b_sa.csv", sa.str(), written);
    write_file(out_dir / "fig3c_dummy.csv", dummy.str(), written);
    write_file(out_dir / "fig4c_latency.csv", latency.str(), written);
  }

  if (!wear.empty()) {
    std::ostringstream hist, stats;
    hist << "strategy,seed,erase_count,blocks\n";
    stats << "strategy,seed,median,stddev,mean,max\n";
    for (const auto& [strat, by_seed] : wear) {
      for (const auto& [seed, list] : by_seed) {
        const auto w = block_wear_from(*list.front());
        const WearStats ws = wear_stats(w);
        for (const auto& [count, blocks] : ws.histogram) {
          hist << strat << ',' << seed << ',' << count << ',' << blocks << '\n';
        }
        stats << strat << ',' << seed << ',' << fmt(ws.median) << ',' << fmt(ws.stddev) << ','
              << fmt(ws.mean) << ',' << ws.max << '\n';
      }
    }
    write_file(out_dir / "fig3d_wear_hist.csv", hist.str(), written);
    write_file(out_dir / "fig3d_wear_stats.csv", stats.str(), written);
  }

  if (!interference.empty()) {
    std::ostringstream os;
    os << "strategy,jobs,runs,base_pages_per_s,contended_pages_per_s,factor\n";
    for (const auto& [strat, by_jobs] : interference) {
      for (const auto& [jobs, list] : by_jobs) {
        std::vector<double> base, cont, factor;
        for (const TraceSummary* s : list) {
          const auto& b = s->phases.at("base");
          const auto& c = s->phases.at("contended");
          const double btp = static_cast<double>(b.first) * 1e6 / static_cast<double>(b.second);
          const double ctp = static_cast<double>(c.first) * 1e6 / static_cast<double>(c.second);
          base.push_back(btp);
          cont.push_back(ctp);
          factor.push_back(interference_factor(btp, ctp));
        }
        os << strat << ',' << jobs << ',' << list.size() << ',' << fmt(mean(base)) << ',' << fmt(mean(cont))
           << ',' << fmt(mean(factor)) << '\n';
      }
    }
    write_file(out_dir / "fig4a_interference.csv", os.str(), written);
  }
  return written;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split_list(text)) seeds.push_back(parse_size(item, "seeds"));
  if (seeds.empty()) throw ZnsError(ErrorCode::InvalidValue, "empty seed list");
  return seeds;
}

}  // namespace zonesim
