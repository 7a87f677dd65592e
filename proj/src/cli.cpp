#include "edpdcs/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "edpdcs/engine.hpp"
#include "edpdcs/errors.hpp"
#include "edpdcs/evaluation.hpp"
#include "edpdcs/ingestion.hpp"
#include "edpdcs/planner.hpp"
#include "edpdcs/report.hpp"
#include "json.hpp"

namespace edpdcs {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct DataOptions {
  std::string source;
  std::string preset;
  bool header = false;
  std::vector<std::size_t> label_columns;   // 1-based
  std::vector<std::size_t> ignore_columns;  // 1-based
  std::uint64_t data_seed = 2024;
};

struct CommonRun {
  std::size_t k = 0;
  double rho = 0.225;
  double mse_threshold = 0.01;
  int t_cap = 7;
  std::optional<double> eps_m_override;
  std::uint64_t seed = 1;
  std::size_t partitions = 1;
  std::size_t threads = 0;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<std::size_t> subsample;
  double min_count = 1.0;
  bool no_clamp = false;
  std::size_t ru_max_iters = 10;
  double ru_shift_tol = 1e-4;
};

struct ResolvedData {
  NormalizedData norm;
  std::size_t dropped_rows = 0;
  std::size_t default_k = 0;
};

std::vector<ColumnSpec> generic_columns(const DataOptions& opt, std::string_view text) {
  std::size_t n_fields = 0;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '|') continue;
    n_fields = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    break;
  }
  if (n_fields == 0) throw DataError(opt.source + ": no data rows");
  std::vector<ColumnSpec> cols(n_fields);
  for (std::size_t c = 0; c < n_fields; ++c) cols[c].name = "col" + std::to_string(c + 1);
  auto mark = [&](const std::vector<std::size_t>& idx, ColumnRole role) {
    for (std::size_t c : idx) {
      if (c == 0 || c > n_fields) {
        throw InvalidInput("column index " + std::to_string(c) + " out of range 1.." +
                           std::to_string(n_fields));
      }
      cols[c - 1].role = role;
    }
  };
  mark(opt.label_columns, ColumnRole::kLabel);
  mark(opt.ignore_columns, ColumnRole::kIgnored);
  return cols;
}

ResolvedData resolve_data(const DataOptions& opt) {
  LoadedData loaded = [&]() -> LoadedData {
    if (opt.source == "synthetic:blood") return synthetic_blood_like(opt.data_seed);
    if (opt.source == "synthetic:adult") return synthetic_adult_like(opt.data_seed);
    if (opt.source.rfind("synthetic:", 0) == 0) {
      throw InvalidInput("unknown synthetic dataset '" + opt.source + "'");
    }
    if (!opt.preset.empty()) {
      const DatasetPreset p = preset_by_name(opt.preset);
      return load_csv(opt.source, p.columns, p.csv);
    }
    std::ifstream in(opt.source, std::ios::binary);
    if (!in) throw DataError("cannot open '" + opt.source + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    CsvOptions csv;
    csv.has_header = opt.header;
    return parse_csv(text, generic_columns(opt, text), csv, opt.source);
  }();
  ResolvedData out{normalize(loaded.raw, loaded.features), loaded.dropped_rows, 0};
  if (opt.source == "synthetic:blood" || opt.preset == "blood") out.default_k = 2;
  if (opt.source == "synthetic:adult" || opt.preset == "adult") out.default_k = 5;
  return out;
}

json data_json(const DataOptions& opt, const ResolvedData& d) {
  json cols = json::array();
  for (const auto& c : d.norm.features) {
    cols.push_back({{"name", c.name}, {"min", c.observed_min}, {"max", c.observed_max}});
  }
  return {{"source", opt.source},
          {"preset", opt.preset},
          {"header", opt.header},
          {"label_columns", opt.label_columns},
          {"ignore_columns", opt.ignore_columns},
          {"data_seed", opt.data_seed},
          {"n_rows", d.norm.data.n_rows()},
          {"n_dims", d.norm.data.n_dims()},
          {"dropped_rows", d.dropped_rows},
          {"features", cols}};
}

json run_json(const CommonRun& c) {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  return {{"k", c.k},
          {"rho", c.rho},
          {"mse_threshold", c.mse_threshold},
          {"t_cap", c.t_cap},
          {"eps_m_override", opt(c.eps_m_override)},
          {"seed", c.seed},
          {"partitions", c.partitions},
          {"t1", opt(c.t1)},
          {"t2", opt(c.t2)},
          {"subsample", opt(c.subsample)},
          {"min_count", c.min_count},
          {"clamp", !c.no_clamp},
          {"ru_max_iters", c.ru_max_iters},
          {"ru_shift_tol", c.ru_shift_tol}};
}

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--dataset", d.source,
                  "CSV path, or synthetic:blood / synthetic:adult")
      ->required();
  cmd->add_option("--preset", d.preset, "column layout: blood | adult")
      ->check(CLI::IsMember({"blood", "adult"}));
  cmd->add_flag("--header", d.header, "first non-empty line is a header (generic CSV)");
  cmd->add_option("--label-columns", d.label_columns, "1-based label columns (generic CSV)")
      ->delimiter(',');
  cmd->add_option("--ignore-columns", d.ignore_columns, "1-based ignored columns (generic CSV)")
      ->delimiter(',');
  cmd->add_option("--data-seed", d.data_seed, "seed for synthetic datasets");
}

void add_run_options(CLI::App* cmd, CommonRun& c, bool with_partitions = true) {
  cmd->add_option("--k", c.k, "cluster count (default from preset)");
  cmd->add_option("--rho", c.rho, "average coordinate mean")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--mse-threshold", c.mse_threshold)->check(CLI::PositiveNumber);
  cmd->add_option("--t-cap", c.t_cap)->check(CLI::Range(2, 1000));
  cmd->add_option("--eps-m-override", c.eps_m_override)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "master seed");
  if (with_partitions) {
    cmd->add_option("--partitions", c.partitions, "map partitions")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--threads", c.threads, "worker threads (0 = all)");
  cmd->add_option("--t1", c.t1, "canopy loose radius")->check(CLI::PositiveNumber);
  cmd->add_option("--t2", c.t2, "canopy tight radius")->check(CLI::PositiveNumber);
  cmd->add_option("--subsample", c.subsample, "canopy subsample size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-count", c.min_count, "floor for noisy counts")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-clamp", c.no_clamp, "do not clamp released centroids to [0,1]");
  cmd->add_option("--ru-max-iters", c.ru_max_iters)->check(CLI::PositiveNumber);
  cmd->add_option("--ru-shift-tol", c.ru_shift_tol)->check(CLI::PositiveNumber);
}

PlannerInputs planner_inputs(const CommonRun& c, const Dataset& data, double eps) {
  PlannerInputs in;
  in.n_rows = data.n_rows();
  in.n_dims = data.n_dims();
  in.k = c.k;
  in.rho = c.rho;
  in.epsilon_total = eps;
  in.mse_threshold = c.mse_threshold;
  in.t_cap = c.t_cap;
  return in;
}

CanopyParams canopy_params(const CommonRun& c) {
  CanopyParams p;
  p.t1 = c.t1;
  p.t2 = c.t2;
  p.subsample_size = c.subsample;
  p.seed = c.seed;
  return p;
}

EngineConfig engine_config(const CommonRun& c, Variant v) {
  EngineConfig cfg;
  cfg.variant = v;
  cfg.n_partitions = c.partitions;
  cfg.master_seed = c.seed;
  cfg.clamp_centroids = !c.no_clamp;
  cfg.min_count = c.min_count;
  cfg.ru_max_iters = c.ru_max_iters;
  cfg.ru_shift_tol = c.ru_shift_tol;
  cfg.threads = c.threads;
  return cfg;
}

void resolve_k(CommonRun& c, const ResolvedData& d) {
  if (c.k == 0) c.k = d.default_k;
  if (c.k == 0) throw InvalidInput("--k is required for datasets without a preset");
}

fs::path output_path(const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  const char* dir = std::getenv("EDPDCS_OUTPUT_DIR");
  return fs::path(dir != nullptr && *dir != '\0' ? dir : ".") / fallback;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("error writing '" + path.string() + "'");
}

std::string eps_tag(double eps) {
  std::ostringstream os;
  os << eps;
  return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private k-means with canopy initialization and "
               "map/reduce Lloyd iterations"};
  app.name("edpdcs");
  app.require_subcommand(1);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "print the privacy budget plan");
  std::size_t plan_n = 0, plan_d = 0;
  DataOptions plan_data;
  CommonRun plan_common;
  std::vector<double> plan_eps;
  std::string plan_json_out;
  plan_cmd->add_option("--n", plan_n, "row count N");
  plan_cmd->add_option("--d", plan_d, "dimension d");
  plan_cmd->add_option("--k", plan_common.k, "cluster count");
  plan_cmd->add_option("--rho", plan_common.rho)->check(CLI::Range(0.0, 1.0));
  plan_cmd->add_option("--eps", plan_eps, "total budget(s), comma-separated")
      ->delimiter(',')
      ->required();
  plan_cmd->add_option("--mse-threshold", plan_common.mse_threshold)
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--t-cap", plan_common.t_cap)->check(CLI::Range(2, 1000));
  plan_cmd->add_option("--eps-m-override", plan_common.eps_m_override)
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--dataset", plan_data.source, "derive N and d from a dataset");
  plan_cmd->add_option("--preset", plan_data.preset)->check(CLI::IsMember({"blood", "adult"}));
  plan_cmd->add_flag("--header", plan_data.header);
  plan_cmd->add_option("--data-seed", plan_data.data_seed);
  plan_cmd->add_option("--json-out", plan_json_out, "also write the JSON to this file");

  // run
  auto* run_cmd = app.add_subcommand("run", "cluster once and write a JSON report");
  DataOptions run_data;
  CommonRun run_common;
  std::string run_variant_name = "edpdcs";
  double run_eps = 1.0;
  std::string run_out;
  bool run_timings = false;
  bool run_diag = false;
  add_data_options(run_cmd, run_data);
  add_run_options(run_cmd, run_common);
  run_cmd->add_option("--variant", run_variant_name, "edpdcs | rf-dpkm | ru-dpkm | nonprivate");
  run_cmd->add_option("--eps", run_eps, "total budget")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_out, "report path");
  run_cmd->add_flag("--timings", run_timings, "include wall-clock timings in the report");
  run_cmd->add_flag("--diagnostics", run_diag, "include per-iteration aggregates");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "NICV sweep over variants and budgets");
  DataOptions cmp_data;
  CommonRun cmp_common;
  std::vector<double> cmp_eps{0.5, 1.0, 1.5, 2.0, 3.0};
  std::size_t cmp_seeds = 30;
  std::vector<std::string> cmp_variants{"edpdcs", "rf-dpkm", "ru-dpkm"};
  std::string cmp_csv, cmp_json;
  bool cmp_no_floor = false;
  add_data_options(cmp_cmd, cmp_data);
  add_run_options(cmp_cmd, cmp_common);
  cmp_cmd->add_option("--eps", cmp_eps, "budgets, comma-separated")->delimiter(',');
  cmp_cmd->add_option("--seeds", cmp_seeds, "seeded runs per cell")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--variants", cmp_variants)->delimiter(',');
  cmp_cmd->add_option("--out-csv", cmp_csv);
  cmp_cmd->add_option("--out-json", cmp_json);
  cmp_cmd->add_flag("--no-floor", cmp_no_floor, "skip the non-private reference run");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "wall-clock scaling over partitions");
  DataOptions bench_data;
  CommonRun bench_common;
  std::vector<std::size_t> bench_parts{1, 4};
  std::vector<std::size_t> bench_sizes;
  std::size_t bench_reps = 3;
  std::string bench_variant = "edpdcs";
  double bench_eps = 1.0;
  std::string bench_csv;
  add_data_options(bench_cmd, bench_data);
  add_run_options(bench_cmd, bench_common, false);
  bench_cmd->add_option("--partitions", bench_parts, "partition counts")->delimiter(',');
  bench_cmd->add_option("--sizes", bench_sizes, "dataset sizes (default: N)")->delimiter(',');
  bench_cmd->add_option("--reps", bench_reps)->check(CLI::Range(1, 1000));
  bench_cmd->add_option("--variant", bench_variant);
  bench_cmd->add_option("--eps", bench_eps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out-csv", bench_csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) {
      if (!plan_data.source.empty()) {
        const ResolvedData d = resolve_data(plan_data);
        plan_n = d.norm.data.n_rows();
        plan_d = d.norm.data.n_dims();
        if (plan_common.k == 0) plan_common.k = d.default_k;
      }
      if (plan_n == 0 || plan_d == 0 || plan_common.k == 0) {
        throw InvalidInput("plan needs --n, --d and --k (or --dataset)");
      }
      json plans = json::array();
      for (double eps : plan_eps) {
        PlannerInputs in;
        in.n_rows = plan_n;
        in.n_dims = plan_d;
        in.k = plan_common.k;
        in.rho = plan_common.rho;
        in.epsilon_total = eps;
        in.mse_threshold = plan_common.mse_threshold;
        in.t_cap = plan_common.t_cap;
        const BudgetPlan p = make_plan(in, plan_common.eps_m_override);
        out.precision(10);
        out << "eps=" << eps << "  eps_m(computed)=" << p.epsilon_m_computed;
        if (p.epsilon_m_override) out << "  eps_m(override)=" << *p.epsilon_m_override;
        out << "  T=" << p.iterations << "  eps_t=" << p.epsilon_per_iter
            << "  eps_i=" << p.epsilon_dim << "  eps_0=" << p.epsilon_count << '\n';
        for (const auto& note : p.notes) err << "note: " << note << '\n';
        plans.push_back(to_json(p));
      }
      json doc = {{"command", "plan"},
                  {"inputs",
                   {{"n", plan_n},
                    {"d", plan_d},
                    {"k", plan_common.k},
                    {"rho", plan_common.rho},
                    {"mse_threshold", plan_common.mse_threshold},
                    {"t_cap", plan_common.t_cap}}},
                  {"plans", plans}};
      out << doc.dump() << '\n';
      if (!plan_json_out.empty()) write_file(plan_json_out, doc.dump(2) + "\n");
      return kExitOk;
    }

    if (run_cmd->parsed()) {
      const Variant v = parse_variant(run_variant_name);
      const ResolvedData d = resolve_data(run_data);
      resolve_k(run_common, d);
      EngineConfig cfg = engine_config(run_common, v);
      cfg.diagnostics = run_diag;
      const RunResult r = run_variant(d.norm.data, run_common.k,
                                      planner_inputs(run_common, d.norm.data, run_eps),
                                      canopy_params(run_common), cfg,
                                      run_common.eps_m_override);
      json config = run_json(run_common);
      config["command"] = "run";
      config["variant"] = variant_name(v);
      config["epsilon"] = run_eps;
      config["dataset"] = data_json(run_data, d);
      json doc = {{"config", config}, {"report", to_json(r.report, run_timings)}};
      const fs::path path = output_path(
          run_out, "run-" + std::string(variant_name(v)) + "-eps" + eps_tag(run_eps) +
                       "-seed" + std::to_string(run_common.seed) + ".json");
      write_file(path, doc.dump(2) + "\n");
      out << variant_name(v) << " nicv=" << r.report.nicv
          << " iterations=" << r.report.iterations_run
          << " budget_spent=" << r.report.budget_spent << " -> " << path.string() << '\n';
      return kExitOk;
    }

    if (cmp_cmd->parsed()) {
      const ResolvedData d = resolve_data(cmp_data);
      resolve_k(cmp_common, d);
      CompareOptions opts;
      opts.epsilons = cmp_eps;
      opts.n_seeds = cmp_seeds;
      opts.base_seed = cmp_common.seed;
      opts.include_floor = !cmp_no_floor;
      opts.sweep_threads = cmp_common.threads;
      opts.variants.clear();
      for (const auto& name : cmp_variants) opts.variants.push_back(parse_variant(name));
      const ComparisonSummary s = compare_variants(
          d.norm.data, cmp_common.k, planner_inputs(cmp_common, d.norm.data, cmp_eps.front()),
          canopy_params(cmp_common), engine_config(cmp_common, Variant::kEdpdcs), opts,
          cmp_common.eps_m_override);
      json config = run_json(cmp_common);
      config["command"] = "compare";
      config["epsilons"] = cmp_eps;
      config["seeds"] = cmp_seeds;
      config["variants"] = cmp_variants;
      config["floor"] = !cmp_no_floor;
      config["dataset"] = data_json(cmp_data, d);
      json doc = to_json(s, false);
      doc["config"] = config;
      const fs::path csv_path = output_path(cmp_csv, "compare.csv");
      const fs::path json_path = output_path(cmp_json, "compare.json");
      write_file(csv_path, summary_csv(s));
      write_file(json_path, doc.dump(2) + "\n");
      out << summary_csv(s);
      for (const auto& note : s.notes) err << "note: " << note << '\n';
      return kExitOk;
    }

    if (bench_cmd->parsed()) {
      const Variant v = parse_variant(bench_variant);
      const ResolvedData d = resolve_data(bench_data);
      resolve_k(bench_common, d);
      TimingOptions opts;
      opts.partitions = bench_parts;
      opts.sizes = bench_sizes;
      opts.repetitions = bench_reps;
      const auto cells = timing_sweep(
          d.norm.data, bench_common.k, planner_inputs(bench_common, d.norm.data, bench_eps),
          canopy_params(bench_common), engine_config(bench_common, v), opts,
          bench_common.eps_m_override);
      const fs::path csv_path = output_path(bench_csv, "bench.csv");
      write_file(csv_path, timing_csv(cells));
      json config = run_json(bench_common);
      config["command"] = "bench";
      config["variant"] = variant_name(v);
      config["epsilon"] = bench_eps;
      config["partitions"] = bench_parts;
      config["sizes"] = bench_sizes;
      config["reps"] = bench_reps;
      config["dataset"] = data_json(bench_data, d);
      json cells_json = json::array();
      for (const auto& c : cells) {
        cells_json.push_back({{"n_rows", c.n_rows},
                              {"n_partitions", c.n_partitions},
                              {"median_ms", c.median_ms},
                              {"samples_ms", c.samples_ms}});
      }
      json doc = {{"config", config},
                  {"timing_note", "wall-clock values vary between runs"},
                  {"hardware_threads", std::thread::hardware_concurrency()},
                  {"cells", cells_json}};
      write_file(csv_path.string() + ".json", doc.dump(2) + "\n");
      out << timing_csv(cells);
      return kExitOk;
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const BudgetExhausted& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace edpdcs
