#include "edpdcs/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "edpdcs/errors.hpp"
#include "edpdcs/parallel.hpp"

namespace edpdcs {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

}  // namespace

double nicv(const Dataset& data, const CentroidSet& cs, const Assignment& asg) {
  if (asg.labels.size() != data.n_rows()) {
    throw InvalidInput("nicv: assignment length does not match the dataset");
  }
  if (cs.n_dims() != data.n_dims()) {
    throw InvalidInput("nicv: centroid dimension does not match the dataset");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    const std::size_t label = asg.labels[i];
    if (label >= cs.k()) throw InvalidInput("nicv: label out of range");
    total += squared_distance(data.row(i), cs.centroid(label));
  }
  return total / static_cast<double>(data.n_rows());
}

NicvStats summarize(const std::vector<double>& values) {
  NicvStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

const SummaryCell* ComparisonSummary::find(Variant v, double epsilon) const {
  for (const auto& c : cells) {
    if (c.variant == v && c.epsilon == epsilon) return &c;
  }
  return nullptr;
}

ComparisonSummary compare_variants(const Dataset& data, std::size_t k,
                                   const PlannerInputs& planner,
                                   const CanopyParams& canopy,
                                   const EngineConfig& engine,
                                   const CompareOptions& options,
                                   std::optional<double> epsilon_m_override) {
  if (options.n_seeds == 0) throw InvalidInput("compare needs at least one seed");
  if (options.epsilons.empty()) throw InvalidInput("compare needs at least one epsilon");

  struct Job {
    Variant variant;
    double epsilon;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double eps : options.epsilons) {
    for (Variant v : options.variants) {
      for (std::size_t s = 0; s < options.n_seeds; ++s) {
        jobs.push_back({v, eps, options.base_seed + s});
      }
    }
  }
  if (options.include_floor) {
    jobs.push_back({Variant::kNonPrivate, options.epsilons.front(), options.base_seed});
  }

  std::vector<std::optional<RunReport>> reports(jobs.size());
  std::vector<std::string> errors(jobs.size());
  // Runs are the unit of concurrency; each run itself stays single-threaded.
  parallel_for(jobs.size(), options.sweep_threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    PlannerInputs in = planner;
    in.epsilon_total = job.epsilon;
    CanopyParams cp = canopy;
    cp.seed = job.seed;
    EngineConfig cfg = engine;
    cfg.variant = job.variant;
    cfg.master_seed = job.seed;
    cfg.threads = 1;
    try {
      RunReport r = run_variant(data, k, in, cp, cfg, epsilon_m_override).report;
      if (job.variant == Variant::kNonPrivate) r.epsilon = 0.0;
      reports[i] = std::move(r);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  ComparisonSummary summary;
  std::size_t idx = 0;
  auto collect = [&](Variant v, double eps, std::size_t n) {
    SummaryCell cell;
    cell.variant = v;
    cell.epsilon = eps;
    std::vector<double> values;
    for (std::size_t s = 0; s < n; ++s, ++idx) {
      if (reports[idx]) {
        values.push_back(reports[idx]->nicv);
        summary.runs.push_back(*reports[idx]);
      } else {
        ++cell.failures;
        summary.notes.push_back(std::string(variant_name(v)) + " eps=" + num(eps) +
                                " seed=" + std::to_string(jobs[idx].seed) +
                                " failed: " + errors[idx]);
      }
    }
    cell.stats = summarize(values);
    return cell;
  };
  for (double eps : options.epsilons) {
    for (Variant v : options.variants) {
      summary.cells.push_back(collect(v, eps, options.n_seeds));
    }
  }
  if (options.include_floor) {
    SummaryCell floor = collect(Variant::kNonPrivate, 0.0, 1);
    summary.floor = floor;
  }
  return summary;
}

std::string summary_csv(const ComparisonSummary& summary) {
  std::ostringstream os;
  os << "variant,epsilon,seed_count,mean_nicv,sd_nicv\n";
  auto row = [&](const SummaryCell& c, const std::string& eps) {
    os << variant_name(c.variant) << ',' << eps << ',' << c.stats.count << ','
       << num(c.stats.mean) << ',' << num(c.stats.sd) << '\n';
  };
  for (const auto& c : summary.cells) row(c, num(c.epsilon));
  if (summary.floor) row(*summary.floor, "inf");
  return os.str();
}

nlohmann::json to_json(const ComparisonSummary& summary, bool include_execution) {
  using nlohmann::json;
  auto cell_json = [](const SummaryCell& c) {
    return json{{"variant", variant_name(c.variant)},
                {"epsilon", c.epsilon},
                {"seed_count", c.stats.count},
                {"mean_nicv", c.stats.mean},
                {"sd_nicv", c.stats.sd},
                {"failures", c.failures}};
  };
  json cells = json::array();
  for (const auto& c : summary.cells) cells.push_back(cell_json(c));
  json runs = json::array();
  for (const auto& r : summary.runs) runs.push_back(to_json(r, include_execution));
  return {{"cells", cells},
          {"floor", summary.floor ? cell_json(*summary.floor) : json(nullptr)},
          {"runs", runs},
          {"notes", summary.notes}};
}

Dataset resize_dataset(const Dataset& data, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("dataset size must be positive");
  std::vector<std::size_t> rows;
  if (n <= data.n_rows()) {
    rows = draw_subsample(data.n_rows(), n, seed);
  } else {
    rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i % data.n_rows();
  }
  return data.select_rows(rows, data.source_label() + "/n=" + std::to_string(n));
}

std::vector<TimingCell> timing_sweep(const Dataset& data, std::size_t k,
                                     const PlannerInputs& planner,
                                     const CanopyParams& canopy,
                                     const EngineConfig& engine,
                                     const TimingOptions& options,
                                     std::optional<double> epsilon_m_override) {
  if (options.repetitions == 0) throw InvalidInput("timing needs at least one repetition");
  std::vector<std::size_t> sizes = options.sizes;
  if (sizes.empty()) sizes.push_back(data.n_rows());

  std::vector<TimingCell> cells;
  for (std::size_t n : sizes) {
    const Dataset sized = resize_dataset(data, n, engine.master_seed);
    for (std::size_t parts : options.partitions) {
      EngineConfig cfg = engine;
      cfg.n_partitions = parts;
      cfg.threads = parts;
      TimingCell cell;
      cell.n_rows = n;
      cell.n_partitions = parts;
      for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        run_variant(sized, k, planner, canopy, cfg, epsilon_m_override);
        cell.samples_ms.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count());
      }
      std::vector<double> sorted = cell.samples_ms;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t m = sorted.size();
      cell.median_ms = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string timing_csv(const std::vector<TimingCell>& cells) {
  std::ostringstream os;
  os << "n_rows,n_partitions,median_ms,repetitions\n";
  for (const auto& c : cells) {
    os << c.n_rows << ',' << c.n_partitions << ',' << num(c.median_ms) << ','
       << c.samples_ms.size() << '\n';
  }
  return os.str();
}

}  // namespace edpdcs
