#include "edpdcs/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

#include "edpdcs/errors.hpp"
#include "edpdcs/evaluation.hpp"
#include "edpdcs/ledger.hpp"
#include "edpdcs/parallel.hpp"

namespace edpdcs {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kRandomInitStream = 0x1a17c0de00000000ULL;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double max_shift(const CentroidSet& a, const CentroidSet& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.k(); ++j) {
    worst = std::max(worst, std::sqrt(squared_distance(a.centroid(j), b.centroid(j))));
  }
  return worst;
}

void require_engine_input(const Dataset& data, std::size_t k,
                          const EngineConfig& cfg) {
  if (!data.normalized()) {
    throw InvalidInput("the clustering engine requires data normalized to [0,1]^d");
  }
  if (k == 0 || k > data.n_rows()) throw InvalidInput("k must be in [1, N]");
  if (cfg.n_partitions == 0 || cfg.n_partitions > data.n_rows()) {
    throw InvalidInput("n_partitions must be in [1, N]");
  }
  if (!(cfg.min_count > 0.0)) throw InvalidInput("min_count must be positive");
}

RunReport base_report(const Dataset& data, std::size_t k, const EngineConfig& cfg,
                      double epsilon) {
  RunReport r;
  r.variant = cfg.variant;
  r.epsilon = epsilon;
  r.seed = cfg.master_seed;
  r.k = k;
  r.n_rows = data.n_rows();
  r.n_dims = data.n_dims();
  r.n_partitions = cfg.n_partitions;
  return r;
}

// Runs one iteration, records its trace and returns the new centroids.
CentroidSet traced_step(const Dataset& data, std::span<const RowRange> parts,
                        const CentroidSet& current, std::uint64_t iteration,
                        const ReduceParams& params, double charge,
                        const EngineConfig& cfg, RunReport& report) {
  StepOutput step = lloyd_step(data, parts, current, iteration, params,
                               cfg.master_seed, cfg.threads);
  IterationTrace trace;
  trace.iteration = iteration;
  trace.phase = "lloyd";
  trace.budget_charged = charge;
  trace.noise_draws = step.noise_draws;
  trace.centroid_shift = max_shift(current, step.centroids);
  trace.nicv_after = nicv(data, step.centroids, assign_all(data, step.centroids));
  trace.centroids_before = current;
  trace.centroids_after = step.centroids;
  if (cfg.diagnostics) {
    trace.exact_aggregates = std::move(step.exact);
    trace.noisy_aggregates = std::move(step.released);
  }
  report.noise_draws += step.noise_draws;
  report.iterations.push_back(std::move(trace));
  ++report.iterations_run;
  return std::move(step.centroids);
}

RunResult finish(const Dataset& data, CentroidSet final_cs, RunReport report,
                 const BudgetLedger* ledger, Clock::time_point started) {
  Assignment asg = assign_all(data, final_cs);
  report.nicv = nicv(data, final_cs, asg);
  report.final_centroids = final_cs;
  if (ledger != nullptr) {
    report.ledger = ledger->entries();
    report.budget_spent = ledger->spent();
    report.budget_residual = ledger->remaining();
  }
  report.wall_clock_ms.total_ms = elapsed_ms(started);
  return RunResult{std::move(final_cs), std::move(asg), std::move(report), std::nullopt};
}

}  // namespace

void FixedSum::add(double v) {
  // Exact for every double in [2^-11, 1]; below that the error is < 2^-65.
  acc_ += static_cast<Int128>(std::nearbyint(std::ldexp(v, 64)));
}

double FixedSum::value() const {
  return std::ldexp(static_cast<double>(acc_), -64);
}

void PartialAggregate::merge(const PartialAggregate& other) {
  if (other.cluster_index != cluster_index) {
    throw InvalidInput("merging partials of different clusters");
  }
  if (sums.empty()) sums.resize(other.sums.size());
  if (sums.size() != other.sums.size()) {
    throw InvalidInput("merging partials of different dimension");
  }
  count += other.count;
  for (std::size_t i = 0; i < sums.size(); ++i) sums[i].add(other.sums[i]);
}

ClusterAggregate PartialAggregate::to_aggregate() const {
  ClusterAggregate agg;
  agg.cluster_index = cluster_index;
  agg.count = static_cast<double>(count);
  agg.sums.reserve(sums.size());
  for (const auto& s : sums) agg.sums.push_back(s.value());
  return agg;
}

std::vector<PartialAggregate> map_assign(const Dataset& data, RowRange rows,
                                         const CentroidSet& cs) {
  if (cs.n_dims() != data.n_dims()) {
    throw InvalidInput("map_assign: centroid dimension does not match data");
  }
  if (rows.end > data.n_rows() || rows.begin > rows.end) {
    throw InvalidInput("map_assign: row range out of bounds");
  }
  const std::size_t d = data.n_dims();
  std::vector<PartialAggregate> slots(cs.k());
  for (std::size_t i = rows.begin; i < rows.end; ++i) {
    auto x = data.row(i);
    PartialAggregate& slot = slots[nearest_centroid(x, cs)];
    if (slot.sums.empty()) slot.sums.resize(d);
    ++slot.count;
    for (std::size_t j = 0; j < d; ++j) slot.sums[j].add(x[j]);
  }
  std::vector<PartialAggregate> out;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (slots[j].count == 0) continue;
    slots[j].cluster_index = j;
    out.push_back(std::move(slots[j]));
  }
  return out;
}

ReduceOutput reduce_cluster(std::span<const PartialAggregate> partials,
                            std::size_t cluster_index, std::size_t n_dims,
                            const ReduceParams& params, LaplaceSampler* sampler,
                            std::span<const double> previous,
                            bool data_normalized) {
  PartialAggregate merged;
  merged.cluster_index = cluster_index;
  merged.sums.resize(n_dims);
  for (const auto& p : partials) merged.merge(p);

  ReduceOutput out;
  out.exact = merged.to_aggregate();

  if (!params.dp_enabled) {
    out.released = out.exact;
    if (merged.count == 0) {
      if (previous.size() != n_dims) {
        throw InvalidInput("reduce_cluster: empty cluster needs a previous centroid");
      }
      out.centroid.assign(previous.begin(), previous.end());
      out.retained_previous = true;
      return out;
    }
    out.centroid.resize(n_dims);
    for (std::size_t i = 0; i < n_dims; ++i) {
      out.centroid[i] = out.exact.sums[i] / out.exact.count;
    }
    return out;
  }

  if (sampler == nullptr) throw InvalidInput("reduce_cluster: dp needs a sampler");
  // An empty cluster is perturbed like any other; skipping it would reveal
  // that it is empty.
  out.released = perturb_aggregate(out.exact, params.eps_count, params.eps_dim,
                                   *sampler, data_normalized);
  const double denom = std::max(out.released.count, params.min_count);
  out.centroid.resize(n_dims);
  for (std::size_t i = 0; i < n_dims; ++i) {
    double v = out.released.sums[i] / denom;
    if (params.clamp) v = std::clamp(v, 0.0, 1.0);
    out.centroid[i] = v;
  }
  return out;
}

StepOutput lloyd_step(const Dataset& data, std::span<const RowRange> partitions,
                      const CentroidSet& current, std::uint64_t iteration,
                      const ReduceParams& params, std::uint64_t master_seed,
                      std::size_t threads) {
  const std::size_t k = current.k();
  const std::size_t d = data.n_dims();

  std::vector<std::vector<PartialAggregate>> mapped(partitions.size());
  parallel_for(partitions.size(), threads, [&](std::size_t p) {
    mapped[p] = map_assign(data, partitions[p], current);
  });

  // Shuffle: route partials to their reduce task, keeping partition order.
  std::vector<std::vector<PartialAggregate>> by_cluster(k);
  for (auto& part : mapped) {
    for (auto& agg : part) by_cluster[agg.cluster_index].push_back(std::move(agg));
  }

  std::vector<ReduceOutput> reduced(k);
  std::vector<std::uint64_t> draws(k, 0);
  parallel_for(k, threads, [&](std::size_t j) {
    std::optional<LaplaceSampler> sampler;
    if (params.dp_enabled) sampler.emplace(stream_seed(master_seed, iteration, j));
    reduced[j] = reduce_cluster(by_cluster[j], j, d, params,
                                sampler ? &*sampler : nullptr, current.centroid(j),
                                data.normalized());
    if (sampler) draws[j] = sampler->draw_count();
  });

  std::vector<double> values;
  values.reserve(k * d);
  StepOutput out{CentroidSet({0.0}, 1, false), {}, {}, 0};
  for (std::size_t j = 0; j < k; ++j) {
    values.insert(values.end(), reduced[j].centroid.begin(), reduced[j].centroid.end());
    out.exact.push_back(std::move(reduced[j].exact));
    out.released.push_back(std::move(reduced[j].released));
    out.noise_draws += draws[j];
  }
  out.centroids = CentroidSet(std::move(values), d, params.dp_enabled);
  return out;
}

CentroidSet random_initial_centroids(const Dataset& data, std::size_t k,
                                     std::uint64_t seed) {
  std::vector<std::size_t> rows =
      draw_subsample(data.n_rows(), k, stream_seed(seed, 0, kRandomInitStream));
  std::vector<double> values;
  values.reserve(k * data.n_dims());
  for (std::size_t r : rows) {
    auto x = data.row(r);
    values.insert(values.end(), x.begin(), x.end());
  }
  return CentroidSet(std::move(values), data.n_dims(), false);
}

RunResult run_edpdcs(const Dataset& data, std::size_t k, PlannerInputs in,
                     const CanopyParams& canopy, const EngineConfig& cfg,
                     std::optional<double> epsilon_m_override) {
  const auto started = Clock::now();
  require_engine_input(data, k, cfg);
  in.n_rows = data.n_rows();
  in.n_dims = data.n_dims();
  in.k = k;
  const BudgetPlan plan = make_plan(in, epsilon_m_override);
  BudgetLedger ledger(plan.epsilon_total);
  RunReport report = base_report(data, k, cfg, plan.epsilon_total);
  report.variant = Variant::kEdpdcs;
  report.plan = plan;
  report.notes = plan.notes;

  // Initialization counts as the first of the T iterations.
  const auto init_started = Clock::now();
  ledger.charge("init", plan.epsilon_per_iter);
  InitResult init = select_initial_centroids(data, k, canopy, plan, cfg.master_seed,
                                             1, cfg.min_count, cfg.clamp_centroids);
  report.wall_clock_ms.init_ms = elapsed_ms(init_started);
  report.notes.insert(report.notes.end(), init.notes.begin(), init.notes.end());
  report.initial_centroids = init.centroids;
  report.noise_draws += init.noise_draws;
  {
    IterationTrace trace;
    trace.iteration = 1;
    trace.phase = "init";
    trace.budget_charged = plan.epsilon_per_iter;
    trace.noise_draws = init.noise_draws;
    trace.nicv_after = nicv(data, init.centroids, assign_all(data, init.centroids));
    trace.centroids_after = init.centroids;
    report.iterations.push_back(std::move(trace));
    ++report.iterations_run;
  }

  const auto parts = partition_rows(data.n_rows(), cfg.n_partitions);
  const ReduceParams params{true, plan.epsilon_dim, plan.epsilon_count,
                            cfg.min_count, cfg.clamp_centroids};
  const auto iter_started = Clock::now();
  CentroidSet current = init.centroids;
  for (int t = 2; t <= plan.iterations; ++t) {
    ledger.charge("lloyd " + std::to_string(t), plan.epsilon_per_iter);
    current = traced_step(data, parts, current, static_cast<std::uint64_t>(t), params,
                          plan.epsilon_per_iter, cfg, report);
  }
  report.wall_clock_ms.iterations_ms = elapsed_ms(iter_started);

  if (!ledger.fully_spent()) {
    throw InvariantViolation("EDPDCS run finished without spending its budget");
  }
  RunResult result = finish(data, std::move(current), std::move(report), &ledger, started);
  result.init = std::move(init);
  return result;
}

RunResult run_lloyd(const Dataset& data, const CentroidSet& init,
                    const EngineConfig& cfg) {
  const auto started = Clock::now();
  require_engine_input(data, init.k(), cfg);
  if (init.n_dims() != data.n_dims()) {
    throw InvalidInput("initial centroids do not match the data dimension");
  }
  RunReport report = base_report(data, init.k(), cfg, 0.0);
  report.variant = Variant::kNonPrivate;
  report.initial_centroids = init;

  const auto parts = partition_rows(data.n_rows(), cfg.n_partitions);
  const ReduceParams params{false, 0.0, 0.0, cfg.min_count, cfg.clamp_centroids};
  const auto iter_started = Clock::now();
  CentroidSet current = init;
  bool converged = false;
  for (std::size_t t = 1; t <= cfg.nonprivate_max_iters; ++t) {
    current = traced_step(data, parts, current, t, params, 0.0, cfg, report);
    if (report.iterations.back().centroid_shift < cfg.nonprivate_shift_tol) {
      converged = true;
      break;
    }
  }
  report.wall_clock_ms.iterations_ms = elapsed_ms(iter_started);
  if (!converged) {
    report.notes.push_back("Lloyd stopped at the iteration cap before converging");
  }
  return finish(data, std::move(current), std::move(report), nullptr, started);
}

RunResult run_baseline(const Dataset& data, std::size_t k, PlannerInputs in,
                       const EngineConfig& cfg,
                       std::optional<double> epsilon_m_override) {
  const auto started = Clock::now();
  require_engine_input(data, k, cfg);
  const auto init_started = Clock::now();
  const CentroidSet init = random_initial_centroids(data, k, cfg.master_seed);
  const double init_ms = elapsed_ms(init_started);

  if (cfg.variant == Variant::kNonPrivate) {
    RunResult r = run_lloyd(data, init, cfg);
    r.report.wall_clock_ms.init_ms = init_ms;
    r.report.wall_clock_ms.total_ms = elapsed_ms(started);
    return r;
  }
  if (cfg.variant == Variant::kEdpdcs) {
    throw InvalidInput("run_baseline does not run EDPDCS; use run_edpdcs");
  }

  in.n_rows = data.n_rows();
  in.n_dims = data.n_dims();
  in.k = k;
  in.validate();
  BudgetLedger ledger(in.epsilon_total);
  RunReport report = base_report(data, k, cfg, in.epsilon_total);
  report.initial_centroids = init;
  report.wall_clock_ms.init_ms = init_ms;

  const auto parts = partition_rows(data.n_rows(), cfg.n_partitions);
  const double split_den = static_cast<double>(data.n_dims() + 1);
  const auto iter_started = Clock::now();
  CentroidSet current = init;

  if (cfg.variant == Variant::kRfDpkm) {
    const BudgetPlan plan = make_plan(in, epsilon_m_override);
    report.plan = plan;
    report.notes = plan.notes;
    const ReduceParams params{true, plan.epsilon_dim, plan.epsilon_count,
                              cfg.min_count, cfg.clamp_centroids};
    for (int t = 1; t <= plan.iterations; ++t) {
      ledger.charge("lloyd " + std::to_string(t), plan.epsilon_per_iter);
      current = traced_step(data, parts, current, static_cast<std::uint64_t>(t), params,
                            plan.epsilon_per_iter, cfg, report);
    }
    if (!ledger.fully_spent()) {
      throw InvariantViolation("RF_DPKM run finished without spending its budget");
    }
  } else {
    bool converged = false;
    for (std::size_t t = 1; t <= cfg.ru_max_iters; ++t) {
      const double eps_t = std::ldexp(in.epsilon_total, -static_cast<int>(t + 1));
      const double split = eps_t / split_den;
      const ReduceParams params{true, split, split, cfg.min_count, cfg.clamp_centroids};
      ledger.charge("lloyd " + std::to_string(t), eps_t);
      current = traced_step(data, parts, current, t, params, eps_t, cfg, report);
      if (report.iterations.back().centroid_shift < cfg.ru_shift_tol) {
        converged = true;
        break;
      }
    }
    std::ostringstream note;
    note.precision(17);
    note << (converged ? "centroid shift fell below tolerance" : "iteration cap reached")
         << " after " << report.iterations_run << " iteration(s); residual budget "
         << ledger.remaining() << " left unspent";
    report.notes.push_back(note.str());
  }
  report.wall_clock_ms.iterations_ms = elapsed_ms(iter_started);
  return finish(data, std::move(current), std::move(report), &ledger, started);
}

RunResult run_variant(const Dataset& data, std::size_t k, const PlannerInputs& in,
                      const CanopyParams& canopy, const EngineConfig& cfg,
                      std::optional<double> epsilon_m_override) {
  if (cfg.variant == Variant::kEdpdcs) {
    return run_edpdcs(data, k, in, canopy, cfg, epsilon_m_override);
  }
  return run_baseline(data, k, in, cfg, epsilon_m_override);
}

}  // namespace edpdcs
