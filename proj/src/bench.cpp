#include "uavplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario_io.hpp"

namespace uavplan {

namespace {

namespace fs = std::filesystem;

// Keeps timed evaluations observable so the loops cannot be elided.
volatile double g_timing_sink = 0.0;

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

EventTimeline timeline_for(const RunOptions& options, double dt) {
  const bool new_tasks =
      options.emergencies == "new-tasks" || options.emergencies == "both";
  const bool damage = options.emergencies == "damage" || options.emergencies == "both";
  if (!new_tasks && !damage && options.emergencies != "none")
    throw std::invalid_argument("unknown emergencies mode: " + options.emergencies);
  EventTimeline t = new_tasks
                        ? EventTimeline::stochastic_new_tasks(options.new_task_cap, dt)
                        : EventTimeline::none();
  if (damage) {
    t.damage_enabled = true;
    t.damage_time = options.damage_time;
    t.damage_victim = options.damage_victim;
  }
  return t;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::SA: return "SA";
    case Method::GBA: return "GBA";
    case Method::HBA: return "HBA";
    case Method::AA: return "AA";
    case Method::RBDDG: return "RBDDG";
    case Method::RBDDH: return "RBDDH";
    case Method::PRBDDG: return "PRBDDG";
    case Method::PRBDDH: return "PRBDDH";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  static const std::pair<const char*, Method> table[] = {
      {"SA", Method::SA},       {"GBA", Method::GBA},     {"HBA", Method::HBA},
      {"AA", Method::AA},       {"RBDDG", Method::RBDDG}, {"RBDDH", Method::RBDDH},
      {"PRBDDG", Method::PRBDDG}, {"PRBDDH", Method::PRBDDH},
  };
  for (const auto& [n, m] : table)
    if (name == n) return m;
  return std::nullopt;
}

StrategyConfig strategy_for(Method m) {
  StrategyConfig cfg;
  switch (m) {
    case Method::GBA:
      cfg.strategy = Strategy::Greedy;
      cfg.metric = Metric::Euclidean;
      break;
    case Method::HBA:
      cfg.strategy = Strategy::Hungarian;
      cfg.metric = Metric::Euclidean;
      break;
    case Method::AA:
      cfg.strategy = Strategy::Auction;
      cfg.metric = Metric::Euclidean;
      break;
    case Method::RBDDG:
      cfg.strategy = Strategy::Greedy;
      cfg.metric = Metric::DubinsCsCsc;
      break;
    case Method::RBDDH:
      cfg.strategy = Strategy::Hungarian;
      cfg.metric = Metric::DubinsCsCsc;
      break;
    case Method::PRBDDG:
      cfg.strategy = Strategy::Greedy;
      cfg.metric = Metric::DubinsCsCsc;
      cfg.cluster_restricted = true;
      break;
    case Method::PRBDDH:
      cfg.strategy = Strategy::Hungarian;
      cfg.metric = Metric::DubinsCsCsc;
      cfg.cluster_restricted = true;
      break;
    case Method::SA:
      throw std::invalid_argument("strategy_for: SA is the offline baseline");
  }
  return cfg;
}

bool uses_clustering(Method m) { return m == Method::PRBDDG || m == Method::PRBDDH; }

BenchReport run_bench(const BenchPlan& plan) {
  if (plan.methods.empty()) throw std::invalid_argument("run_bench: no methods");
  if (plan.trials != static_cast<int>(plan.seeds.size()))
    throw std::invalid_argument("run_bench: trials must equal the seed count");

  if (!plan.out_dir.empty()) fs::create_directories(plan.out_dir);
  const bool has_sa =
      std::find(plan.methods.begin(), plan.methods.end(), Method::SA) != plan.methods.end();

  BenchReport report;
  struct Acc {
    int runs = 0, failures = 0;
    double dist = 0, gap = 0, dist_diff = 0, count_diff = 0;
    double plan_total = 0, plan_single = 0, first_share = 0;
    int gap_runs = 0;
  };
  std::vector<Acc> acc(plan.methods.size());

  for (uint64_t seed : plan.seeds) {
    const Scenario scenario =
        random_scenario(seed, plan.uav_count, plan.task_count, plan.area_side, plan.mix);

    // SA runs first so its smoothed total prices the gap for the others.
    std::optional<double> baseline;
    std::optional<SaResult> sa;
    std::optional<TourSet> sa_smoothed;
    if (has_sa) {
      SaParams params;
      params.seed = seed;
      sa = sa_solve(scenario, params);
      sa_smoothed = smooth_with_dubins(sa->best, scenario);
      baseline = sa_smoothed->total_dubins;
    }

    for (size_t mi = 0; mi < plan.methods.size(); ++mi) {
      const Method method = plan.methods[mi];
      RunSummary summary;
      summary.method = method;
      summary.seed = seed;

      if (method == Method::SA) {
        summary.total_distance = *sa_smoothed->total_dubins;
        summary.gap = 0.0;
        double lo = 0, hi = 0;
        int lo_c = 0, hi_c = 0;
        for (size_t k = 0; k < sa_smoothed->tours.size(); ++k) {
          const double len = sa_smoothed->per_tour_dubins[k];
          const int cnt = static_cast<int>(sa_smoothed->tours[k].size());
          if (k == 0) {
            lo = hi = len;
            lo_c = hi_c = cnt;
          } else {
            lo = std::min(lo, len);
            hi = std::max(hi, len);
            lo_c = std::min(lo_c, cnt);
            hi_c = std::max(hi_c, cnt);
          }
        }
        summary.max_distance_difference = hi - lo;
        summary.max_task_count_difference = hi_c - lo_c;
        summary.total_planning_time = sa->wall_seconds;
        auto& a = acc[mi];
        ++a.runs;
        a.dist += summary.total_distance;
        a.gap += 0.0;
        ++a.gap_runs;
        a.dist_diff += summary.max_distance_difference;
        a.count_diff += summary.max_task_count_difference;
        a.plan_total += sa->wall_seconds;
        a.plan_single += sa->wall_seconds / scenario.task_count;
        a.first_share += 100.0;
        report.runs.push_back(summary);
        continue;
      }

      SimConfig cfg;
      cfg.dt = plan.dt;
      cfg.strategy = strategy_for(method);
      cfg.preprocess_clustering = uses_clustering(method);
      const SimResult result = run(scenario, cfg, EventTimeline::none());
      const MetricsReport metrics = collect_metrics(result, baseline);

      summary.total_distance = metrics.total_distance;
      summary.max_distance_difference = metrics.max_distance_difference;
      summary.max_task_count_difference = metrics.max_task_count_difference;
      summary.total_planning_time = metrics.total_planning_time;
      summary.gap = metrics.gap;
      summary.failed = metrics.mission_failed;
      report.runs.push_back(summary);

      auto& a = acc[mi];
      if (summary.failed) {
        ++a.failures;
      } else {
        ++a.runs;
        a.dist += metrics.total_distance;
        if (metrics.gap) {
          a.gap += *metrics.gap;
          ++a.gap_runs;
        }
        a.dist_diff += metrics.max_distance_difference;
        a.count_diff += metrics.max_task_count_difference;
        a.plan_total += metrics.total_planning_time;
        a.plan_single += metrics.total_planning_time / std::max(1, metrics.task_count);
        a.first_share += 100.0 * metrics.first_decision_share;
      }

      if (plan.write_runs && !plan.out_dir.empty()) {
        fs::create_directories(fs::path(plan.out_dir) / "runs");
        const std::string name = std::string(to_string(method)) + "_seed" +
                                 std::to_string(seed) + ".metrics.json";
        write_metrics_json(metrics, (fs::path(plan.out_dir) / "runs" / name).string());
      }
    }
  }

  for (size_t mi = 0; mi < plan.methods.size(); ++mi) {
    const auto& a = acc[mi];
    MethodRow row;
    row.method = plan.methods[mi];
    row.runs = a.runs;
    row.failures = a.failures;
    if (a.runs > 0) {
      row.avg_total_distance = a.dist / a.runs;
      row.avg_max_distance_difference = a.dist_diff / a.runs;
      row.avg_max_task_count_difference = a.count_diff / a.runs;
      row.avg_total_planning_time = a.plan_total / a.runs;
      row.avg_single_planning_time = a.plan_single / a.runs;
      row.avg_first_decision_share = a.first_share / a.runs;
      if (a.gap_runs > 0) row.avg_gap = a.gap / a.gap_runs;
    }
    report.rows.push_back(row);
  }

  if (!plan.out_dir.empty()) {
    std::ofstream f(fs::path(plan.out_dir) / "summary.csv");
    if (!f) throw std::runtime_error("cannot write bench summary");
    f << bench_summary_csv(report);
  }
  return report;
}

std::string bench_summary_csv(const BenchReport& report) {
  std::string out =
      "method,avg_total_distance_m,gap_vs_sa_pct,max_distance_difference_m,"
      "max_task_number_difference,avg_total_planning_time_s,avg_planning_time_s,"
      "first_decision_time_share_pct,runs,failures\n";
  for (const auto& row : report.rows) {
    out += to_string(row.method);
    out += ',';
    out += csv_double(row.avg_total_distance);
    out += ',';
    if (row.avg_gap) out += csv_double(100.0 * *row.avg_gap);
    out += ',';
    out += csv_double(row.avg_max_distance_difference);
    out += ',';
    out += csv_double(row.avg_max_task_count_difference);
    out += ',';
    out += csv_double(row.avg_total_planning_time);
    out += ',';
    out += csv_double(row.avg_single_planning_time);
    out += ',';
    out += csv_double(row.avg_first_decision_share);
    out += ',';
    out += std::to_string(row.runs);
    out += ',';
    out += std::to_string(row.failures);
    out += '\n';
  }
  return out;
}

int run_single(const Scenario& scenario_in, Method method, const RunOptions& options,
               const std::string& out_dir) {
  Scenario scenario = scenario_in;
  if (options.seed_override) scenario.seed = *options.seed_override;
  validate_scenario(scenario);
  fs::create_directories(out_dir);

  if (method == Method::SA) {
    SaParams params;
    params.seed = scenario.seed;
    const SaResult sa = sa_solve(scenario, params);
    const TourSet smoothed = smooth_with_dubins(sa.best, scenario);
    write_sa_trace_csv(sa.trace, (fs::path(out_dir) / "sa_trace.csv").string());
    MetricsReport m;
    m.total_distance = *smoothed.total_dubins;
    m.per_uav_distance = smoothed.per_tour_dubins;
    double lo = 0, hi = 0;
    for (size_t k = 0; k < smoothed.per_tour_dubins.size(); ++k) {
      const double v = smoothed.per_tour_dubins[k];
      if (k == 0)
        lo = hi = v;
      else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    m.max_distance_difference = hi - lo;
    int lo_c = 0, hi_c = 0;
    for (size_t k = 0; k < smoothed.tours.size(); ++k) {
      const int c = static_cast<int>(smoothed.tours[k].size());
      if (k == 0)
        lo_c = hi_c = c;
      else {
        lo_c = std::min(lo_c, c);
        hi_c = std::max(hi_c, c);
      }
    }
    m.max_task_count_difference = hi_c - lo_c;
    m.task_count = scenario.task_count;
    m.completed_count = scenario.task_count;
    m.planning_event_count = 1;
    m.total_planning_time = sa.wall_seconds;
    m.average_planning_time = sa.wall_seconds;
    m.first_decision_share = 1.0;
    write_metrics_json(m, (fs::path(out_dir) / "metrics.json").string());
    return 0;
  }

  SimConfig cfg;
  cfg.dt = options.dt;
  cfg.strategy = strategy_for(method);
  cfg.preprocess_clustering = uses_clustering(method);
  cfg.loiter = options.loiter;
  const SimResult result = run(scenario, cfg, timeline_for(options, options.dt));
  const MetricsReport metrics = collect_metrics(result, std::nullopt);
  write_trace_csv(result, (fs::path(out_dir) / "trace.csv").string());
  write_events_csv(result, (fs::path(out_dir) / "events.csv").string());
  write_metrics_json(metrics, (fs::path(out_dir) / "metrics.json").string());
  return result.mission_failed ? 3 : 0;
}

std::vector<TimingRow> time_cost_functions(int samples, uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("time_cost_functions: need >= 1000 samples");
  constexpr int kReps = 50;
  constexpr double kArea = 2500.0;
  constexpr double kRadius = 80.0;

  Rng rng(seed);
  std::vector<Pose> starts(samples);
  std::vector<Pose> goals(samples);
  for (int i = 0; i < samples; ++i) {
    starts[i] = {kArea * rng.uniform(), kArea * rng.uniform(), 0.0};
    goals[i] = {kArea * rng.uniform(), kArea * rng.uniform(), 0.0};
  }
  // The groups share positions; headings are drawn where the group needs them.
  for (int i = 0; i < samples; ++i) starts[i].theta = kTwoPi * rng.uniform();
  for (int i = 0; i < samples; ++i) goals[i].theta = kTwoPi * rng.uniform();

  const auto run_group = [&](auto&& eval) {
    double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < kReps; ++rep)
      for (int i = 0; i < samples; ++i) sink += eval(i);
    const auto t1 = std::chrono::steady_clock::now();
    g_timing_sink = g_timing_sink + sink;
    return std::chrono::duration<double>(t1 - t0).count() /
           (static_cast<double>(kReps) * samples);
  };

  std::vector<TimingRow> rows;
  rows.push_back({"Euclidean",
                  run_group([&](int i) {
                    return distance(starts[i].position(), goals[i].position());
                  }),
                  static_cast<long>(kReps) * samples});
  rows.push_back({"CS",
                  run_group([&](int i) {
                    return cs_shortest(starts[i], goals[i].position(), kRadius).total_length;
                  }),
                  static_cast<long>(kReps) * samples});
  rows.push_back({"CSC",
                  run_group([&](int i) {
                    return csc_shortest(starts[i], goals[i], kRadius).total_length;
                  }),
                  static_cast<long>(kReps) * samples});
  return rows;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::string out = "cost_function,mean_seconds,calls\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%.9f,%ld\n", r.cost_function.c_str(), r.mean_seconds,
                  r.calls);
    out += buf;
  }
  return out;
}

}  // namespace uavplan
