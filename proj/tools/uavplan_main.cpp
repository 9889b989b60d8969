#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavplan/bench.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitMissionFailed = 3;

std::vector<uavplan::Method> parse_method_list(const std::string& csv) {
  std::vector<uavplan::Method> methods;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string name =
        csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!name.empty()) {
      const auto m = uavplan::parse_method(name);
      if (!m) throw uavplan::ScenarioError("unknown method: " + name);
      methods.push_back(*m);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (methods.empty()) throw uavplan::ScenarioError("no methods given");
  return methods;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-UAV mission planning: Dubins-cost allocation, simulation and benchmarks"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random scenario file");
  uint64_t gen_seed = 7;
  int gen_k = 4, gen_n = 25;
  double gen_area = 2500.0;
  double gen_constrained = 0.0, gen_line = 0.0, gen_circle = 0.0, gen_area_frac = 0.0;
  std::string gen_out = "scenario.json";
  gen->add_option("--seed", gen_seed, "Scenario seed");
  gen->add_option("--k", gen_k, "UAV count");
  gen->add_option("--n", gen_n, "Task count");
  gen->add_option("--area", gen_area, "Mission area side (m)");
  gen->add_option("--mix-constrained", gen_constrained, "Fraction of constrained points");
  gen->add_option("--mix-line", gen_line, "Fraction of line tasks");
  gen->add_option("--mix-circle", gen_circle, "Fraction of circle tasks");
  gen->add_option("--mix-area", gen_area_frac, "Fraction of area tasks");
  gen->add_option("--out", gen_out, "Output file");

  // plan
  auto* plan = app.add_subcommand("plan", "Run one mission");
  std::string plan_scenario, plan_method = "PRBDDG", plan_out = "out";
  std::string plan_emergencies = "none";
  double plan_dt = 0.1;
  uint64_t plan_seed = 0;
  bool plan_seed_set = false;
  double plan_damage_time = -1.0;
  int plan_damage_victim = -1;
  int plan_new_tasks = 5;
  bool plan_loiter = false;
  plan->add_option("--scenario", plan_scenario, "Scenario JSON file")->required();
  plan->add_option("--method", plan_method, "Planning method");
  plan->add_option("--seed", plan_seed, "Override the scenario seed")
      ->each([&](const std::string&) { plan_seed_set = true; });
  plan->add_option("--dt", plan_dt, "Simulation step (s)");
  plan->add_option("--out", plan_out, "Output directory");
  plan->add_option("--emergencies", plan_emergencies, "none, new-tasks, damage or both");
  plan->add_option("--damage-time", plan_damage_time, "Damage time (s); default 50+10u");
  plan->add_option("--damage-victim", plan_damage_victim, "Damaged UAV id; default random");
  plan->add_option("--new-task-count", plan_new_tasks, "New-task cap for the window");
  plan->add_flag("--loiter", plan_loiter, "Idle UAVs loiter instead of freezing");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the method comparison matrix");
  std::string bench_methods = "SA,GBA,HBA,AA,RBDDG,PRBDDG";
  int bench_trials = 10;
  uint64_t bench_seed = 1;
  int bench_k = 4, bench_n = 25;
  double bench_area = 2500.0, bench_dt = 0.1;
  std::string bench_out = "bench_out";
  bench->add_option("--methods", bench_methods, "Comma-separated method list");
  bench->add_option("--trials", bench_trials, "Number of seeded trials");
  bench->add_option("--seed", bench_seed, "First seed; trials use seed..seed+trials-1");
  bench->add_option("--k", bench_k, "UAV count");
  bench->add_option("--n", bench_n, "Task count");
  bench->add_option("--area", bench_area, "Mission area side (m)");
  bench->add_option("--dt", bench_dt, "Simulation step (s)");
  bench->add_option("--out", bench_out, "Output directory");

  // time-costs
  auto* costs = app.add_subcommand("time-costs", "Time the distance cost functions");
  int costs_samples = 50000;
  uint64_t costs_seed = 1;
  std::string costs_out = "timing_out";
  costs->add_option("--samples", costs_samples, "Point pairs per group (>= 1000)");
  costs->add_option("--seed", costs_seed, "Sample seed");
  costs->add_option("--out", costs_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*gen) {
      uavplan::TypeMix mix;
      mix.point_constrained = gen_constrained;
      mix.line = gen_line;
      mix.circle = gen_circle;
      mix.area = gen_area_frac;
      mix.point_free = 1.0 - gen_constrained - gen_line - gen_circle - gen_area_frac;
      const auto scenario =
          uavplan::random_scenario(gen_seed, gen_k, gen_n, gen_area, mix);
      uavplan::save_scenario(scenario, gen_out);
      std::cout << "wrote " << gen_out << " (k=" << gen_k << ", n=" << gen_n << ")\n";
      return kExitOk;
    }
    if (*plan) {
      const auto method = uavplan::parse_method(plan_method);
      if (!method) throw uavplan::ScenarioError("unknown method: " + plan_method);
      const auto scenario = uavplan::load_scenario(plan_scenario);
      uavplan::RunOptions options;
      options.dt = plan_dt;
      options.emergencies = plan_emergencies;
      options.loiter = plan_loiter;
      options.new_task_cap = plan_new_tasks;
      if (plan_damage_time >= 0.0) options.damage_time = plan_damage_time;
      if (plan_damage_victim >= 0) options.damage_victim = plan_damage_victim;
      if (plan_seed_set) options.seed_override = plan_seed;
      const int rc = uavplan::run_single(scenario, *method, options, plan_out);
      if (rc == 0) {
        std::cout << "mission complete; results in " << plan_out << "\n";
        return kExitOk;
      }
      std::cerr << "mission failed; partial results in " << plan_out << "\n";
      return kExitMissionFailed;
    }
    if (*bench) {
      uavplan::BenchPlan bp;
      bp.methods = parse_method_list(bench_methods);
      bp.trials = bench_trials;
      bp.uav_count = bench_k;
      bp.task_count = bench_n;
      bp.area_side = bench_area;
      bp.dt = bench_dt;
      bp.out_dir = bench_out;
      for (int i = 0; i < bench_trials; ++i) bp.seeds.push_back(bench_seed + i);
      const auto report = uavplan::run_bench(bp);
      std::cout << uavplan::bench_summary_csv(report);
      std::cout << "summary written to " << bench_out << "/summary.csv\n";
      return kExitOk;
    }
    if (*costs) {
      const auto rows = uavplan::time_cost_functions(costs_samples, costs_seed);
      std::filesystem::create_directories(costs_out);
      std::ofstream f(std::filesystem::path(costs_out) / "timing.csv");
      f << uavplan::timing_csv(rows);
      std::cout << uavplan::timing_csv(rows);
      return kExitOk;
    }
  } catch (const uavplan::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
