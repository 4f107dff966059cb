// Command-line front end: validate bundles, solve scenarios into run
// directories, and run every analysis from stored runs without re-solving.
//
// Exit codes: 0 success, 2 validation/input failure, 3 infeasible or
// unbounded, 4 I/O failure, 5 internal error. Every failure prints a single
// "<kind>: <message>" line to stderr (validate additionally prints the full
// report to stdout).

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "storval/analysis.hpp"
#include "storval/errors.hpp"
#include "storval/formulation.hpp"
#include "storval/ingest.hpp"
#include "storval/run_io.hpp"
#include "storval/solver.hpp"

namespace fs = std::filesystem;
using namespace storval;

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << (v + 0.0);  // never print negative zero
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void emit(const std::optional<std::string>& out_file,
          const std::string& content) {
  if (out_file) {
    write_file_atomic(*out_file, content);
  } else {
    std::cout << content;
  }
}

int exit_code_for(const std::string& kind) {
  if (kind == "MissingFile" || kind == "IoFailure") return 4;
  if (kind == "Infeasible" || kind == "Unbounded" ||
      kind == "IterationLimit" || kind == "NotOptimal") {
    return 3;
  }
  if (kind == "Internal") return 5;
  return 2;
}

std::map<std::string, std::string> bundle_digests(const fs::path& dir) {
  std::map<std::string, std::string> digests;
  for (const char* f : {"snapshots.csv", "buses.csv", "carriers.csv",
                        "generators.csv", "lines.csv", "storage.csv",
                        "loads.csv"}) {
    digests[f] = file_digest(dir / f);
  }
  for (const char* f : {"availability.csv", "inflow.csv"}) {
    if (fs::exists(dir / f)) digests[f] = file_digest(dir / f);
  }
  return digests;
}

StorageComponentSpec::Kind parse_component_kind(const std::string& text) {
  if (text == "charger") return StorageComponentSpec::Kind::charger;
  if (text == "store") return StorageComponentSpec::Kind::store;
  return StorageComponentSpec::Kind::discharger;
}

// Discharged energy of one tech over the horizon, MWh.
double discharged_energy(const LoadedRun& run, const std::string& tech_id) {
  double e = 0.0;
  for (std::size_t t = 0; t < run.network.snapshots.size(); ++t) {
    int v = run.lp.find_var(VarKind::discharge, tech_id, static_cast<int>(t));
    if (v >= 0) e += run.network.snapshots.weights[t] * run.solution.primal[v];
  }
  return e;
}

// Full-load hours behind an MPI row: the tech's discharged energy over its
// discharger capacity; for a shared store, the hub aggregate of both.
double row_full_load_hours(const LoadedRun& run, const MpiRow& row,
                           StorageMode mode) {
  double discharged = 0.0;
  double capacity = 0.0;
  if (row.kind == StorageComponentSpec::Kind::store) {
    for (const StoreOwner& o : store_owners(run.network, mode)) {
      if (o.entity != row.component) continue;
      for (int m : o.members) {
        const std::string& id = run.network.storage_techs[m].id;
        discharged += discharged_energy(run, id);
        int v = run.lp.find_var(VarKind::discharger_capacity, id);
        if (v >= 0) capacity += run.solution.primal[v];
      }
    }
  } else {
    discharged = discharged_energy(run, row.component);
    int v = run.lp.find_var(VarKind::discharger_capacity, row.component);
    if (v >= 0) capacity = run.solution.primal[v];
  }
  return capacity > 1e-9 ? discharged / capacity : 0.0;
}

int cmd_validate(const std::string& bundle) {
  Network net;
  try {
    net = parse_network_bundle(bundle);
  } catch (const ValidationFailed& e) {
    std::cout << e.report().to_string();
    std::cerr << "ValidationFailed: " << e.report().violations.size()
              << " violation(s)\n";
    return 2;
  }
  std::cout << "ok: " << net.buses.size() << " buses, "
            << net.generators.size() << " generators, " << net.lines.size()
            << " lines, " << net.storage_techs.size() << " storage techs, "
            << net.snapshots.size() << " snapshots\n";
  return 0;
}

struct SolveFlags {
  std::string bundle;
  std::string scenario_file;
  std::string out_dir;
  int resample = 1;
  std::optional<double> tol;
  std::optional<long> max_iter;
  std::optional<double> epsilon_cost;
};

ScenarioConfig effective_scenario(const SolveFlags& flags) {
  ScenarioConfig cfg = parse_scenario(flags.scenario_file);
  if (flags.tol) {
    if (*flags.tol <= 0.0) throw Error("OutOfRange", "--tol must be > 0");
    cfg.solver.feasibility_tol = *flags.tol;
    cfg.solver.optimality_tol = *flags.tol;
  }
  if (flags.max_iter) {
    if (*flags.max_iter < 1) throw Error("OutOfRange", "--max-iter must be >= 1");
    cfg.solver.max_iterations = *flags.max_iter;
  }
  if (flags.epsilon_cost) {
    if (*flags.epsilon_cost < 0.0) {
      throw Error("OutOfRange", "--epsilon-cost must be >= 0");
    }
    cfg.epsilon_cost = *flags.epsilon_cost;
  }
  return cfg;
}

int cmd_solve(const SolveFlags& flags) {
  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.bundle = flags.bundle;
  manifest.scenario_file = flags.scenario_file;
  manifest.resample = flags.resample;
  manifest.digests = bundle_digests(flags.bundle);

  auto t0 = std::chrono::steady_clock::now();
  Network net = parse_network_bundle(flags.bundle);
  if (flags.resample > 1) net = resample_snapshots(net, flags.resample);
  ScenarioConfig cfg = effective_scenario(flags);
  manifest.scenario = cfg;
  manifest.timings.ingest_seconds = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  LinearProgram lp = build_problem(net, cfg);
  manifest.timings.build_seconds = seconds_since(t1);

  Solution sol = solve(lp, cfg.solver);
  manifest.timings.solve_seconds = sol.solve_seconds;
  manifest.status = sol.status;
  manifest.objective = sol.objective;
  manifest.iterations = sol.iterations;

  switch (sol.status) {
    case SolveStatus::optimal:
      break;
    case SolveStatus::infeasible:
      throw Error("Infeasible", "the problem has no feasible point");
    case SolveStatus::unbounded:
      throw Error("Unbounded", "the objective is unbounded below");
    case SolveStatus::iteration_limit:
      throw Error("IterationLimit",
                  "iteration limit (" +
                      std::to_string(cfg.solver.max_iterations) +
                      ") reached before optimality");
  }

  CertificateReport cert = verify_kkt(lp, sol);
  std::string out_dir =
      flags.out_dir.empty() ? "runs/" + cfg.name : flags.out_dir;
  write_run_directory(out_dir, net, cfg, lp, sol, cert, manifest);

  if (!cert.pass) {
    std::cerr << "warning: optimality certificate failed, see "
              << (fs::path(out_dir) / "kkt.txt").string() << "\n";
  }
  std::cout << "optimal: objective " << fmt(sol.objective) << " EUR/yr after "
            << sol.iterations << " iterations -> " << out_dir << "\n";
  return 0;
}

int cmd_lcos(const std::string& run_dir, std::vector<std::string> techs,
             const std::optional<std::string>& out_file) {
  LoadedRun run = load_run(run_dir);
  StorageMode mode = run.manifest.scenario.storage_mode;
  bool all = techs.empty();
  if (all) {
    for (const StorageTech& st : run.network.storage_techs) {
      techs.push_back(st.id);
    }
  }
  std::ostringstream s;
  s << "tech,lcos_eur_per_kwh,full_load_hours,ep_ratio_hours,discharged_mwh,"
       "capital_cost_eur_per_yr,charging_cost_eur_per_yr\n";
  for (const std::string& id : techs) {
    ModelledLcos m;
    try {
      m = modelled_lcos(run.lp, run.solution, run.network, mode, id);
    } catch (const Error& e) {
      if (all && e.kind() == "ZeroDischarge") continue;
      throw;
    }
    s << id << "," << fmt(m.lcos) << "," << fmt(m.full_load_hours) << ","
      << fmt(m.ep_ratio_hours) << "," << fmt(m.discharged_mwh) << ","
      << fmt(m.capital_cost) << "," << fmt(m.charging_cost) << "\n";
  }
  emit(out_file, s.str());
  return 0;
}

int cmd_mpi(const std::string& run_dir, const std::string& kind_text,
            const std::optional<std::string>& country,
            std::optional<double> threshold_mw, std::optional<double> min_flh,
            const std::optional<std::string>& out_file) {
  LoadedRun run = load_run(run_dir);
  StorageMode mode = run.manifest.scenario.storage_mode;
  double threshold =
      threshold_mw ? *threshold_mw : run.manifest.scenario.threshold_mw;
  double flh_floor = min_flh ? *min_flh : run.manifest.scenario.min_flh;

  MpiTable table =
      market_potential(run.lp, run.solution, run.network, mode,
                       parse_component_kind(kind_text), country);
  std::ostringstream s;
  s << "component,kind,location,expanded,full_load_hours\n";
  for (const MpiRow& row : table.rows) {
    double flh = row_full_load_hours(run, row, mode);
    if (!passes_report_filter(row.expanded_capacity, flh, threshold,
                              flh_floor)) {
      continue;
    }
    s << row.component << "," << kind_text << "," << row.bus << ","
      << fmt(row.expanded_capacity) << "," << fmt(flh) << "\n";
  }
  s << "TOTAL," << kind_text << ",," << fmt(table.aggregate) << ",\n";
  emit(out_file, s.str());
  return 0;
}

int cmd_kpi(const std::string& run_dir,
            const std::optional<std::string>& out_file) {
  LoadedRun run = load_run(run_dir);
  KpiReport report = kpis(run.lp, run.solution, run.network,
                          run.manifest.scenario.storage_mode);
  std::ostringstream s;
  s << "metric,value\n";
  s << "total_system_cost_eur_per_yr," << fmt(report.total_system_cost) << "\n";
  s << "relative_investment_ct_per_kwh,";
  if (report.relative_investment_ct_per_kwh) {
    s << fmt(*report.relative_investment_ct_per_kwh);
  }
  s << "\n";
  s << "curtailment_fraction," << fmt(report.curtailment_fraction) << "\n";
  s << "annual_demand_mwh," << fmt(report.annual_demand_mwh) << "\n";
  s << "\n";
  s << "tech,charger_mw,discharger_mw,store_mwh,ep_ratio_hours,"
       "full_load_hours\n";
  for (const StorageKpi& k : report.storage) {
    s << k.tech << "," << fmt(k.charger_mw) << "," << fmt(k.discharger_mw)
      << "," << fmt(k.store_mwh) << "," << fmt(k.ep_ratio_hours) << ","
      << fmt(k.full_load_hours) << "\n";
  }
  emit(out_file, s.str());
  return 0;
}

int cmd_wsb(const std::string& without_dir, const std::string& with_dir,
            const std::optional<std::string>& out_file) {
  LoadedRun without = load_run(without_dir);
  LoadedRun with = load_run(with_dir);
  WholeSystemBenefit benefit = whole_system_benefit(
      without.lp, without.solution, with.lp, with.solution);
  std::ostringstream s;
  s << "metric,value\n";
  s << "objective_without_eur_per_yr," << fmt(without.solution.objective)
    << "\n";
  s << "objective_with_eur_per_yr," << fmt(with.solution.objective) << "\n";
  s << "net_benefit_eur_per_yr," << fmt(benefit.net) << "\n";
  s << "gross_benefit_eur_per_yr," << fmt(benefit.gross) << "\n";
  emit(out_file, s.str());
  return 0;
}

int cmd_compare(const std::vector<std::string>& run_dirs,
                std::optional<double> threshold_mw,
                const std::optional<std::string>& out_file) {
  std::vector<LoadedRun> runs;
  for (const std::string& dir : run_dirs) runs.push_back(load_run(dir));

  const StorageComponentSpec::Kind kinds[] = {
      StorageComponentSpec::Kind::charger,
      StorageComponentSpec::Kind::discharger,
      StorageComponentSpec::Kind::store};
  const char* kind_names[] = {"charger", "discharger", "store"};

  std::ostringstream s;
  s << "scenario,kind,component,location,expanded\n";
  // per kind: the tables again for the verdict section
  std::vector<std::vector<ScenarioMpi>> by_kind(3);
  for (const LoadedRun& run : runs) {
    StorageMode mode = run.manifest.scenario.storage_mode;
    for (int k = 0; k < 3; ++k) {
      MpiTable table = market_potential(run.lp, run.solution, run.network,
                                        mode, kinds[k]);
      for (const MpiRow& row : table.rows) {
        s << run.manifest.scenario.name << "," << kind_names[k] << ","
          << row.component << "," << row.bus << ","
          << fmt(row.expanded_capacity) << "\n";
      }
      by_kind[k].push_back({run.manifest.scenario.name, table});
    }
  }

  double threshold = threshold_mw ? *threshold_mw
                                  : runs.front().manifest.scenario.threshold_mw;
  s << "\n";
  s << "kind,component";
  for (const LoadedRun& run : runs) {
    s << ",mpi:" << run.manifest.scenario.name;
  }
  s << ",valuable,threshold_pass,outranks\n";
  for (int k = 0; k < 3; ++k) {
    // all-pairs comparisons so each verdict lists every beaten component
    std::vector<std::string> components;
    for (const ScenarioMpi& t : by_kind[k]) {
      for (const MpiRow& row : t.table.rows) {
        if (std::find(components.begin(), components.end(), row.component) ==
            components.end()) {
          components.push_back(row.component);
        }
      }
    }
    std::vector<std::pair<std::string, std::string>> comparisons;
    for (std::size_t i = 0; i < components.size(); ++i) {
      for (std::size_t j = i + 1; j < components.size(); ++j) {
        comparisons.emplace_back(components[i], components[j]);
      }
    }
    for (const CriteriaVerdict& v :
         evaluate_criteria(by_kind[k], threshold, comparisons)) {
      s << kind_names[k] << "," << v.component;
      for (double m : v.mpi) s << "," << fmt(m);
      s << "," << (v.valuable ? "true" : "false") << ","
        << (v.threshold_pass ? "true" : "false") << ",";
      for (std::size_t i = 0; i < v.outranks.size(); ++i) {
        if (i > 0) s << ";";
        s << v.outranks[i];
      }
      s << "\n";
    }
  }
  emit(out_file, s.str());
  return 0;
}

int cmd_export_lp(const SolveFlags& flags,
                  const std::optional<std::string>& out_file) {
  Network net = parse_network_bundle(flags.bundle);
  if (flags.resample > 1) net = resample_snapshots(net, flags.resample);
  ScenarioConfig cfg = effective_scenario(flags);
  LinearProgram lp = build_problem(net, cfg);
  std::ostringstream s;
  write_mps(lp, s, cfg.name);
  emit(out_file, s.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"storage valuation pipeline: capacity-expansion runs and "
               "storage market analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string bundle, scenario_file, run_dir, with_dir, kind_text = "discharger";
  std::string out_str;
  std::vector<std::string> techs, run_dirs;
  SolveFlags flags;
  std::optional<double> opt_tol, opt_epsilon, opt_threshold, opt_min_flh;
  std::optional<long> opt_max_iter;
  std::optional<std::string> opt_country;
  int resample = 1;

  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tol", opt_tol, "feasibility and optimality tolerance");
    cmd->add_option("--max-iter", opt_max_iter, "simplex iteration limit");
    cmd->add_option("--resample", resample,
                    "aggregate consecutive snapshot groups of this size");
    cmd->add_option("--epsilon-cost", opt_epsilon,
                    "storage dispatch epsilon cost override, EUR/MWh");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "check a network bundle, print the violation report");
  validate->add_option("bundle", bundle, "network bundle directory")
      ->required();

  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "build and solve a scenario, write a run directory");
  solve_cmd->add_option("bundle", bundle, "network bundle directory")
      ->required();
  solve_cmd->add_option("scenario", scenario_file, "scenario config file")
      ->required();
  solve_cmd->add_option("-o,--out", out_str,
                        "run directory (default runs/<scenario name>)");
  add_solver_flags(solve_cmd);

  CLI::App* lcos_cmd = app.add_subcommand(
      "lcos", "modelled levelized cost of storage from a stored run");
  lcos_cmd->add_option("run", run_dir, "run directory")->required();
  lcos_cmd->add_option("tech", techs, "storage tech ids (default: all)");
  lcos_cmd->add_option("-o,--out", out_str, "output file (default stdout)");

  CLI::App* mpi_cmd = app.add_subcommand(
      "mpi", "market potential per storage component from a stored run");
  mpi_cmd->add_option("run", run_dir, "run directory")->required();
  mpi_cmd->add_option("--kind", kind_text, "charger, discharger or store")
      ->check(CLI::IsMember({"charger", "discharger", "store"}));
  mpi_cmd->add_option("--country", opt_country, "restrict to one country");
  mpi_cmd->add_option("--threshold-mw", opt_threshold,
                      "report filter: minimum market potential");
  mpi_cmd->add_option("--min-flh", opt_min_flh,
                      "report filter: minimum full-load hours");
  mpi_cmd->add_option("-o,--out", out_str, "output file (default stdout)");

  CLI::App* kpi_cmd =
      app.add_subcommand("kpi", "system KPIs from a stored run");
  kpi_cmd->add_option("run", run_dir, "run directory")->required();
  kpi_cmd->add_option("-o,--out", out_str, "output file (default stdout)");

  CLI::App* wsb_cmd = app.add_subcommand(
      "wsb", "whole-system benefit between a run without and with storage");
  wsb_cmd->add_option("without", run_dir, "run directory without the storage")
      ->required();
  wsb_cmd->add_option("with", with_dir, "run directory with the storage")
      ->required();
  wsb_cmd->add_option("-o,--out", out_str, "output file (default stdout)");

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "cross-scenario market potential table and criteria verdicts");
  compare_cmd->add_option("runs", run_dirs, "run directories")
      ->required()
      ->expected(-1);
  compare_cmd->add_option("--threshold-mw", opt_threshold,
                          "threshold for the criteria verdicts");
  compare_cmd->add_option("-o,--out", out_str, "output file (default stdout)");

  CLI::App* export_cmd =
      app.add_subcommand("export-lp", "dump the scenario program as MPS");
  export_cmd->add_option("bundle", bundle, "network bundle directory")
      ->required();
  export_cmd->add_option("scenario", scenario_file, "scenario config file")
      ->required();
  export_cmd->add_option("-o,--out", out_str, "output file (default stdout)");
  add_solver_flags(export_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::optional<std::string> out_file;
  if (!out_str.empty()) out_file = out_str;
  flags.bundle = bundle;
  flags.scenario_file = scenario_file;
  flags.out_dir = out_str;
  flags.resample = resample;
  flags.tol = opt_tol;
  flags.max_iter = opt_max_iter;
  flags.epsilon_cost = opt_epsilon;

  try {
    if (validate->parsed()) return cmd_validate(bundle);
    if (solve_cmd->parsed()) return cmd_solve(flags);
    if (lcos_cmd->parsed()) return cmd_lcos(run_dir, techs, out_file);
    if (mpi_cmd->parsed()) {
      return cmd_mpi(run_dir, kind_text, opt_country, opt_threshold,
                     opt_min_flh, out_file);
    }
    if (kpi_cmd->parsed()) return cmd_kpi(run_dir, out_file);
    if (wsb_cmd->parsed()) return cmd_wsb(run_dir, with_dir, out_file);
    if (compare_cmd->parsed()) {
      return cmd_compare(run_dirs, opt_threshold, out_file);
    }
    if (export_cmd->parsed()) return cmd_export_lp(flags, out_file);
    std::cerr << "Internal: no subcommand dispatched\n";
    return 5;
  } catch (const ValidationFailed& e) {
    std::cerr << "ValidationFailed: " << e.report().violations.size()
              << " violation(s)\n";
    std::cerr << e.report().to_string();
    return 2;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "Internal: " << e.what() << "\n";
    return 5;
  }
}
