#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "json.hpp"
#include "storval/errors.hpp"
#include "storval/formulation.hpp"
#include "storval/run_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace storval {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << (v + 0.0);  // never print negative zero
  return out.str();
}

[[noreturn]] void corrupt(const std::string& what) {
  throw Error("CorruptRun", what);
}

double var_value(const LinearProgram& lp, const Solution& sol, VarKind kind,
                 const std::string& entity, int snapshot = -1) {
  int v = lp.find_var(kind, entity, snapshot);
  return v < 0 ? 0.0 : sol.primal[v];
}

int need_var(const LinearProgram& lp, VarKind kind, const std::string& entity,
             int snapshot, const std::string& file) {
  int v = lp.find_var(kind, entity, snapshot);
  if (v < 0) {
    corrupt(file + ": no variable " + std::string(to_string(kind)) + " '" +
            entity + "'");
  }
  return v;
}

std::string capacities_table(const Network& net, const ScenarioConfig& scenario,
                             const LinearProgram& lp, const Solution& sol) {
  std::ostringstream s;
  s << "kind,id,location,existing,optimized,expanded\n";
  for (const Generator& g : net.generators) {
    double v = var_value(lp, sol, VarKind::generator_capacity, g.id);
    s << "generator," << g.id << "," << g.bus << "," << fmt(g.existing_capacity)
      << "," << fmt(v) << "," << fmt(v - g.existing_capacity) << "\n";
  }
  for (const Line& l : net.lines) {
    double v = var_value(lp, sol, VarKind::line_capacity, l.id);
    s << "line," << l.id << "," << l.bus_from << ":" << l.bus_to << ","
      << fmt(l.existing_capacity) << "," << fmt(v) << ","
      << fmt(v - l.existing_capacity) << "\n";
  }
  for (const StorageTech& st : net.storage_techs) {
    double hc = var_value(lp, sol, VarKind::charger_capacity, st.id);
    double hd = var_value(lp, sol, VarKind::discharger_capacity, st.id);
    s << "charger," << st.id << "," << st.bus << ",0," << fmt(hc) << ","
      << fmt(hc) << "\n";
    s << "discharger," << st.id << "," << st.bus << ",0," << fmt(hd) << ","
      << fmt(hd) << "\n";
  }
  for (const StoreOwner& o : store_owners(net, scenario.storage_mode)) {
    double hs = var_value(lp, sol, VarKind::store_capacity, o.entity);
    s << "store," << o.entity << ","
      << net.storage_techs[o.spec_tech].bus << ",0," << fmt(hs) << ","
      << fmt(hs) << "\n";
  }
  return s.str();
}

std::string wide_table(const Network& net,
                       const std::vector<std::string>& columns,
                       const std::function<double(int, int)>& value) {
  std::ostringstream s;
  s << "timestamp";
  for (const std::string& c : columns) s << "," << c;
  s << "\n";
  for (std::size_t t = 0; t < net.snapshots.size(); ++t) {
    s << net.snapshots.timestamps[t];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      s << "," << fmt(value(static_cast<int>(c), static_cast<int>(t)));
    }
    s << "\n";
  }
  return s.str();
}

// The storage table mixes per-tech charge/discharge/spill and per-owner level
// series; columns are "<entity>.<series>".
struct StorageColumn {
  std::string name;
  VarKind kind;
  std::string entity;
};

std::vector<StorageColumn> storage_columns(const Network& net,
                                           const ScenarioConfig& scenario,
                                           const LinearProgram& lp) {
  std::vector<StorageColumn> cols;
  for (const StorageTech& st : net.storage_techs) {
    cols.push_back({st.id + ".charge", VarKind::charge, st.id});
    cols.push_back({st.id + ".discharge", VarKind::discharge, st.id});
  }
  for (const StoreOwner& o : store_owners(net, scenario.storage_mode)) {
    cols.push_back({o.entity + ".level", VarKind::level, o.entity});
  }
  for (const StorageTech& st : net.storage_techs) {
    if (lp.find_var(VarKind::spill, st.id, 0) >= 0) {
      cols.push_back({st.id + ".spill", VarKind::spill, st.id});
    }
  }
  return cols;
}

json scenario_to_json(const ScenarioConfig& s) {
  json j;
  j["name"] = s.name;
  j["storage_mode"] = to_string(s.storage_mode);
  j["co2_cap"] = s.co2_cap ? json(*s.co2_cap) : json(nullptr);
  j["equity_fraction"] = s.equity_fraction;
  j["line_volume_expansion_frac"] = s.line_volume_expansion_frac;
  j["epsilon_cost"] = s.epsilon_cost ? json(*s.epsilon_cost) : json(nullptr);
  j["threshold_mw"] = s.threshold_mw;
  j["min_flh"] = s.min_flh;
  j["solver"] = {{"feasibility_tol", s.solver.feasibility_tol},
                 {"optimality_tol", s.solver.optimality_tol},
                 {"max_iterations", s.solver.max_iterations}};
  return j;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig s;
  s.name = j.at("name").get<std::string>();
  s.storage_mode = parse_storage_mode(j.at("storage_mode").get<std::string>());
  if (!j.at("co2_cap").is_null()) s.co2_cap = j.at("co2_cap").get<double>();
  s.equity_fraction = j.at("equity_fraction").get<double>();
  s.line_volume_expansion_frac =
      j.at("line_volume_expansion_frac").get<double>();
  if (!j.at("epsilon_cost").is_null()) {
    s.epsilon_cost = j.at("epsilon_cost").get<double>();
  }
  s.threshold_mw = j.at("threshold_mw").get<double>();
  s.min_flh = j.at("min_flh").get<double>();
  const json& solver = j.at("solver");
  s.solver.feasibility_tol = solver.at("feasibility_tol").get<double>();
  s.solver.optimality_tol = solver.at("optimality_tol").get<double>();
  s.solver.max_iterations = solver.at("max_iterations").get<long>();
  return s;
}

SolveStatus status_from_string(const std::string& text) {
  for (SolveStatus s : {SolveStatus::optimal, SolveStatus::infeasible,
                        SolveStatus::unbounded, SolveStatus::iteration_limit}) {
    if (text == to_string(s)) return s;
  }
  corrupt("manifest.json: unknown status '" + text + "'");
}

void check_timestamps(const csv::Table& t, const Network& net) {
  if (t.rows.size() != net.snapshots.size()) {
    corrupt(t.file + ": " + std::to_string(t.rows.size()) + " rows but " +
            std::to_string(net.snapshots.size()) + " snapshots");
  }
  int c = t.require("timestamp");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.cell(static_cast<int>(r), c) != net.snapshots.timestamps[r]) {
      corrupt(t.file + ": timestamp mismatch at row " + std::to_string(r + 1));
    }
  }
}

}  // namespace

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("MissingFile", path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a offset basis
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 1099511628211ull;  // FNV prime
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(hex);
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("IoFailure", "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("IoFailure", "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw Error("IoFailure",
                "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

void write_run_directory(const fs::path& run_dir, const Network& net,
                         const ScenarioConfig& scenario,
                         const LinearProgram& lp, const Solution& sol,
                         const CertificateReport& certificate,
                         const RunManifest& manifest) {
  if (sol.status != SolveStatus::optimal) {
    throw Error("NotOptimal", "only optimal runs are persisted");
  }
  auto started = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) {
    throw Error("IoFailure",
                "cannot create " + run_dir.string() + ": " + ec.message());
  }

  write_file_atomic(run_dir / "capacities.csv",
                    capacities_table(net, scenario, lp, sol));

  std::vector<std::string> gen_ids, line_ids, bus_ids;
  for (const Generator& g : net.generators) gen_ids.push_back(g.id);
  for (const Line& l : net.lines) line_ids.push_back(l.id);
  for (const Bus& b : net.buses) bus_ids.push_back(b.id);

  write_file_atomic(
      run_dir / "dispatch.csv",
      wide_table(net, gen_ids, [&](int c, int t) {
        return sol.primal[lp.find_var(VarKind::dispatch, gen_ids[c], t)];
      }));
  write_file_atomic(
      run_dir / "flows.csv", wide_table(net, line_ids, [&](int c, int t) {
        return sol.primal[lp.find_var(VarKind::flow, line_ids[c], t)];
      }));

  std::vector<std::vector<double>> prices = extract_nodal_prices(lp, sol, net);
  write_file_atomic(run_dir / "prices.csv",
                    wide_table(net, bus_ids, [&](int c, int t) {
                      return prices[c][t];
                    }));

  std::vector<StorageColumn> st_cols = storage_columns(net, scenario, lp);
  std::vector<std::string> st_names;
  for (const StorageColumn& c : st_cols) st_names.push_back(c.name);
  write_file_atomic(
      run_dir / "storage.csv", wide_table(net, st_names, [&](int c, int t) {
        return sol.primal[lp.find_var(st_cols[c].kind, st_cols[c].entity, t)];
      }));

  {
    std::ostringstream kkt;
    kkt << "status " << to_string(sol.status) << "\n"
        << "objective " << fmt(sol.objective) << "\n"
        << certificate.to_string();
    write_file_atomic(run_dir / "kkt.txt", kkt.str());
  }

  {
    KpiReport report = kpis(lp, sol, net, scenario.storage_mode);
    json j;
    j["scenario"] = scenario.name;
    j["storage_mode"] = to_string(scenario.storage_mode);
    j["status"] = to_string(sol.status);
    j["objective_eur_per_yr"] = sol.objective;
    j["iterations"] = sol.iterations;
    j["annual_demand_mwh"] = report.annual_demand_mwh;
    j["relative_investment_ct_per_kwh"] =
        report.relative_investment_ct_per_kwh
            ? json(*report.relative_investment_ct_per_kwh)
            : json(nullptr);
    j["curtailment_fraction"] = report.curtailment_fraction;
    json storage = json::array();
    for (const StorageKpi& k : report.storage) {
      storage.push_back({{"tech", k.tech},
                         {"charger_mw", k.charger_mw + 0.0},
                         {"discharger_mw", k.discharger_mw + 0.0},
                         {"store_mwh", k.store_mwh + 0.0},
                         {"ep_ratio_hours", k.ep_ratio_hours + 0.0},
                         {"full_load_hours", k.full_load_hours + 0.0}});
    }
    j["storage"] = storage;
    write_file_atomic(run_dir / "summary.json", j.dump(2) + "\n");
  }

  {
    RunManifest m = manifest;
    m.timings.write_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    json j;
    j["tool_version"] = m.tool_version;
    j["bundle"] = m.bundle;
    j["scenario_file"] = m.scenario_file;
    j["resample"] = m.resample;
    j["scenario"] = scenario_to_json(m.scenario);
    j["status"] = to_string(m.status);
    j["objective"] = m.objective;
    j["iterations"] = m.iterations;
    j["digests"] = m.digests;
    j["timings_seconds"] = {{"ingest", m.timings.ingest_seconds},
                            {"build", m.timings.build_seconds},
                            {"solve", m.timings.solve_seconds},
                            {"write", m.timings.write_seconds}};
    write_file_atomic(run_dir / "manifest.json", j.dump(2) + "\n");
  }
}

RunManifest load_manifest(const fs::path& run_dir) {
  fs::path file = run_dir / "manifest.json";
  std::ifstream in(file);
  if (!in) throw Error("MissingFile", file.string());
  RunManifest m;
  try {
    json j = json::parse(in);
    m.tool_version = j.at("tool_version").get<std::string>();
    m.bundle = j.at("bundle").get<std::string>();
    m.scenario_file = j.at("scenario_file").get<std::string>();
    m.resample = j.at("resample").get<int>();
    m.scenario = scenario_from_json(j.at("scenario"));
    m.status = status_from_string(j.at("status").get<std::string>());
    m.objective = j.at("objective").get<double>();
    m.iterations = j.at("iterations").get<long>();
    m.digests =
        j.at("digests").get<std::map<std::string, std::string>>();
    const json& t = j.at("timings_seconds");
    m.timings.ingest_seconds = t.at("ingest").get<double>();
    m.timings.build_seconds = t.at("build").get<double>();
    m.timings.solve_seconds = t.at("solve").get<double>();
    m.timings.write_seconds = t.at("write").get<double>();
  } catch (const json::exception& e) {
    corrupt("manifest.json: " + std::string(e.what()));
  }
  return m;
}

LoadedRun load_run(const fs::path& run_dir) {
  LoadedRun run;
  run.manifest = load_manifest(run_dir);
  if (run.manifest.status != SolveStatus::optimal) {
    throw Error("NotOptimal", "stored run is " +
                                  std::string(to_string(run.manifest.status)));
  }

  fs::path bundle = run.manifest.bundle;
  for (const auto& [file, digest] : run.manifest.digests) {
    std::string now = file_digest(bundle / file);
    if (now != digest) {
      corrupt("bundle file " + file + " changed since the solve (digest " +
              now + ", expected " + digest + ")");
    }
  }

  run.network = parse_network_bundle(bundle);
  if (run.manifest.resample > 1) {
    run.network = resample_snapshots(run.network, run.manifest.resample);
  }
  run.lp = build_problem(run.network, run.manifest.scenario);

  Solution& sol = run.solution;
  sol.status = run.manifest.status;
  sol.objective = run.manifest.objective;
  sol.iterations = run.manifest.iterations;
  sol.solve_seconds = run.manifest.timings.solve_seconds;
  sol.primal.assign(run.lp.num_vars(), 0.0);
  sol.dual.assign(run.lp.num_rows(), 0.0);
  sol.reduced_cost.assign(run.lp.num_vars(), 0.0);

  {
    csv::Table t = csv::read(run_dir / "capacities.csv");
    int c_kind = t.require("kind");
    int c_id = t.require("id");
    int c_opt = t.require("optimized");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const std::string& kind = t.cell(static_cast<int>(r), c_kind);
      VarKind vk;
      if (kind == "generator") {
        vk = VarKind::generator_capacity;
      } else if (kind == "line") {
        vk = VarKind::line_capacity;
      } else if (kind == "charger") {
        vk = VarKind::charger_capacity;
      } else if (kind == "discharger") {
        vk = VarKind::discharger_capacity;
      } else if (kind == "store") {
        vk = VarKind::store_capacity;
      } else {
        corrupt("capacities.csv: unknown kind '" + kind + "'");
      }
      int row = static_cast<int>(r);
      sol.primal[need_var(run.lp, vk, t.cell(row, c_id), -1,
                          "capacities.csv")] = t.number(row, c_opt);
    }
  }

  auto read_series = [&](const std::string& file, auto var_of) {
    csv::Table t = csv::read(run_dir / file);
    check_timestamps(t, run.network);
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (t.header[c] == "timestamp") continue;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        int v = var_of(t.header[c], static_cast<int>(r), file);
        sol.primal[v] = t.number(static_cast<int>(r), static_cast<int>(c));
      }
    }
  };

  read_series("dispatch.csv", [&](const std::string& id, int t,
                                  const std::string& file) {
    return need_var(run.lp, VarKind::dispatch, id, t, file);
  });
  read_series("flows.csv",
              [&](const std::string& id, int t, const std::string& file) {
                return need_var(run.lp, VarKind::flow, id, t, file);
              });
  read_series("storage.csv", [&](const std::string& name, int t,
                                 const std::string& file) {
    std::size_t dot = name.rfind('.');
    if (dot == std::string::npos) {
      corrupt(file + ": bad column '" + name + "'");
    }
    std::string entity = name.substr(0, dot);
    std::string series = name.substr(dot + 1);
    VarKind vk;
    if (series == "charge") {
      vk = VarKind::charge;
    } else if (series == "discharge") {
      vk = VarKind::discharge;
    } else if (series == "level") {
      vk = VarKind::level;
    } else if (series == "spill") {
      vk = VarKind::spill;
    } else {
      corrupt(file + ": bad column '" + name + "'");
    }
    return need_var(run.lp, vk, entity, t, file);
  });

  {
    csv::Table t = csv::read(run_dir / "prices.csv");
    check_timestamps(t, run.network);
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (t.header[c] == "timestamp") continue;
      const std::string& bus = t.header[c];
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        int row = run.lp.find_row(RowKind::balance, bus, static_cast<int>(r));
        if (row < 0) corrupt("prices.csv: unknown bus '" + bus + "'");
        sol.dual[row] = t.number(static_cast<int>(r), static_cast<int>(c)) *
                        run.network.snapshots.weights[r];
      }
    }
  }

  double recomputed = run.lp.objective_offset();
  for (int i = 0; i < run.lp.num_vars(); ++i) {
    recomputed += run.lp.cost()[i] * sol.primal[i];
  }
  if (std::abs(recomputed - sol.objective) >
      1e-6 * std::max(1.0, std::abs(sol.objective))) {
    corrupt("stored objective " + fmt(sol.objective) +
            " does not match the tables (recomputed " + fmt(recomputed) + ")");
  }
  return run;
}

}  // namespace storval
