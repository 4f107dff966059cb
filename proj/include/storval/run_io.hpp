#pragma once

// Persistence for solved runs. `solve` writes a run directory holding the
// solution as plain tables plus a manifest, so every analysis subcommand can
// work from files without solving again:
//
//   capacities.csv  kind,id,location,existing,optimized,expanded
//   dispatch.csv    timestamp, one column per generator (MW)
//   flows.csv       timestamp, one column per line (MW, positive from->to)
//   prices.csv      timestamp, one column per bus (EUR/MWh)
//   storage.csv     timestamp, per tech <id>.charge/.discharge, per store
//                   owner <entity>.level, per inflow tech <id>.spill
//   kkt.txt         optimality certificate (residuals and verdict)
//   manifest.json   input paths and digests, effective scenario, status,
//                   objective, iteration count, stage timings
//   summary.json    machine-readable run summary (objective, KPIs, storage)
//
// All files are written atomically (temp file + rename). Reading back
// recomputes the input digests and the objective and refuses mismatches.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "storval/analysis.hpp"
#include "storval/ingest.hpp"
#include "storval/lp.hpp"
#include "storval/model.hpp"
#include "storval/scenario.hpp"
#include "storval/solver.hpp"

namespace storval {

inline constexpr const char* kToolVersion = "0.1.0";

// Wall-clock seconds per pipeline stage, recorded in the manifest. Timings are
// the only run-directory content allowed to differ between identical reruns.
struct StageTimings {
  double ingest_seconds = 0.0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  double write_seconds = 0.0;
};

struct RunManifest {
  std::string tool_version;
  std::string bundle;         // network bundle directory, as given on solve
  std::string scenario_file;  // scenario file path, as given on solve
  int resample = 1;
  ScenarioConfig scenario;  // effective config (file plus flag overrides)
  SolveStatus status = SolveStatus::optimal;
  double objective = 0.0;
  long iterations = 0;
  std::map<std::string, std::string> digests;  // bundle file -> fnv1a64 hex
  StageTimings timings;
};

// FNV-1a 64-bit digest of a file's bytes, as a 16-hex-digit string.
std::string file_digest(const std::filesystem::path& path);

// Writes `content` to `path` via a sibling temp file and an atomic rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

void write_run_directory(const std::filesystem::path& run_dir,
                         const Network& network, const ScenarioConfig& scenario,
                         const LinearProgram& lp, const Solution& solution,
                         const CertificateReport& certificate,
                         const RunManifest& manifest);

RunManifest load_manifest(const std::filesystem::path& run_dir);

// A run reloaded from disk. The linear program is rebuilt from the bundle and
// the manifest's effective scenario (construction is deterministic, so the
// variables and rows match the solve-time program exactly); the solution's
// primal values come from the stored tables, and dual values are restored for
// balance rows only -- enough for prices, charging cost and every analysis
// operation, but not for a fresh KKT check (that certificate is kkt.txt).
struct LoadedRun {
  RunManifest manifest;
  Network network;
  LinearProgram lp;
  Solution solution;
};

// Loads manifest + tables, reparses the bundle (digests must match), rebuilds
// the program and checks the recomputed objective against the stored one.
// Throws CorruptRun on any mismatch.
LoadedRun load_run(const std::filesystem::path& run_dir);

}  // namespace storval
