#pragma once

#include <filesystem>

#include "storval/model.hpp"
#include "storval/scenario.hpp"

namespace storval {

// Reads a bundle directory (snapshots.csv, buses.csv, carriers.csv,
// generators.csv, lines.csv, storage.csv, loads.csv, plus optional
// availability.csv and inflow.csv), converts raw investment figures into
// annualized capital costs and validates the result.
// Throws Error("MissingFile"), Error("MalformedRow") or ValidationFailed.
Network parse_network_bundle(const std::filesystem::path& directory);

// Inverse of parse_network_bundle up to Network equality: reparsing the
// written bundle yields a structurally equal Network. Annualized generator and
// line costs are emitted as zero-rate one-year investments since the raw
// figures are not retained past ingest.
void write_network_bundle(const Network& network,
                          const std::filesystem::path& directory);

// key=value lines, '#' comments. Unknown keys or unparseable values throw
// Error("MalformedKey"); violated ranges throw Error("OutOfRange").
ScenarioConfig parse_scenario(const std::filesystem::path& file);

// Aggregates consecutive groups of `step` snapshots: kept weight is the group
// sum, kept series values are weight-averaged so that every per-bus energy
// total (and the total weight) is preserved exactly.
// Throws Error("NotDivisible") when step does not divide the snapshot count.
Network resample_snapshots(const Network& network, int step);

}  // namespace storval
