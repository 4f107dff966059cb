#pragma once

#include <optional>
#include <string>

#include "storval/solver.hpp"

namespace storval {

// Storage-design scenario: how charger/store/discharger capacities couple.
//   fixed_ep:    every tech holds H+ = H- and Hstore = ratio * H-
//   variable_ep: components scale freely, except techs marked fixed_ep keep
//                their shared charger/discharger size (battery inverter)
//   h2_hub:      variable_ep plus hub members pooling one store per hub
enum class StorageMode { fixed_ep, variable_ep, h2_hub };

const char* to_string(StorageMode mode);
StorageMode parse_storage_mode(const std::string& text);  // throws MalformedKey

struct ScenarioConfig {
  std::string name = "scenario";
  StorageMode storage_mode = StorageMode::fixed_ep;
  std::optional<double> co2_cap;  // tCO2 per period; absent = unconstrained
  double equity_fraction = 0.8;   // 0 disables the per-country rows
  double line_volume_expansion_frac = 0.25;
  std::optional<double> epsilon_cost;  // overrides per-tech dispatch epsilon
  double threshold_mw = 1.0;           // report filter: minimum market potential
  double min_flh = 80.0;               // report filter: minimum full-load hours
  SolverOptions solver;
};

}  // namespace storval
