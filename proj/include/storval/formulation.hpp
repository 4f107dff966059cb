#pragma once

#include <string>
#include <vector>

#include "storval/graph.hpp"
#include "storval/lp.hpp"
#include "storval/model.hpp"
#include "storval/scenario.hpp"

namespace storval {

// One energy store in the program. Normally a storage tech owns its store;
// under StorageMode::h2_hub all techs sharing a hub_id feed one common store,
// whose spec (cost, standing losses) is taken from the first member.
struct StoreOwner {
  std::string entity;        // tech id, or the hub id for shared stores
  int spec_tech = 0;         // index into network.storage_techs
  std::vector<int> members;  // tech indices charging/discharging this store
};

// Grouping used for store variables and energy balances. Throws
// HubMembersAcrossBuses when members of one hub sit on different buses.
std::vector<StoreOwner> store_owners(const Network& network, StorageMode mode);

// Creates every variable with bounds and objective coefficients, in the fixed
// order: G (generators), F (lines), H+/H-/Hstore (storage techs), then the
// per-snapshot blocks g, f, h+, h-, e, spill. Capital cost is charged on
// expansion above existing capacity via the objective offset. Throws
// InfeasibleBounds when a variable's bounds cross.
void add_variables(LinearProgram& lp, const Network& network,
                   const ScenarioConfig& scenario);

// One equality per bus and snapshot: generation plus net storage discharge
// plus net line imports equals demand. Duals are nodal prices x weight.
void add_balance_constraints(LinearProgram& lp, const Network& network);

// Dispatch rows g - avail*G <= 0 for every generator and snapshot.
void add_generator_constraints(LinearProgram& lp, const Network& network);

// Signed flow bounds |f| <= avail*F (two rows per line-snapshot) and one
// reactance-weighted voltage-law equality per cycle and snapshot.
void add_flow_constraints(LinearProgram& lp, const Network& network,
                          const CycleBasis& cycles);

// Charge/discharge/level limits, the cyclic energy balance per store owner,
// and the scenario coupling rows:
//   fixed_ep    — every tech: H+ = H-, and Hstore = ep_ratio_hours * H-
//   variable_ep — techs with Coupling::fixed_ep keep H+ = H- (shared inverter)
//   h2_hub      — as variable_ep; hub members share one store (see
//                 store_owners)
void add_storage_constraints(LinearProgram& lp, const Network& network,
                             const ScenarioConfig& scenario);

// Single row: total carrier-weighted emissions <= cap. Dual is the CO2 price.
void add_emission_constraint(LinearProgram& lp, const Network& network,
                             double co2_cap);

// Per country with positive demand: own generation >= fraction * own demand
// (energy-weighted; storage discharge does not count as generation).
void add_equity_constraints(LinearProgram& lp, const Network& network,
                            double equity_fraction);

// Total expansion volume cap: sum over extendable lines of (F - F0)*length
// <= frac * sum over all lines of F0*length.
void add_line_volume_constraint(LinearProgram& lp, const Network& network,
                                double frac);

// Assembles the full program: variables, then every constraint family above
// (emission only when the scenario sets a cap, equity only for a positive
// fraction, line volume only when a line is extendable), finalized. Throws
// EmptySnapshots on an empty snapshot set. Deterministic: identical inputs
// yield bit-identical programs.
LinearProgram build_problem(const Network& network,
                            const ScenarioConfig& scenario);

}  // namespace storval
