#include <cmath>
#include <map>
#include <string>

#include "storval/errors.hpp"
#include "storval/formulation.hpp"

namespace storval {

namespace {

double storage_epsilon(const StorageTech& tech, const ScenarioConfig& scenario) {
  return scenario.epsilon_cost ? *scenario.epsilon_cost
                               : tech.dispatch_epsilon_cost;
}

// EUR per MW (or MWh) and year from the per-kW spec.
double capital_per_mw(const StorageComponentSpec& spec) {
  return 1000.0 * annualized_cost(spec);
}

}  // namespace

std::vector<StoreOwner> store_owners(const Network& network, StorageMode mode) {
  std::vector<StoreOwner> owners;
  if (mode != StorageMode::h2_hub) {
    for (std::size_t s = 0; s < network.storage_techs.size(); ++s) {
      owners.push_back({network.storage_techs[s].id, static_cast<int>(s),
                        {static_cast<int>(s)}});
    }
    return owners;
  }

  std::map<std::string, int> hub_slot;  // hub id -> index into owners
  for (std::size_t s = 0; s < network.storage_techs.size(); ++s) {
    const StorageTech& tech = network.storage_techs[s];
    if (tech.coupling != Coupling::hub_member) {
      owners.push_back({tech.id, static_cast<int>(s), {static_cast<int>(s)}});
      continue;
    }
    auto [it, fresh] = hub_slot.try_emplace(*tech.hub_id,
                                            static_cast<int>(owners.size()));
    if (fresh) {
      owners.push_back({*tech.hub_id, static_cast<int>(s),
                        {static_cast<int>(s)}});
      continue;
    }
    StoreOwner& owner = owners[it->second];
    if (network.storage_techs[owner.spec_tech].bus != tech.bus) {
      throw Error("HubMembersAcrossBuses",
                  "hub '" + *tech.hub_id + "' spans buses '" +
                      network.storage_techs[owner.spec_tech].bus + "' and '" +
                      tech.bus + "'");
    }
    owner.members.push_back(static_cast<int>(s));
  }
  return owners;
}

void add_variables(LinearProgram& lp, const Network& network,
                   const ScenarioConfig& scenario) {
  const std::size_t T = network.snapshots.size();

  auto check = [](double lo, double up, const std::string& what) {
    if (lo > up) {
      throw Error("InfeasibleBounds",
                  what + ": lower " + std::to_string(lo) + " exceeds upper " +
                      std::to_string(up));
    }
  };

  for (const Generator& g : network.generators) {
    double lo = g.extendable ? std::max(g.capacity_min, g.existing_capacity)
                             : g.existing_capacity;
    double up = g.extendable ? g.capacity_max : g.existing_capacity;
    check(lo, up, "generator '" + g.id + "' capacity");
    lp.add_variable(VarKind::generator_capacity, g.id, -1, lo, up,
                    g.capital_cost);
    lp.add_objective_offset(-g.capital_cost * g.existing_capacity);
  }
  for (const Line& l : network.lines) {
    double lo = l.existing_capacity;
    double up = l.extendable ? l.capacity_max : l.existing_capacity;
    check(lo, up, "line '" + l.id + "' capacity");
    lp.add_variable(VarKind::line_capacity, l.id, -1, lo, up, l.capital_cost);
    lp.add_objective_offset(-l.capital_cost * l.existing_capacity);
  }

  std::vector<StoreOwner> owners = store_owners(network, scenario.storage_mode);
  for (const StorageTech& tech : network.storage_techs) {
    lp.add_variable(VarKind::charger_capacity, tech.id, -1, 0.0, kInf,
                    capital_per_mw(tech.charger));
    lp.add_variable(VarKind::discharger_capacity, tech.id, -1, 0.0, kInf,
                    capital_per_mw(tech.discharger));
  }
  for (const StoreOwner& owner : owners) {
    lp.add_variable(VarKind::store_capacity, owner.entity, -1, 0.0, kInf,
                    capital_per_mw(network.storage_techs[owner.spec_tech].store));
  }

  for (const Generator& g : network.generators) {
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_variable(VarKind::dispatch, g.id, static_cast<int>(t), 0.0, kInf,
                      g.marginal_cost * network.snapshots.weights[t]);
    }
  }
  for (const Line& l : network.lines) {
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_variable(VarKind::flow, l.id, static_cast<int>(t), -kInf, kInf, 0.0);
    }
  }
  for (const StorageTech& tech : network.storage_techs) {
    double eps = storage_epsilon(tech, scenario);
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_variable(VarKind::charge, tech.id, static_cast<int>(t), 0.0, kInf,
                      eps * network.snapshots.weights[t]);
    }
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_variable(VarKind::discharge, tech.id, static_cast<int>(t), 0.0,
                      kInf, eps * network.snapshots.weights[t]);
    }
  }
  for (const StoreOwner& owner : owners) {
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_variable(VarKind::level, owner.entity, static_cast<int>(t), 0.0,
                      kInf, 0.0);
    }
  }
  for (const StorageTech& tech : network.storage_techs) {
    if (tech.inflow.empty() || !tech.spillage_allowed) continue;
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_variable(VarKind::spill, tech.id, static_cast<int>(t), 0.0,
                      tech.inflow[t], 0.0);
    }
  }
}

void add_balance_constraints(LinearProgram& lp, const Network& network) {
  const std::size_t T = network.snapshots.size();
  const std::size_t B = network.buses.size();

  std::vector<std::vector<int>> gens_at(B), storage_at(B);
  for (std::size_t g = 0; g < network.generators.size(); ++g) {
    gens_at[network.bus_index(network.generators[g].bus)].push_back(
        static_cast<int>(g));
  }
  for (std::size_t s = 0; s < network.storage_techs.size(); ++s) {
    storage_at[network.bus_index(network.storage_techs[s].bus)].push_back(
        static_cast<int>(s));
  }
  IncidenceMatrix inc = incidence_matrix(network);

  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.add_row(RowKind::balance, network.buses[b].id,
                           static_cast<int>(t), Relation::eq,
                           network.loads[b][t]);
      for (int g : gens_at[b]) {
        lp.add_entry(row,
                     lp.find_var(VarKind::dispatch, network.generators[g].id,
                                 static_cast<int>(t)),
                     1.0);
      }
      for (int s : storage_at[b]) {
        const std::string& id = network.storage_techs[s].id;
        lp.add_entry(row, lp.find_var(VarKind::discharge, id, static_cast<int>(t)),
                     1.0);
        lp.add_entry(row, lp.find_var(VarKind::charge, id, static_cast<int>(t)),
                     -1.0);
      }
      // positive flow moves power from the line's from-bus to its to-bus
      for (int l = 0; l < inc.num_lines(); ++l) {
        int f = lp.find_var(VarKind::flow, network.lines[l].id,
                            static_cast<int>(t));
        if (inc.from[l] == static_cast<int>(b)) lp.add_entry(row, f, -1.0);
        if (inc.to[l] == static_cast<int>(b)) lp.add_entry(row, f, 1.0);
      }
    }
  }
}

void add_generator_constraints(LinearProgram& lp, const Network& network) {
  const std::size_t T = network.snapshots.size();
  for (const Generator& g : network.generators) {
    int cap = lp.find_var(VarKind::generator_capacity, g.id);
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.add_row(RowKind::availability, g.id, static_cast<int>(t),
                           Relation::le, 0.0);
      lp.add_entry(row, lp.find_var(VarKind::dispatch, g.id, static_cast<int>(t)),
                   1.0);
      lp.add_entry(row, cap, -g.availability[t]);
    }
  }
}

void add_flow_constraints(LinearProgram& lp, const Network& network,
                          const CycleBasis& cycles) {
  const std::size_t T = network.snapshots.size();
  for (const Line& l : network.lines) {
    int cap = lp.find_var(VarKind::line_capacity, l.id);
    for (std::size_t t = 0; t < T; ++t) {
      int f = lp.find_var(VarKind::flow, l.id, static_cast<int>(t));
      int up = lp.add_row(RowKind::flow_upper, l.id, static_cast<int>(t),
                          Relation::le, 0.0);
      lp.add_entry(up, f, 1.0);
      lp.add_entry(up, cap, -l.availability[t]);
      int lo = lp.add_row(RowKind::flow_lower, l.id, static_cast<int>(t),
                          Relation::ge, 0.0);
      lp.add_entry(lo, f, 1.0);
      lp.add_entry(lo, cap, l.availability[t]);
    }
  }
  for (int c = 0; c < cycles.num_cycles(); ++c) {
    std::string name = "c" + std::to_string(c);
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.add_row(RowKind::kvl, name, static_cast<int>(t),
                           Relation::eq, 0.0);
      for (const CycleEntry& entry : cycles.cycles[c]) {
        lp.add_entry(row,
                     lp.find_var(VarKind::flow, network.lines[entry.line].id,
                                 static_cast<int>(t)),
                     entry.sign * network.lines[entry.line].reactance);
      }
    }
  }
}

void add_storage_constraints(LinearProgram& lp, const Network& network,
                             const ScenarioConfig& scenario) {
  const std::size_t T = network.snapshots.size();
  std::vector<StoreOwner> owners = store_owners(network, scenario.storage_mode);

  for (const StorageTech& tech : network.storage_techs) {
    int cap = lp.find_var(VarKind::charger_capacity, tech.id);
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.add_row(RowKind::charge_limit, tech.id, static_cast<int>(t),
                           Relation::le, 0.0);
      lp.add_entry(row, lp.find_var(VarKind::charge, tech.id, static_cast<int>(t)),
                   1.0);
      lp.add_entry(row, cap, -1.0);
    }
  }
  for (const StorageTech& tech : network.storage_techs) {
    int cap = lp.find_var(VarKind::discharger_capacity, tech.id);
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.add_row(RowKind::discharge_limit, tech.id,
                           static_cast<int>(t), Relation::le, 0.0);
      lp.add_entry(row,
                   lp.find_var(VarKind::discharge, tech.id, static_cast<int>(t)),
                   1.0);
      lp.add_entry(row, cap, -1.0);
    }
  }
  for (const StoreOwner& owner : owners) {
    int cap = lp.find_var(VarKind::store_capacity, owner.entity);
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.add_row(RowKind::level_limit, owner.entity,
                           static_cast<int>(t), Relation::le, 0.0);
      lp.add_entry(row,
                   lp.find_var(VarKind::level, owner.entity, static_cast<int>(t)),
                   1.0);
      lp.add_entry(row, cap, -1.0);
    }
  }

  for (const StoreOwner& owner : owners) {
    double standing =
        network.storage_techs[owner.spec_tech].store.standing_efficiency;
    for (std::size_t t = 0; t < T; ++t) {
      double w = network.snapshots.weights[t];
      double inflow_rhs = 0.0;
      for (int s : owner.members) {
        const StorageTech& tech = network.storage_techs[s];
        if (!tech.inflow.empty()) inflow_rhs += w * tech.inflow[t];
      }
      int row = lp.add_row(RowKind::storage_balance, owner.entity,
                           static_cast<int>(t), Relation::eq, inflow_rhs);
      lp.add_entry(row,
                   lp.find_var(VarKind::level, owner.entity, static_cast<int>(t)),
                   1.0);
      std::size_t prev = (t + T - 1) % T;  // cyclic: the first links to the last
      lp.add_entry(row,
                   lp.find_var(VarKind::level, owner.entity,
                               static_cast<int>(prev)),
                   -std::pow(standing, w));
      for (int s : owner.members) {
        const StorageTech& tech = network.storage_techs[s];
        lp.add_entry(row,
                     lp.find_var(VarKind::charge, tech.id, static_cast<int>(t)),
                     -tech.charger.efficiency * w);
        lp.add_entry(row,
                     lp.find_var(VarKind::discharge, tech.id,
                                 static_cast<int>(t)),
                     w / tech.discharger.efficiency);
        if (!tech.inflow.empty() && tech.spillage_allowed) {
          lp.add_entry(row,
                       lp.find_var(VarKind::spill, tech.id,
                                   static_cast<int>(t)),
                       w);
        }
      }
    }
  }

  for (std::size_t s = 0; s < network.storage_techs.size(); ++s) {
    const StorageTech& tech = network.storage_techs[s];
    bool tie = scenario.storage_mode == StorageMode::fixed_ep ||
               tech.coupling == Coupling::fixed_ep;
    if (tie) {
      int row = lp.add_row(RowKind::charger_discharger_tie, tech.id, -1,
                           Relation::eq, 0.0);
      lp.add_entry(row, lp.find_var(VarKind::charger_capacity, tech.id), 1.0);
      lp.add_entry(row, lp.find_var(VarKind::discharger_capacity, tech.id),
                   -1.0);
    }
    if (scenario.storage_mode == StorageMode::fixed_ep && tech.ep_ratio_hours) {
      int row = lp.add_row(RowKind::store_ratio_tie, tech.id, -1, Relation::eq,
                           0.0);
      lp.add_entry(row, lp.find_var(VarKind::store_capacity, tech.id), 1.0);
      lp.add_entry(row, lp.find_var(VarKind::discharger_capacity, tech.id),
                   -*tech.ep_ratio_hours);
    }
  }
}

void add_emission_constraint(LinearProgram& lp, const Network& network,
                             double co2_cap) {
  const std::size_t T = network.snapshots.size();
  int row = lp.add_row(RowKind::emission, "co2", -1, Relation::le, co2_cap);
  for (const Generator& g : network.generators) {
    double factor =
        network.carriers[network.carrier_index(g.carrier)].emission_factor;
    if (factor == 0.0) continue;
    for (std::size_t t = 0; t < T; ++t) {
      lp.add_entry(row, lp.find_var(VarKind::dispatch, g.id, static_cast<int>(t)),
                   factor * network.snapshots.weights[t]);
    }
  }
}

void add_equity_constraints(LinearProgram& lp, const Network& network,
                            double equity_fraction) {
  const std::size_t T = network.snapshots.size();
  std::map<std::string, double> demand;  // country -> energy
  for (std::size_t b = 0; b < network.buses.size(); ++b) {
    double energy = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      energy += network.snapshots.weights[t] * network.loads[b][t];
    }
    demand[network.buses[b].country] += energy;
  }
  for (const auto& [country, energy] : demand) {
    if (energy <= 0.0) continue;
    int row = lp.add_row(RowKind::equity, country, -1, Relation::ge,
                         equity_fraction * energy);
    for (const Generator& g : network.generators) {
      if (network.buses[network.bus_index(g.bus)].country != country) continue;
      for (std::size_t t = 0; t < T; ++t) {
        lp.add_entry(row,
                     lp.find_var(VarKind::dispatch, g.id, static_cast<int>(t)),
                     network.snapshots.weights[t]);
      }
    }
  }
}

void add_line_volume_constraint(LinearProgram& lp, const Network& network,
                                double frac) {
  double existing_volume = 0.0;
  double extendable_volume = 0.0;
  for (const Line& l : network.lines) {
    existing_volume += l.existing_capacity * l.length;
    if (l.extendable) extendable_volume += l.existing_capacity * l.length;
  }
  int row = lp.add_row(RowKind::line_volume, "grid", -1, Relation::le,
                       frac * existing_volume + extendable_volume);
  for (const Line& l : network.lines) {
    if (!l.extendable) continue;
    lp.add_entry(row, lp.find_var(VarKind::line_capacity, l.id), l.length);
  }
}

LinearProgram build_problem(const Network& network,
                            const ScenarioConfig& scenario) {
  if (network.snapshots.size() == 0) {
    throw Error("EmptySnapshots", "the snapshot set is empty");
  }
  LinearProgram lp;
  add_variables(lp, network, scenario);
  add_balance_constraints(lp, network);
  add_generator_constraints(lp, network);
  add_flow_constraints(lp, network, cycle_basis(network));
  add_storage_constraints(lp, network, scenario);
  if (scenario.co2_cap) {
    add_emission_constraint(lp, network, *scenario.co2_cap);
  }
  if (scenario.equity_fraction > 0.0) {
    add_equity_constraints(lp, network, scenario.equity_fraction);
  }
  bool any_extendable_line = false;
  for (const Line& l : network.lines) {
    if (l.extendable) any_extendable_line = true;
  }
  if (any_extendable_line) {
    add_line_volume_constraint(lp, network, scenario.line_volume_expansion_frac);
  }
  lp.finalize();
  return lp;
}

}  // namespace storval
