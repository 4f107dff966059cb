#include <algorithm>
#include <cmath>
#include <map>

#include "storval/analysis.hpp"
#include "storval/errors.hpp"
#include "storval/formulation.hpp"

namespace storval {

double roundtrip_efficiency(const LcosAssumptions& a) {
  return a.charger.efficiency * a.discharger.efficiency;
}

double static_lcos(const LcosAssumptions& a) {
  if (a.yearly_full_load_hours <= 0.0) {
    throw Error("OutOfRange", "yearly_full_load_hours must be positive");
  }
  if (a.charger.efficiency <= 0.0 || a.discharger.efficiency <= 0.0) {
    throw Error("OutOfRange", "component efficiencies must be positive");
  }
  if (a.discharge_ratio_hours < 0.0 || a.electricity_price < 0.0) {
    throw Error("OutOfRange", "discharge ratio and price must be non-negative");
  }
  // per kW of discharger, with the charger sized equally
  double annual = annualized_cost(a.charger) +
                  annualized_cost(a.store) * a.discharge_ratio_hours +
                  annualized_cost(a.discharger);
  // charging energy in MWh per kW of discharger, bought at the flat price
  annual += a.electricity_price *
            (a.yearly_full_load_hours / roundtrip_efficiency(a)) / 1000.0;
  return annual / a.yearly_full_load_hours;
}

namespace {

double var_value(const LinearProgram& lp, const Solution& sol, VarKind kind,
                 const std::string& entity, int snapshot = -1) {
  int v = lp.find_var(kind, entity, snapshot);
  return v < 0 ? 0.0 : sol.primal[static_cast<std::size_t>(v)];
}

double var_cost(const LinearProgram& lp, VarKind kind,
                const std::string& entity) {
  int v = lp.find_var(kind, entity);
  return v < 0 ? 0.0 : lp.cost()[static_cast<std::size_t>(v)];
}

// The store owner serving a tech, resolved through the scenario's grouping.
const StoreOwner& owner_of(const std::vector<StoreOwner>& owners, int tech) {
  for (const StoreOwner& o : owners) {
    for (int m : o.members) {
      if (m == tech) return o;
    }
  }
  throw Error("Internal", "storage tech without a store owner");
}

double discharged_energy(const LinearProgram& lp, const Solution& sol,
                         const Network& net, const std::string& tech_id) {
  double acc = 0.0;
  for (std::size_t t = 0; t < net.snapshots.size(); ++t) {
    acc += net.snapshots.weights[t] *
           var_value(lp, sol, VarKind::discharge, tech_id, static_cast<int>(t));
  }
  return acc;
}

}  // namespace

ModelledLcos modelled_lcos(const LinearProgram& lp, const Solution& solution,
                           const Network& network, StorageMode mode,
                           const std::string& tech_id) {
  int tech = network.storage_index(tech_id);
  if (tech < 0) throw Error("UnknownComponent", "storage tech '" + tech_id + "'");
  const StorageTech& spec = network.storage_techs[tech];

  ModelledLcos out;
  out.discharged_mwh = discharged_energy(lp, solution, network, tech_id);
  if (out.discharged_mwh <= 1e-9) {
    throw Error("ZeroDischarge",
                "tech '" + tech_id + "' discharges no energy; bus filtered");
  }

  std::vector<StoreOwner> owners = store_owners(network, mode);
  const StoreOwner& owner = owner_of(owners, tech);
  double store_capacity =
      var_value(lp, solution, VarKind::store_capacity, owner.entity);
  double store_share = 1.0;
  if (owner.members.size() > 1) {
    double total = 0.0;
    for (int m : owner.members) {
      total += discharged_energy(lp, solution, network,
                                 network.storage_techs[m].id);
    }
    store_share = out.discharged_mwh / total;
  }

  double charger = var_value(lp, solution, VarKind::charger_capacity, tech_id);
  double discharger =
      var_value(lp, solution, VarKind::discharger_capacity, tech_id);
  out.capital_cost =
      var_cost(lp, VarKind::charger_capacity, tech_id) * charger +
      var_cost(lp, VarKind::discharger_capacity, tech_id) * discharger +
      var_cost(lp, VarKind::store_capacity, owner.entity) * store_capacity *
          store_share;

  int bus = network.bus_index(spec.bus);
  for (std::size_t t = 0; t < network.snapshots.size(); ++t) {
    int row = lp.find_row(RowKind::balance, network.buses[bus].id,
                          static_cast<int>(t));
    // the raw dual already carries the snapshot weight: EUR per MW shifted
    out.charging_cost +=
        solution.dual[static_cast<std::size_t>(row)] *
        var_value(lp, solution, VarKind::charge, tech_id, static_cast<int>(t));
  }

  out.full_load_hours = out.discharged_mwh / discharger;
  out.ep_ratio_hours = store_capacity / discharger;
  out.lcos =
      (out.capital_cost + out.charging_cost) / out.discharged_mwh / 1000.0;
  return out;
}

MpiTable market_potential(const LinearProgram& lp, const Solution& solution,
                          const Network& network, StorageMode mode,
                          StorageComponentSpec::Kind kind,
                          const std::optional<std::string>& country) {
  auto in_region = [&](const std::string& bus_id) {
    if (!country) return true;
    return network.buses[network.bus_index(bus_id)].country == *country;
  };

  MpiTable table;
  auto push = [&](const std::string& component, const std::string& bus,
                  double value) {
    if (!in_region(bus)) return;
    table.rows.push_back({component, kind, bus, std::max(0.0, value)});
    table.aggregate += table.rows.back().expanded_capacity;
  };

  if (kind == StorageComponentSpec::Kind::store) {
    for (const StoreOwner& owner : store_owners(network, mode)) {
      push(owner.entity, network.storage_techs[owner.spec_tech].bus,
           var_value(lp, solution, VarKind::store_capacity, owner.entity));
    }
    return table;
  }
  VarKind var = kind == StorageComponentSpec::Kind::charger
                    ? VarKind::charger_capacity
                    : VarKind::discharger_capacity;
  for (const StorageTech& tech : network.storage_techs) {
    push(tech.id, tech.bus, var_value(lp, solution, var, tech.id));
  }
  return table;
}

std::vector<CriteriaVerdict> evaluate_criteria(
    const std::vector<ScenarioMpi>& tables, double threshold_mw,
    const std::vector<std::pair<std::string, std::string>>& comparisons) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> index;
  for (const ScenarioMpi& s : tables) {
    for (const MpiRow& row : s.table.rows) {
      if (index.try_emplace(row.component, order.size()).second) {
        order.push_back(row.component);
      }
    }
  }

  std::vector<CriteriaVerdict> verdicts(order.size());
  for (std::size_t c = 0; c < order.size(); ++c) {
    verdicts[c].component = order[c];
    verdicts[c].mpi.assign(tables.size(), 0.0);
  }
  for (std::size_t s = 0; s < tables.size(); ++s) {
    for (const MpiRow& row : tables[s].table.rows) {
      verdicts[index[row.component]].mpi[s] += row.expanded_capacity;
    }
  }
  for (CriteriaVerdict& v : verdicts) {
    for (double m : v.mpi) {
      if (m > 0.0) v.valuable = true;
      if (m > threshold_mw) v.threshold_pass = true;
    }
  }

  auto best = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) {
      throw Error("UnknownComponent", "comparison names '" + name +
                                          "', absent from every table");
    }
    const std::vector<double>& mpi = verdicts[it->second].mpi;
    return *std::max_element(mpi.begin(), mpi.end());
  };
  for (const auto& [a, b] : comparisons) {
    double ma = best(a), mb = best(b);
    if (ma > mb) verdicts[index[a]].outranks.push_back(b);
    if (mb > ma) verdicts[index[b]].outranks.push_back(a);
  }
  return verdicts;
}

namespace {

double storage_capital(const LinearProgram& lp, const Solution& sol) {
  double acc = 0.0;
  for (int v = 0; v < lp.num_vars(); ++v) {
    VarKind k = lp.var_refs()[static_cast<std::size_t>(v)].kind;
    if (k == VarKind::charger_capacity || k == VarKind::discharger_capacity ||
        k == VarKind::store_capacity) {
      acc += lp.cost()[static_cast<std::size_t>(v)] *
             sol.primal[static_cast<std::size_t>(v)];
    }
  }
  return acc;
}

std::vector<std::string> capacity_entities(const LinearProgram& lp) {
  std::vector<std::string> out;
  for (const VarRef& r : lp.var_refs()) {
    if (r.kind == VarKind::generator_capacity ||
        r.kind == VarKind::line_capacity) {
      out.push_back(r.entity);
    }
  }
  return out;
}

}  // namespace

WholeSystemBenefit whole_system_benefit(const LinearProgram& lp_without,
                                        const Solution& without,
                                        const LinearProgram& lp_with,
                                        const Solution& with) {
  if (without.status != SolveStatus::optimal ||
      with.status != SolveStatus::optimal) {
    throw Error("NotOptimal", "whole-system benefit needs two optimal runs");
  }
  if (capacity_entities(lp_without) != capacity_entities(lp_with)) {
    throw Error("MismatchedNetworks",
                "the two runs use different generator or line sets");
  }
  WholeSystemBenefit wsb;
  wsb.net = without.objective - with.objective;
  wsb.gross = wsb.net + storage_capital(lp_with, with);
  return wsb;
}

KpiReport kpis(const LinearProgram& lp, const Solution& solution,
               const Network& network, StorageMode mode) {
  KpiReport report;
  report.total_system_cost = solution.objective;

  const std::size_t T = network.snapshots.size();
  for (std::size_t b = 0; b < network.buses.size(); ++b) {
    for (std::size_t t = 0; t < T; ++t) {
      report.annual_demand_mwh +=
          network.snapshots.weights[t] * network.loads[b][t];
    }
  }
  if (report.annual_demand_mwh > 0.0) {
    // EUR/MWh to ct/kWh
    report.relative_investment_ct_per_kwh =
        solution.objective / report.annual_demand_mwh * 0.1;
  }

  double curtailed = 0.0;
  for (const Generator& g : network.generators) {
    if (!g.is_variable_renewable()) continue;
    double cap = var_value(lp, solution, VarKind::generator_capacity, g.id);
    for (std::size_t t = 0; t < T; ++t) {
      double idle = g.availability[t] * cap -
                    var_value(lp, solution, VarKind::dispatch, g.id,
                              static_cast<int>(t));
      curtailed += network.snapshots.weights[t] * std::max(0.0, idle);
    }
  }
  if (report.annual_demand_mwh > 0.0) {
    report.curtailment_fraction = curtailed / report.annual_demand_mwh;
  }

  std::vector<StoreOwner> owners = store_owners(network, mode);
  for (std::size_t s = 0; s < network.storage_techs.size(); ++s) {
    const StorageTech& tech = network.storage_techs[s];
    StorageKpi kpi;
    kpi.tech = tech.id;
    kpi.charger_mw =
        var_value(lp, solution, VarKind::charger_capacity, tech.id);
    kpi.discharger_mw =
        var_value(lp, solution, VarKind::discharger_capacity, tech.id);
    kpi.store_mwh =
        var_value(lp, solution, VarKind::store_capacity,
                  owner_of(owners, static_cast<int>(s)).entity);
    if (kpi.discharger_mw > 1e-9) {
      kpi.ep_ratio_hours = kpi.store_mwh / kpi.discharger_mw;
      kpi.full_load_hours =
          discharged_energy(lp, solution, network, tech.id) / kpi.discharger_mw;
    }
    report.storage.push_back(std::move(kpi));
  }
  return report;
}

std::vector<std::vector<double>> extract_nodal_prices(const LinearProgram& lp,
                                                      const Solution& solution,
                                                      const Network& network) {
  const std::size_t T = network.snapshots.size();
  std::vector<std::vector<double>> prices(network.buses.size(),
                                          std::vector<double>(T, 0.0));
  for (std::size_t b = 0; b < network.buses.size(); ++b) {
    for (std::size_t t = 0; t < T; ++t) {
      int row = lp.find_row(RowKind::balance, network.buses[b].id,
                            static_cast<int>(t));
      prices[b][t] = solution.dual[static_cast<std::size_t>(row)] /
                     network.snapshots.weights[t];
    }
  }
  return prices;
}

bool passes_report_filter(double mpi_mw, double full_load_hours,
                          double threshold_mw, double min_flh) {
  return mpi_mw >= threshold_mw && full_load_hours >= min_flh;
}

}  // namespace storval
