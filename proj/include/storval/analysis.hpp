#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "storval/lp.hpp"
#include "storval/model.hpp"
#include "storval/scenario.hpp"
#include "storval/solver.hpp"

namespace storval {

// Inputs for the static levelized-cost figure: a notional 1 kW discharger
// with an equally sized charger and discharge_ratio_hours of store behind it,
// discharging yearly_full_load_hours per year at the given charging price.
struct LcosAssumptions {
  double discharge_ratio_hours = 0.0;   // store energy per discharger power, h
  double electricity_price = 0.0;       // EUR/MWh paid while charging
  double yearly_full_load_hours = 0.0;  // hours of full discharge per year
  StorageComponentSpec charger;
  StorageComponentSpec store;
  StorageComponentSpec discharger;
};

// Product of charger and discharger efficiency.
double roundtrip_efficiency(const LcosAssumptions& a);

// EUR per kWh discharged: annualized component capital plus the cost of
// charging energy, divided by the yearly discharged energy. Throws OutOfRange
// on non-positive full-load hours or efficiencies, or negative costs.
double static_lcos(const LcosAssumptions& a);

struct ModelledLcos {
  double lcos = 0.0;             // EUR per kWh discharged
  double full_load_hours = 0.0;  // discharged energy over discharger capacity
  double ep_ratio_hours = 0.0;   // store energy capacity over discharger power
  double discharged_mwh = 0.0;
  double capital_cost = 0.0;     // EUR/yr on the optimized capacities
  double charging_cost = 0.0;    // EUR/yr of charging energy at nodal prices
};

// Realized cost of the tech's discharged energy in an optimal solution:
// annualized capital + FOM on the optimized component capacities plus the
// charging energy valued at the bus's nodal prices, over discharged energy.
// A hub member is billed the shared store in proportion to its share of the
// hub's discharged energy, and its EP ratio reports the full shared store.
// Throws ZeroDischarge when the tech discharges (numerically) nothing.
ModelledLcos modelled_lcos(const LinearProgram& lp, const Solution& solution,
                           const Network& network, StorageMode mode,
                           const std::string& tech_id);

struct MpiRow {
  std::string component;  // tech id; the hub id for shared stores
  StorageComponentSpec::Kind kind = StorageComponentSpec::Kind::charger;
  std::string bus;
  double expanded_capacity = 0.0;  // MW, or MWh for stores
};

struct MpiTable {
  std::vector<MpiRow> rows;
  double aggregate = 0.0;  // exact sum over rows
};

// Market potential per storage component of the given kind: the optimized
// capacity beyond existing (storage is greenfield, so the full optimized
// capacity), optionally restricted to buses of one country.
MpiTable market_potential(const LinearProgram& lp, const Solution& solution,
                          const Network& network, StorageMode mode,
                          StorageComponentSpec::Kind kind,
                          const std::optional<std::string>& country = {});

// One scenario's MPI table, labelled for criteria evaluation.
struct ScenarioMpi {
  std::string scenario;
  MpiTable table;
};

struct CriteriaVerdict {
  std::string component;
  std::vector<double> mpi;      // aligned with the input scenario order
  bool valuable = false;        // MPI > 0 in at least one scenario
  bool threshold_pass = false;  // MPI > threshold in at least one scenario
  std::vector<std::string> outranks;  // beaten opponents from comparisons
};

// Applies the decision rules over per-scenario MPI totals per component:
// zero-everywhere means not valuable, the threshold rule, and bigger-is-
// better pairwise ranking by the component's best scenario MPI. Throws
// UnknownComponent when a comparison names a component absent from every
// table.
std::vector<CriteriaVerdict> evaluate_criteria(
    const std::vector<ScenarioMpi>& tables, double threshold_mw,
    const std::vector<std::pair<std::string, std::string>>& comparisons = {});

struct WholeSystemBenefit {
  double net = 0.0;    // EUR/yr: cost without minus cost with storage
  double gross = 0.0;  // net plus the storage capital spent in the with-run
};

// Cost difference between two optimal runs on the same network, without and
// with storage. Throws MismatchedNetworks when the generator or line sets
// differ, NotOptimal when either run is not optimal.
WholeSystemBenefit whole_system_benefit(const LinearProgram& lp_without,
                                        const Solution& without,
                                        const LinearProgram& lp_with,
                                        const Solution& with);

struct StorageKpi {
  std::string tech;
  double charger_mw = 0.0;
  double discharger_mw = 0.0;
  double store_mwh = 0.0;       // the shared store for hub members
  double ep_ratio_hours = 0.0;  // 0 when the discharger is not built
  double full_load_hours = 0.0;
};

struct KpiReport {
  double total_system_cost = 0.0;  // EUR/yr, the objective
  // objective per unit of served energy; absent for zero-demand networks
  std::optional<double> relative_investment_ct_per_kwh;
  double curtailment_fraction = 0.0;  // spilled renewable energy over demand
  double annual_demand_mwh = 0.0;
  std::vector<StorageKpi> storage;
};

KpiReport kpis(const LinearProgram& lp, const Solution& solution,
               const Network& network, StorageMode mode);

// Balance-row duals per bus and snapshot, normalized by the snapshot weight:
// EUR per MWh of extra demand at that bus and time.
std::vector<std::vector<double>> extract_nodal_prices(const LinearProgram& lp,
                                                      const Solution& solution,
                                                      const Network& network);

// Report filter: rows below the market-potential threshold or below the
// minimum full-load hours are removed.
bool passes_report_filter(double mpi_mw, double full_load_hours,
                          double threshold_mw, double min_flh);

}  // namespace storval
