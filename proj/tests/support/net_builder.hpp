#pragma once

// Compact in-memory network construction for tests: component costs are given
// as one-year zero-rate investments so the annualized figures equal the raw
// numbers.

#include <optional>
#include <string>
#include <vector>

#include "storval/formulation.hpp"
#include "storval/model.hpp"
#include "storval/scenario.hpp"
#include "storval/solver.hpp"

namespace netb {

inline storval::Network base_net(std::vector<double> weights) {
  storval::Network net;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    net.snapshots.timestamps.push_back("t" + std::to_string(t));
  }
  net.snapshots.weights = std::move(weights);
  return net;
}

inline void add_bus(storval::Network& net, const std::string& id,
                    const std::string& country) {
  net.buses.push_back({id, country, std::nullopt});
  net.loads.push_back(std::vector<double>(net.snapshots.size(), 0.0));
}

inline void add_gen(storval::Network& net, const std::string& id,
                    const std::string& bus, const std::string& carrier,
                    double existing, bool extendable, double cap_max,
                    double capital, double marginal,
                    std::vector<double> avail = {}) {
  storval::Generator g;
  g.id = id;
  g.bus = bus;
  g.carrier = carrier;
  g.existing_capacity = existing;
  g.extendable = extendable;
  g.capacity_min = 0.0;
  g.capacity_max = cap_max;
  g.capital_cost = capital;
  g.marginal_cost = marginal;
  g.availability = avail.empty()
                       ? std::vector<double>(net.snapshots.size(), 1.0)
                       : std::move(avail);
  net.generators.push_back(std::move(g));
}

inline void add_line(storval::Network& net, const std::string& id,
                     const std::string& from, const std::string& to, double x,
                     double len, double existing, bool extendable,
                     double cap_max, double capital) {
  storval::Line l;
  l.id = id;
  l.bus_from = from;
  l.bus_to = to;
  l.reactance = x;
  l.length = len;
  l.existing_capacity = existing;
  l.extendable = extendable;
  l.capacity_max = cap_max;
  l.capital_cost = capital;
  l.availability.assign(net.snapshots.size(), 1.0);
  net.lines.push_back(std::move(l));
}

inline storval::StorageComponentSpec comp(storval::StorageComponentSpec::Kind kind,
                                          double inv_per_kw, double eff) {
  storval::StorageComponentSpec s;
  s.kind = kind;
  s.investment = inv_per_kw;
  s.lifetime = 1.0;
  s.discount_rate = 0.0;
  if (kind == storval::StorageComponentSpec::Kind::store) {
    s.standing_efficiency = eff;
  } else {
    s.efficiency = eff;
  }
  return s;
}

inline void add_storage(storval::Network& net, const std::string& id,
                        const std::string& bus, storval::Coupling coupling,
                        std::optional<double> ep,
                        std::optional<std::string> hub, double inv_c = 0.02,
                        double inv_s = 0.01, double inv_d = 0.02,
                        double eta_c = 1.0, double eta_d = 1.0,
                        double standing = 1.0) {
  using Kind = storval::StorageComponentSpec::Kind;
  storval::StorageTech s;
  s.id = id;
  s.bus = bus;
  s.coupling = coupling;
  s.ep_ratio_hours = ep;
  s.hub_id = std::move(hub);
  s.charger = comp(Kind::charger, inv_c, eta_c);
  s.store = comp(Kind::store, inv_s, standing);
  s.discharger = comp(Kind::discharger, inv_d, eta_d);
  net.storage_techs.push_back(std::move(s));
}

inline storval::ScenarioConfig scenario(storval::StorageMode mode) {
  storval::ScenarioConfig cfg;
  cfg.storage_mode = mode;
  cfg.equity_fraction = 0.0;
  return cfg;
}

inline double primal(const storval::LinearProgram& lp,
                     const storval::Solution& sol, storval::VarKind kind,
                     const std::string& entity, int snapshot = -1) {
  int v = lp.find_var(kind, entity, snapshot);
  return v < 0 ? 0.0 : sol.primal[static_cast<std::size_t>(v)];
}

}  // namespace netb
