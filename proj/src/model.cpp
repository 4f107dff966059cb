#include "storval/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "storval/errors.hpp"

namespace storval {

double SnapshotSet::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool Generator::is_variable_renewable() const {
  for (double a : availability) {
    if (a != 1.0) return true;
  }
  return false;
}

namespace {

template <typename T>
int index_of(const std::vector<T>& items, const std::string& id,
             const std::string& (*key)(const T&)) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (key(items[i]) == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

int Network::bus_index(const std::string& id) const {
  return index_of<Bus>(buses, id, +[](const Bus& b) -> const std::string& { return b.id; });
}

int Network::carrier_index(const std::string& name) const {
  return index_of<Carrier>(carriers, name,
                           +[](const Carrier& c) -> const std::string& { return c.name; });
}

int Network::line_index(const std::string& id) const {
  return index_of<Line>(lines, id, +[](const Line& l) -> const std::string& { return l.id; });
}

int Network::generator_index(const std::string& id) const {
  return index_of<Generator>(generators, id,
                             +[](const Generator& g) -> const std::string& { return g.id; });
}

int Network::storage_index(const std::string& id) const {
  return index_of<StorageTech>(storage_techs, id,
                               +[](const StorageTech& s) -> const std::string& { return s.id; });
}

double annuity_factor(double rate, double lifetime) {
  if (!std::isfinite(rate) || !std::isfinite(lifetime)) {
    throw Error("OutOfRange", "annuity_factor: non-finite input");
  }
  if (lifetime < 1.0) {
    throw Error("OutOfRange", "annuity_factor: lifetime must be >= 1 year");
  }
  if (rate < 0.0) {
    throw Error("OutOfRange", "annuity_factor: rate must be >= 0");
  }
  if (rate == 0.0) return 1.0 / lifetime;
  return rate / (1.0 - std::pow(1.0 + rate, -lifetime));
}

double annualized_cost(const StorageComponentSpec& spec) {
  return spec.investment * annuity_factor(spec.discount_rate, spec.lifetime) +
         spec.investment * spec.fom_frac;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << v.entity << ": " << v.rule;
    if (!v.detail.empty()) out << " (" << v.detail << ")";
    out << "\n";
  }
  return out.str();
}

ValidationFailed::ValidationFailed(ValidationReport report)
    : std::runtime_error("network validation failed:\n" + report.to_string()),
      report_(std::move(report)) {}

namespace {

class Checker {
 public:
  explicit Checker(const Network& net) : net_(net) {}

  ValidationReport run() {
    check_snapshots();
    check_buses();
    check_carriers();
    check_generators();
    check_lines();
    check_storage();
    check_loads();
    check_components();
    return std::move(report_);
  }

 private:
  void add(const std::string& entity, const std::string& rule, std::string detail = "") {
    report_.violations.push_back({entity, rule, std::move(detail)});
  }

  void check_snapshots() {
    if (net_.snapshots.timestamps.size() != net_.snapshots.weights.size()) {
      add("snapshots", "timestamp/weight length mismatch");
      return;
    }
    for (std::size_t t = 0; t < net_.snapshots.weights.size(); ++t) {
      if (!(net_.snapshots.weights[t] > 0.0)) {
        add("snapshots", "weight not positive", net_.snapshots.timestamps[t]);
      }
    }
  }

  void check_buses() {
    std::set<std::string> seen;
    for (const Bus& b : net_.buses) {
      if (!seen.insert(b.id).second) add(b.id, "duplicate bus id");
    }
  }

  void check_carriers() {
    std::set<std::string> seen;
    for (const Carrier& c : net_.carriers) {
      if (!seen.insert(c.name).second) add(c.name, "duplicate carrier name");
      if (c.emission_factor < 0.0) add(c.name, "emission factor negative");
    }
  }

  void check_series(const std::string& entity, const std::vector<double>& series,
                    double lo, double hi, const char* rule) {
    if (series.size() != net_.snapshots.size()) {
      add(entity, "series length mismatch", rule);
      return;
    }
    for (double v : series) {
      if (!(v >= lo && v <= hi)) {
        add(entity, rule);
        break;
      }
    }
  }

  void check_generators() {
    std::set<std::string> seen;
    for (const Generator& g : net_.generators) {
      if (!seen.insert(g.id).second) add(g.id, "duplicate generator id");
      if (net_.bus_index(g.bus) < 0) add(g.id, "unknown bus", g.bus);
      if (net_.carrier_index(g.carrier) < 0) add(g.id, "unknown carrier", g.carrier);
      if (!(g.capacity_min >= 0.0 && g.capacity_min <= g.capacity_max)) {
        add(g.id, "capacity bounds out of order");
      }
      if (g.existing_capacity < g.capacity_min || g.existing_capacity > g.capacity_max) {
        add(g.id, "existing capacity outside [min, max]");
      }
      check_series(g.id, g.availability, 0.0, 1.0, "availability out of [0,1]");
      if (g.capital_cost < 0.0) add(g.id, "capital cost negative");
    }
  }

  void check_lines() {
    std::set<std::string> seen;
    for (const Line& l : net_.lines) {
      if (!seen.insert(l.id).second) add(l.id, "duplicate line id");
      if (net_.bus_index(l.bus_from) < 0) add(l.id, "unknown bus", l.bus_from);
      if (net_.bus_index(l.bus_to) < 0) add(l.id, "unknown bus", l.bus_to);
      if (l.bus_from == l.bus_to) add(l.id, "line endpoints identical");
      if (!(l.reactance > 0.0)) add(l.id, "reactance not positive");
      if (l.existing_capacity < 0.0) add(l.id, "existing capacity negative");
      if (l.capacity_max < l.existing_capacity) {
        add(l.id, "capacity max below existing");
      }
      if (l.length < 0.0) add(l.id, "length negative");
      check_series(l.id, l.availability, 0.0, 1.0, "availability out of (0,1]");
    }
  }

  void check_spec(const std::string& entity, const StorageComponentSpec& spec) {
    if (spec.investment < 0.0) add(entity, "investment negative");
    if (spec.lifetime < 1.0) add(entity, "lifetime below one year");
    if (!(spec.efficiency > 0.0 && spec.efficiency <= 1.0)) {
      add(entity, "efficiency out of (0,1]");
    }
    if (!(spec.fom_frac >= 0.0 && spec.fom_frac < 1.0)) add(entity, "fom out of [0,1)");
    if (!(spec.standing_efficiency > 0.0 && spec.standing_efficiency <= 1.0)) {
      add(entity, "standing efficiency out of (0,1]");
    }
    if (spec.discount_rate < 0.0) add(entity, "discount rate negative");
  }

  void check_storage() {
    std::set<std::string> seen;
    for (const StorageTech& s : net_.storage_techs) {
      if (!seen.insert(s.id).second) add(s.id, "duplicate storage id");
      if (net_.bus_index(s.bus) < 0) add(s.id, "unknown bus", s.bus);
      check_spec(s.id + ".charger", s.charger);
      check_spec(s.id + ".store", s.store);
      check_spec(s.id + ".discharger", s.discharger);
      if (s.coupling == Coupling::fixed_ep &&
          (!s.ep_ratio_hours || *s.ep_ratio_hours <= 0.0)) {
        add(s.id, "fixed_ep coupling requires positive ep_ratio_hours");
      }
      if ((s.coupling == Coupling::hub_member) != s.hub_id.has_value()) {
        add(s.id, "hub_id present iff coupling is hub_member");
      }
      if (!s.inflow.empty()) {
        check_series(s.id, s.inflow, 0.0, std::numeric_limits<double>::infinity(),
                     "inflow negative or length mismatch");
      }
      if (s.dispatch_epsilon_cost < 0.0) add(s.id, "epsilon cost negative");
    }
  }

  void check_loads() {
    if (net_.loads.size() != net_.buses.size()) {
      add("loads", "one load series required per bus");
      return;
    }
    for (std::size_t b = 0; b < net_.loads.size(); ++b) {
      check_series(net_.buses[b].id, net_.loads[b], 0.0,
                   std::numeric_limits<double>::infinity(),
                   "load negative or length mismatch");
    }
  }

  // Components with load must have a path to some generator; a fully isolated
  // component is only acceptable when load-free.
  void check_components() {
    const int n = static_cast<int>(net_.buses.size());
    if (n == 0) return;
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int start = 0; start < n; ++start) {
      if (comp[start] >= 0) continue;
      std::vector<int> stack{start};
      comp[start] = ncomp;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const Line& l : net_.lines) {
          int a = net_.bus_index(l.bus_from);
          int b = net_.bus_index(l.bus_to);
          if (a < 0 || b < 0) continue;
          int other = -1;
          if (a == u) other = b;
          if (b == u) other = a;
          if (other >= 0 && comp[other] < 0) {
            comp[other] = ncomp;
            stack.push_back(other);
          }
        }
      }
      ++ncomp;
    }
    std::vector<bool> has_gen(ncomp, false);
    std::vector<bool> has_load(ncomp, false);
    for (const Generator& g : net_.generators) {
      int b = net_.bus_index(g.bus);
      if (b >= 0) has_gen[comp[b]] = true;
    }
    if (net_.loads.size() == net_.buses.size()) {
      for (int b = 0; b < n; ++b) {
        for (double d : net_.loads[b]) {
          if (d > 0.0) {
            has_load[comp[b]] = true;
            break;
          }
        }
      }
    }
    for (int c = 0; c < ncomp; ++c) {
      if (has_load[c] && !has_gen[c]) {
        for (int b = 0; b < n; ++b) {
          if (comp[b] == c) {
            add(net_.buses[b].id, "component has load but no generator");
            break;
          }
        }
      }
    }
  }

  const Network& net_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_network(const Network& network) {
  return Checker(network).run();
}

}  // namespace storval
