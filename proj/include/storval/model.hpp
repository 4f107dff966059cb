#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace storval {

// Hours represented by each snapshot. Weights must be positive; their sum is
// the represented period length (normally 8760 h for a full year, but any
// positive total is accepted).
struct SnapshotSet {
  std::vector<std::string> timestamps;
  std::vector<double> weights;

  std::size_t size() const { return timestamps.size(); }
  double total_weight() const;
};

struct Coordinates {
  double lat = 0.0;
  double lon = 0.0;
};

struct Bus {
  std::string id;
  std::string country;
  std::optional<Coordinates> coordinates;
};

struct Carrier {
  std::string name;
  double emission_factor = 0.0;  // tCO2-eq per MWh(el)
};

struct Generator {
  std::string id;
  std::string bus;
  std::string carrier;
  double existing_capacity = 0.0;  // MW
  bool extendable = false;
  double capacity_min = 0.0;  // MW
  double capacity_max = 0.0;  // MW
  double capital_cost = 0.0;   // EUR/MW/yr, annualized at ingest
  double marginal_cost = 0.0;  // EUR/MWh
  std::vector<double> availability;  // per snapshot, in [0,1]

  // Variable-renewable if the availability profile is not identically 1.
  bool is_variable_renewable() const;
};

struct Line {
  std::string id;
  std::string bus_from;
  std::string bus_to;
  double reactance = 1.0;  // per unit, > 0
  double length = 1.0;     // km, used by the line-volume cap
  double existing_capacity = 0.0;  // MW
  bool extendable = false;
  double capacity_max = 0.0;  // MW
  double capital_cost = 0.0;  // EUR/MW/yr, annualized at ingest
  std::vector<double> availability;  // per snapshot, in (0,1]
};

struct StorageComponentSpec {
  enum class Kind { charger, store, discharger };

  Kind kind = Kind::store;
  double investment = 0.0;  // EUR/kW (charger, discharger) or EUR/kWh (store)
  double fom_frac = 0.0;    // fraction of investment per year
  double lifetime = 1.0;    // years
  double efficiency = 1.0;  // (0,1]; charge or discharge efficiency
  double standing_efficiency = 1.0;  // store only, per hour of standing
  double discount_rate = 0.0;
};

enum class Coupling { fixed_ep, free, hub_member };

struct StorageTech {
  std::string id;
  std::string bus;
  StorageComponentSpec charger;
  StorageComponentSpec store;
  StorageComponentSpec discharger;
  std::optional<double> ep_ratio_hours;  // energy / discharging power, hours
  Coupling coupling = Coupling::free;
  std::optional<std::string> hub_id;  // present iff coupling == hub_member
  std::vector<double> inflow;  // MW per snapshot; empty = no inflow
  bool spillage_allowed = true;
  double dispatch_epsilon_cost = 0.01;  // EUR/MWh on charge and discharge
};

struct Network {
  SnapshotSet snapshots;
  std::vector<Bus> buses;
  std::vector<Carrier> carriers;
  std::vector<Generator> generators;
  std::vector<Line> lines;
  std::vector<StorageTech> storage_techs;
  std::vector<std::vector<double>> loads;  // [bus index][snapshot], MW

  int bus_index(const std::string& id) const;
  int carrier_index(const std::string& name) const;
  int line_index(const std::string& id) const;
  int generator_index(const std::string& id) const;
  int storage_index(const std::string& id) const;
};

// rate / (1 - (1+rate)^-lifetime); the zero-rate limit is 1/lifetime.
// Converts an upfront investment into an equal annual payment.
double annuity_factor(double rate, double lifetime);

// investment * annuity_factor(discount_rate, lifetime) + investment * fom_frac
// in EUR per kW (or kWh for stores) per year.
double annualized_cost(const StorageComponentSpec& spec);

struct Violation {
  std::string entity;
  std::string rule;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Reports every invariant violation; never throws. A valid network yields an
// empty report.
ValidationReport validate_network(const Network& network);

class ValidationFailed : public std::runtime_error {
 public:
  explicit ValidationFailed(ValidationReport report);

  const ValidationReport& report() const noexcept { return report_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ValidationReport report_;
  std::string kind_ = "ValidationFailed";
};

}  // namespace storval
