#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "storval/errors.hpp"
#include "storval/ingest.hpp"

namespace fs = std::filesystem;

namespace storval {

namespace {

using csv::trim;
using CsvTable = csv::Table;

CsvTable read_csv(const fs::path& path) { return csv::read(path); }

// EUR/kW investment with FOM, lifetime and discount rate -> EUR/MW/yr.
double annualize_per_mw(double investment_per_kw, double fom_frac, double lifetime,
                        double discount_rate) {
  if (investment_per_kw == 0.0) return 0.0;
  return investment_per_kw * 1000.0 *
         (annuity_factor(discount_rate, lifetime) + fom_frac);
}

SnapshotSet parse_snapshots(const fs::path& path) {
  CsvTable t = read_csv(path);
  int c_ts = t.require("timestamp");
  int c_w = t.require("weight");
  SnapshotSet s;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    s.timestamps.push_back(t.cell(r, c_ts));
    s.weights.push_back(t.number(r, c_w));
  }
  return s;
}

std::vector<Bus> parse_buses(const fs::path& path) {
  CsvTable t = read_csv(path);
  int c_id = t.require("id");
  int c_country = t.require("country");
  int c_lat = t.col("lat");
  int c_lon = t.col("lon");
  std::vector<Bus> buses;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Bus b;
    b.id = t.cell(r, c_id);
    b.country = t.cell(r, c_country);
    if (c_lat >= 0 && c_lon >= 0) {
      auto lat = t.opt_number(r, c_lat);
      auto lon = t.opt_number(r, c_lon);
      if (lat && lon) b.coordinates = Coordinates{*lat, *lon};
    }
    buses.push_back(std::move(b));
  }
  return buses;
}

std::vector<Carrier> parse_carriers(const fs::path& path) {
  CsvTable t = read_csv(path);
  int c_name = t.require("name");
  int c_ef = t.require("emission_factor");
  std::vector<Carrier> carriers;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    carriers.push_back({t.cell(r, c_name), t.number(r, c_ef)});
  }
  return carriers;
}

std::vector<Generator> parse_generators(const fs::path& path,
                                        std::size_t num_snapshots) {
  CsvTable t = read_csv(path);
  int c_id = t.require("id");
  int c_bus = t.require("bus");
  int c_carrier = t.require("carrier");
  int c_existing = t.require("existing_mw");
  int c_ext = t.require("extendable");
  int c_min = t.require("min_mw");
  int c_max = t.require("max_mw");
  int c_inv = t.require("investment_eur_per_kw");
  int c_fom = t.require("fom_frac");
  int c_life = t.require("lifetime_years");
  int c_disc = t.require("discount_rate");
  int c_marg = t.require("marginal_cost_eur_per_mwh");

  std::vector<Generator> gens;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Generator g;
    g.id = t.cell(r, c_id);
    g.bus = t.cell(r, c_bus);
    g.carrier = t.cell(r, c_carrier);
    g.existing_capacity = t.number(r, c_existing);
    g.extendable = t.boolean(r, c_ext);
    g.capacity_min = t.number(r, c_min);
    g.capacity_max = t.number(r, c_max);
    g.capital_cost = annualize_per_mw(t.number(r, c_inv), t.number(r, c_fom),
                                      t.number(r, c_life), t.number(r, c_disc));
    g.marginal_cost = t.number(r, c_marg);
    g.availability.assign(num_snapshots, 1.0);
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<Line> parse_lines(const fs::path& path, std::size_t num_snapshots) {
  CsvTable t = read_csv(path);
  int c_id = t.require("id");
  int c_from = t.require("bus_from");
  int c_to = t.require("bus_to");
  int c_x = t.require("reactance");
  int c_len = t.require("length_km");
  int c_existing = t.require("existing_mw");
  int c_ext = t.require("extendable");
  int c_max = t.require("max_mw");
  int c_inv = t.require("investment_eur_per_kw");
  int c_fom = t.require("fom_frac");
  int c_life = t.require("lifetime_years");
  int c_disc = t.require("discount_rate");

  std::vector<Line> lines;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Line l;
    l.id = t.cell(r, c_id);
    l.bus_from = t.cell(r, c_from);
    l.bus_to = t.cell(r, c_to);
    l.reactance = t.number(r, c_x);
    l.length = t.number(r, c_len);
    l.existing_capacity = t.number(r, c_existing);
    l.extendable = t.boolean(r, c_ext);
    l.capacity_max = t.number(r, c_max);
    l.capital_cost = annualize_per_mw(t.number(r, c_inv), t.number(r, c_fom),
                                      t.number(r, c_life), t.number(r, c_disc));
    l.availability.assign(num_snapshots, 1.0);
    lines.push_back(std::move(l));
  }
  return lines;
}

Coupling parse_coupling(const CsvTable& t, int row, int col) {
  const std::string& s = t.cell(row, col);
  if (s == "fixed_ep") return Coupling::fixed_ep;
  if (s == "free") return Coupling::free;
  if (s == "hub_member") return Coupling::hub_member;
  t.fail(row, t.header[col], "unknown coupling '" + s + "'");
}

std::vector<StorageTech> parse_storage(const fs::path& path) {
  CsvTable t = read_csv(path);
  int c_id = t.require("id");
  int c_bus = t.require("bus");
  int c_coupling = t.require("coupling");
  int c_ratio = t.require("ep_ratio_hours");
  int c_hub = t.require("hub_id");
  int c_spill = t.require("spillage_allowed");
  int c_eps = t.require("epsilon_cost_eur_per_mwh");

  auto component = [&](const char* prefix, StorageComponentSpec::Kind kind,
                       bool store) {
    std::string p(prefix);
    struct Cols {
      int inv, fom, life, eff, disc;
      StorageComponentSpec::Kind kind;
    } c{};
    c.kind = kind;
    c.inv = t.require(p + (store ? "_investment_eur_per_kwh"
                                 : "_investment_eur_per_kw"));
    c.fom = t.require(p + "_fom_frac");
    c.life = t.require(p + "_lifetime_years");
    c.eff = store ? t.require(p + "_standing_efficiency")
                  : t.require(p + "_efficiency");
    c.disc = t.require(p + "_discount_rate");
    return c;
  };
  auto charger_cols = component("charger", StorageComponentSpec::Kind::charger, false);
  auto store_cols = component("store", StorageComponentSpec::Kind::store, true);
  auto discharger_cols =
      component("discharger", StorageComponentSpec::Kind::discharger, false);

  std::vector<StorageTech> techs;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    StorageTech s;
    s.id = t.cell(r, c_id);
    s.bus = t.cell(r, c_bus);
    s.coupling = parse_coupling(t, r, c_coupling);
    s.ep_ratio_hours = t.opt_number(r, c_ratio);
    if (!t.cell(r, c_hub).empty()) s.hub_id = t.cell(r, c_hub);
    s.spillage_allowed = t.boolean(r, c_spill);
    if (auto eps = t.opt_number(r, c_eps)) s.dispatch_epsilon_cost = *eps;

    auto fill = [&](const auto& cols, StorageComponentSpec& spec, bool store) {
      spec.kind = cols.kind;
      spec.investment = t.number(r, cols.inv);
      spec.fom_frac = t.number(r, cols.fom);
      spec.lifetime = t.number(r, cols.life);
      if (store) {
        spec.standing_efficiency = t.number(r, cols.eff);
      } else {
        spec.efficiency = t.number(r, cols.eff);
      }
      spec.discount_rate = t.number(r, cols.disc);
    };
    fill(charger_cols, s.charger, false);
    fill(store_cols, s.store, true);
    fill(discharger_cols, s.discharger, false);
    techs.push_back(std::move(s));
  }
  return techs;
}

// Wide series file: first column "timestamp", one column per entity. Returns
// the table, or an empty optional when the file is absent and optional.
std::optional<CsvTable> read_series(const fs::path& path, bool required) {
  if (!required && !fs::exists(path)) return std::nullopt;
  return read_csv(path);
}

void check_series_timestamps(const CsvTable& t, const SnapshotSet& snapshots) {
  int c_ts = t.require("timestamp");
  if (t.rows.size() != snapshots.size()) {
    throw Error("MalformedRow",
                t.file + ": " + std::to_string(t.rows.size()) +
                    " rows but " + std::to_string(snapshots.size()) +
                    " snapshots");
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.cell(r, c_ts) != snapshots.timestamps[r]) {
      t.fail(static_cast<int>(r), "timestamp",
             "expected '" + snapshots.timestamps[r] + "', found '" +
                 t.cell(r, c_ts) + "'");
    }
  }
}

std::vector<double> column_series(const CsvTable& t, int col) {
  std::vector<double> v(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) v[r] = t.number(r, col);
  return v;
}

}  // namespace

Network parse_network_bundle(const fs::path& directory) {
  Network net;
  net.snapshots = parse_snapshots(directory / "snapshots.csv");
  net.buses = parse_buses(directory / "buses.csv");
  net.carriers = parse_carriers(directory / "carriers.csv");
  net.generators = parse_generators(directory / "generators.csv", net.snapshots.size());
  net.lines = parse_lines(directory / "lines.csv", net.snapshots.size());
  net.storage_techs = parse_storage(directory / "storage.csv");

  {
    CsvTable loads = read_csv(directory / "loads.csv");
    check_series_timestamps(loads, net.snapshots);
    net.loads.assign(net.buses.size(),
                     std::vector<double>(net.snapshots.size(), 0.0));
    for (std::size_t c = 0; c < loads.header.size(); ++c) {
      if (loads.header[c] == "timestamp") continue;
      int bus = net.bus_index(loads.header[c]);
      if (bus < 0) {
        throw Error("MalformedRow",
                    loads.file + ":1:" + loads.header[c] + ": unknown bus");
      }
      net.loads[bus] = column_series(loads, static_cast<int>(c));
    }
  }

  if (auto avail = read_series(directory / "availability.csv", false)) {
    check_series_timestamps(*avail, net.snapshots);
    for (std::size_t c = 0; c < avail->header.size(); ++c) {
      if (avail->header[c] == "timestamp") continue;
      const std::string& id = avail->header[c];
      int g = net.generator_index(id);
      int l = net.line_index(id);
      if (g >= 0) {
        net.generators[g].availability = column_series(*avail, static_cast<int>(c));
      } else if (l >= 0) {
        net.lines[l].availability = column_series(*avail, static_cast<int>(c));
      } else {
        throw Error("MalformedRow",
                    avail->file + ":1:" + id + ": unknown generator or line");
      }
    }
  }

  if (auto inflow = read_series(directory / "inflow.csv", false)) {
    check_series_timestamps(*inflow, net.snapshots);
    for (std::size_t c = 0; c < inflow->header.size(); ++c) {
      if (inflow->header[c] == "timestamp") continue;
      int s = net.storage_index(inflow->header[c]);
      if (s < 0) {
        throw Error("MalformedRow",
                    inflow->file + ":1:" + inflow->header[c] + ": unknown storage");
      }
      net.storage_techs[s].inflow = column_series(*inflow, static_cast<int>(c));
    }
  }

  ValidationReport report = validate_network(net);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return net;
}

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("IoFailure", "cannot write " + path.string());
  out << content;
}

}  // namespace

void write_network_bundle(const Network& net, const fs::path& directory) {
  fs::create_directories(directory);

  {
    std::ostringstream s;
    s << "timestamp,weight\n";
    for (std::size_t t = 0; t < net.snapshots.size(); ++t) {
      s << net.snapshots.timestamps[t] << "," << fmt(net.snapshots.weights[t]) << "\n";
    }
    write_file(directory / "snapshots.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "id,country,lat,lon\n";
    for (const Bus& b : net.buses) {
      s << b.id << "," << b.country << ",";
      if (b.coordinates) s << fmt(b.coordinates->lat);
      s << ",";
      if (b.coordinates) s << fmt(b.coordinates->lon);
      s << "\n";
    }
    write_file(directory / "buses.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "name,emission_factor\n";
    for (const Carrier& c : net.carriers) {
      s << c.name << "," << fmt(c.emission_factor) << "\n";
    }
    write_file(directory / "carriers.csv", s.str());
  }
  {
    // capital_cost is already annualized, so emit it as a one-year zero-rate
    // investment: annuity_factor(0, 1) = 1 makes the reparse a fixed point
    std::ostringstream s;
    s << "id,bus,carrier,existing_mw,extendable,min_mw,max_mw,"
         "investment_eur_per_kw,fom_frac,lifetime_years,discount_rate,"
         "marginal_cost_eur_per_mwh\n";
    for (const Generator& g : net.generators) {
      s << g.id << "," << g.bus << "," << g.carrier << ","
        << fmt(g.existing_capacity) << "," << (g.extendable ? "true" : "false")
        << "," << fmt(g.capacity_min) << "," << fmt(g.capacity_max) << ","
        << fmt(g.capital_cost / 1000.0) << ",0,1,0," << fmt(g.marginal_cost)
        << "\n";
    }
    write_file(directory / "generators.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "id,bus_from,bus_to,reactance,length_km,existing_mw,extendable,max_mw,"
         "investment_eur_per_kw,fom_frac,lifetime_years,discount_rate\n";
    for (const Line& l : net.lines) {
      s << l.id << "," << l.bus_from << "," << l.bus_to << "," << fmt(l.reactance)
        << "," << fmt(l.length) << "," << fmt(l.existing_capacity) << ","
        << (l.extendable ? "true" : "false") << "," << fmt(l.capacity_max) << ","
        << fmt(l.capital_cost / 1000.0) << ",0,1,0\n";
    }
    write_file(directory / "lines.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "id,bus,coupling,ep_ratio_hours,hub_id,spillage_allowed,"
         "epsilon_cost_eur_per_mwh,"
         "charger_investment_eur_per_kw,charger_fom_frac,charger_lifetime_years,"
         "charger_efficiency,charger_discount_rate,"
         "store_investment_eur_per_kwh,store_fom_frac,store_lifetime_years,"
         "store_standing_efficiency,store_discount_rate,"
         "discharger_investment_eur_per_kw,discharger_fom_frac,"
         "discharger_lifetime_years,discharger_efficiency,discharger_discount_rate\n";
    for (const StorageTech& st : net.storage_techs) {
      const char* coupling = st.coupling == Coupling::fixed_ep   ? "fixed_ep"
                             : st.coupling == Coupling::free     ? "free"
                                                                 : "hub_member";
      s << st.id << "," << st.bus << "," << coupling << ",";
      if (st.ep_ratio_hours) s << fmt(*st.ep_ratio_hours);
      s << ",";
      if (st.hub_id) s << *st.hub_id;
      s << "," << (st.spillage_allowed ? "true" : "false") << ","
        << fmt(st.dispatch_epsilon_cost);
      auto comp = [&](const StorageComponentSpec& c, bool store) {
        s << "," << fmt(c.investment) << "," << fmt(c.fom_frac) << ","
          << fmt(c.lifetime) << ","
          << fmt(store ? c.standing_efficiency : c.efficiency) << ","
          << fmt(c.discount_rate);
      };
      comp(st.charger, false);
      comp(st.store, true);
      comp(st.discharger, false);
      s << "\n";
    }
    write_file(directory / "storage.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "timestamp";
    for (const Bus& b : net.buses) s << "," << b.id;
    s << "\n";
    for (std::size_t t = 0; t < net.snapshots.size(); ++t) {
      s << net.snapshots.timestamps[t];
      for (std::size_t b = 0; b < net.buses.size(); ++b) {
        s << "," << fmt(net.loads[b][t]);
      }
      s << "\n";
    }
    write_file(directory / "loads.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "timestamp";
    for (const Generator& g : net.generators) s << "," << g.id;
    for (const Line& l : net.lines) s << "," << l.id;
    s << "\n";
    for (std::size_t t = 0; t < net.snapshots.size(); ++t) {
      s << net.snapshots.timestamps[t];
      for (const Generator& g : net.generators) s << "," << fmt(g.availability[t]);
      for (const Line& l : net.lines) s << "," << fmt(l.availability[t]);
      s << "\n";
    }
    write_file(directory / "availability.csv", s.str());
  }
  {
    bool any = false;
    for (const StorageTech& st : net.storage_techs) {
      if (!st.inflow.empty()) any = true;
    }
    if (any) {
      std::ostringstream s;
      s << "timestamp";
      for (const StorageTech& st : net.storage_techs) {
        if (!st.inflow.empty()) s << "," << st.id;
      }
      s << "\n";
      for (std::size_t t = 0; t < net.snapshots.size(); ++t) {
        s << net.snapshots.timestamps[t];
        for (const StorageTech& st : net.storage_techs) {
          if (!st.inflow.empty()) s << "," << fmt(st.inflow[t]);
        }
        s << "\n";
      }
      write_file(directory / "inflow.csv", s.str());
    }
  }
}

namespace {

double positive_number(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error("MalformedKey", key + ": not a number: '" + value + "'");
  }
  return v;
}

}  // namespace

const char* to_string(StorageMode mode) {
  switch (mode) {
    case StorageMode::fixed_ep: return "fixed_ep";
    case StorageMode::variable_ep: return "variable_ep";
    case StorageMode::h2_hub: return "h2_hub";
  }
  return "?";
}

StorageMode parse_storage_mode(const std::string& text) {
  if (text == "fixed_ep") return StorageMode::fixed_ep;
  if (text == "variable_ep") return StorageMode::variable_ep;
  if (text == "h2_hub") return StorageMode::h2_hub;
  throw Error("MalformedKey", "storage_mode: unknown value '" + text + "'");
}

ScenarioConfig parse_scenario(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("MissingFile", file.filename().string());

  ScenarioConfig cfg;
  cfg.name = file.stem().string();

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = line;
    std::size_t hash = text.find('#');
    if (hash != std::string::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error("MalformedKey", file.filename().string() + ":" +
                                      std::to_string(line_no) +
                                      ": expected key=value, found '" + text + "'");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));

    auto range = [&](bool ok, const std::string& what) {
      if (!ok) throw Error("OutOfRange", key + " = " + value + ": " + what);
    };

    if (key == "name") {
      cfg.name = value;
    } else if (key == "storage_mode") {
      cfg.storage_mode = parse_storage_mode(value);
    } else if (key == "co2_cap") {
      double v = positive_number(key, value);
      range(v >= 0.0, "must be >= 0");
      cfg.co2_cap = v;
    } else if (key == "equity_fraction") {
      double v = positive_number(key, value);
      range(v >= 0.0 && v <= 1.0, "must be within [0,1]");
      cfg.equity_fraction = v;
    } else if (key == "line_volume_expansion_frac") {
      double v = positive_number(key, value);
      range(v >= 0.0, "must be >= 0");
      cfg.line_volume_expansion_frac = v;
    } else if (key == "epsilon_cost") {
      double v = positive_number(key, value);
      range(v >= 0.0, "must be >= 0");
      cfg.epsilon_cost = v;
    } else if (key == "threshold_mw") {
      double v = positive_number(key, value);
      range(v >= 0.0, "must be >= 0");
      cfg.threshold_mw = v;
    } else if (key == "min_flh") {
      double v = positive_number(key, value);
      range(v >= 0.0, "must be >= 0");
      cfg.min_flh = v;
    } else if (key == "max_iterations") {
      double v = positive_number(key, value);
      range(v >= 1.0 && v == std::floor(v), "must be a positive integer");
      cfg.solver.max_iterations = static_cast<long>(v);
    } else if (key == "feasibility_tol") {
      double v = positive_number(key, value);
      range(v > 0.0, "must be > 0");
      cfg.solver.feasibility_tol = v;
    } else if (key == "optimality_tol") {
      double v = positive_number(key, value);
      range(v > 0.0, "must be > 0");
      cfg.solver.optimality_tol = v;
    } else {
      throw Error("MalformedKey", "unknown key '" + key + "'");
    }
  }
  return cfg;
}

Network resample_snapshots(const Network& net, int step) {
  if (step < 1) throw Error("OutOfRange", "resample step must be >= 1");
  if (step == 1) return net;
  std::size_t n = net.snapshots.size();
  if (n % static_cast<std::size_t>(step) != 0) {
    throw Error("NotDivisible", std::to_string(n) + " snapshots not divisible by " +
                                    std::to_string(step));
  }
  std::size_t groups = n / static_cast<std::size_t>(step);

  Network out = net;
  out.snapshots.timestamps.clear();
  out.snapshots.weights.clear();
  std::vector<double> group_weight(groups, 0.0);
  for (std::size_t g = 0; g < groups; ++g) {
    double w = 0.0;
    for (int k = 0; k < step; ++k) w += net.snapshots.weights[g * step + k];
    group_weight[g] = w;
    out.snapshots.timestamps.push_back(net.snapshots.timestamps[g * step]);
    out.snapshots.weights.push_back(w);
  }

  // weight-averaged so that sum_t w_t * value_t is conserved exactly
  auto condense = [&](const std::vector<double>& series) {
    std::vector<double> v(groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      double acc = 0.0;
      for (int k = 0; k < step; ++k) {
        acc += net.snapshots.weights[g * step + k] * series[g * step + k];
      }
      v[g] = acc / group_weight[g];
    }
    return v;
  };

  for (std::size_t b = 0; b < out.loads.size(); ++b) {
    out.loads[b] = condense(net.loads[b]);
  }
  for (std::size_t g = 0; g < out.generators.size(); ++g) {
    out.generators[g].availability = condense(net.generators[g].availability);
  }
  for (std::size_t l = 0; l < out.lines.size(); ++l) {
    out.lines[l].availability = condense(net.lines[l].availability);
  }
  for (std::size_t s = 0; s < out.storage_techs.size(); ++s) {
    if (!net.storage_techs[s].inflow.empty()) {
      out.storage_techs[s].inflow = condense(net.storage_techs[s].inflow);
    }
  }
  return out;
}

}  // namespace storval
