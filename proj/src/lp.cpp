#include "storval/lp.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "storval/errors.hpp"

namespace storval {

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::generator_capacity: return "generator_capacity";
    case VarKind::line_capacity: return "line_capacity";
    case VarKind::charger_capacity: return "charger_capacity";
    case VarKind::discharger_capacity: return "discharger_capacity";
    case VarKind::store_capacity: return "store_capacity";
    case VarKind::dispatch: return "dispatch";
    case VarKind::flow: return "flow";
    case VarKind::charge: return "charge";
    case VarKind::discharge: return "discharge";
    case VarKind::level: return "level";
    case VarKind::spill: return "spill";
  }
  return "?";
}

const char* to_string(RowKind kind) {
  switch (kind) {
    case RowKind::balance: return "balance";
    case RowKind::availability: return "availability";
    case RowKind::flow_upper: return "flow_upper";
    case RowKind::flow_lower: return "flow_lower";
    case RowKind::kvl: return "kvl";
    case RowKind::charge_limit: return "charge_limit";
    case RowKind::discharge_limit: return "discharge_limit";
    case RowKind::level_limit: return "level_limit";
    case RowKind::storage_balance: return "storage_balance";
    case RowKind::charger_discharger_tie: return "charger_discharger_tie";
    case RowKind::store_ratio_tie: return "store_ratio_tie";
    case RowKind::emission: return "emission";
    case RowKind::equity: return "equity";
    case RowKind::line_volume: return "line_volume";
  }
  return "?";
}

int LinearProgram::add_variable(VarKind kind, std::string entity, int snapshot,
                                double lower, double upper, double cost) {
  if (lower > upper) {
    throw Error("InfeasibleBounds",
                "variable " + std::string(to_string(kind)) + ":" + entity +
                    " has lower > upper");
  }
  int idx = num_vars();
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  var_refs_.push_back({kind, std::move(entity), snapshot});
  const VarRef& ref = var_refs_.back();
  auto [it, inserted] =
      var_lookup_.emplace(Key{static_cast<int>(kind), ref.entity, snapshot}, idx);
  if (!inserted) {
    throw Error("DuplicateVariable", "variable registered twice: " + var_name(idx));
  }
  return idx;
}

int LinearProgram::add_row(RowKind kind, std::string entity, int snapshot,
                           Relation rel, double rhs) {
  int idx = num_rows();
  rhs_.push_back(rhs);
  relations_.push_back(rel);
  row_refs_.push_back({kind, std::move(entity), snapshot});
  const RowRef& ref = row_refs_.back();
  auto [it, inserted] =
      row_lookup_.emplace(Key{static_cast<int>(kind), ref.entity, snapshot}, idx);
  if (!inserted) {
    throw Error("DuplicateRow", "row registered twice: " + row_name(idx));
  }
  return idx;
}

void LinearProgram::add_entry(int row, int col, double value) {
  if (value == 0.0) return;
  triplets_.push_back({row, col, value});
}

void LinearProgram::finalize() {
  std::stable_sort(triplets_.begin(), triplets_.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return std::tie(a.col, a.row) < std::tie(b.col, b.row);
                   });
  std::vector<Triplet> merged;
  merged.reserve(triplets_.size());
  for (const Triplet& t : triplets_) {
    if (!merged.empty() && merged.back().col == t.col && merged.back().row == t.row) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Triplet& t) { return t.value == 0.0; }),
               merged.end());
  triplets_ = std::move(merged);
  finalized_ = true;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  if (lower > upper) {
    throw Error("InfeasibleBounds", "set_bounds: lower > upper for " + var_name(var));
  }
  lower_[var] = lower;
  upper_[var] = upper;
}

int LinearProgram::find_var(VarKind kind, const std::string& entity, int snapshot) const {
  auto it = var_lookup_.find(Key{static_cast<int>(kind), entity, snapshot});
  return it == var_lookup_.end() ? -1 : it->second;
}

int LinearProgram::find_row(RowKind kind, const std::string& entity, int snapshot) const {
  auto it = row_lookup_.find(Key{static_cast<int>(kind), entity, snapshot});
  return it == row_lookup_.end() ? -1 : it->second;
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

std::string make_name(const char* kind, const std::string& entity, int snapshot) {
  std::string name = std::string(kind) + "(" + sanitize(entity);
  if (snapshot >= 0) name += ",t" + std::to_string(snapshot);
  name += ")";
  return name;
}

}  // namespace

std::string LinearProgram::var_name(int var) const {
  const VarRef& r = var_refs_[var];
  return make_name(to_string(r.kind), r.entity, r.snapshot);
}

std::string LinearProgram::row_name(int row) const {
  const RowRef& r = row_refs_[row];
  return make_name(to_string(r.kind), r.entity, r.snapshot);
}

void write_mps(const LinearProgram& lp, std::ostream& out,
               const std::string& problem_name) {
  out << std::setprecision(16);
  out << "NAME " << problem_name << "\n";
  out << "ROWS\n";
  out << " N  COST\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    char rel = 'E';
    if (lp.relations()[i] == Relation::le) rel = 'L';
    if (lp.relations()[i] == Relation::ge) rel = 'G';
    out << " " << rel << "  " << lp.row_name(i) << "\n";
  }

  // column-major triplets; finalize() guarantees the order
  out << "COLUMNS\n";
  std::size_t k = 0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    const std::string name = lp.var_name(j);
    if (lp.cost()[j] != 0.0) {
      out << "    " << name << "  COST  " << lp.cost()[j] << "\n";
    }
    while (k < lp.triplets().size() && lp.triplets()[k].col == j) {
      const Triplet& t = lp.triplets()[k];
      out << "    " << name << "  " << lp.row_name(t.row) << "  " << t.value << "\n";
      ++k;
    }
  }

  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.rhs()[i] != 0.0) {
      out << "    RHS  " << lp.row_name(i) << "  " << lp.rhs()[i] << "\n";
    }
  }
  if (lp.objective_offset() != 0.0) {
    // MPS convention: objective constant stored as its negative on the cost row
    out << "    RHS  COST  " << -lp.objective_offset() << "\n";
  }

  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const std::string name = lp.var_name(j);
    double lo = lp.lower()[j];
    double up = lp.upper()[j];
    if (lo == up) {
      out << " FX BND  " << name << "  " << lo << "\n";
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << " FR BND  " << name << "\n";
      continue;
    }
    if (lo == -kInf) {
      out << " MI BND  " << name << "\n";
    } else if (lo != 0.0) {
      out << " LO BND  " << name << "  " << lo << "\n";
    }
    if (up != kInf) {
      out << " UP BND  " << name << "  " << up << "\n";
    }
  }
  out << "ENDATA\n";
}

}  // namespace storval
