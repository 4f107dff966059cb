#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace storval {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind {
  generator_capacity,
  line_capacity,
  charger_capacity,
  discharger_capacity,
  store_capacity,
  dispatch,
  flow,
  charge,
  discharge,
  level,
  spill,
};

enum class RowKind {
  balance,
  availability,
  flow_upper,
  flow_lower,
  kvl,
  charge_limit,
  discharge_limit,
  level_limit,
  storage_balance,
  charger_discharger_tie,
  store_ratio_tie,
  emission,
  equity,
  line_volume,
};

const char* to_string(VarKind kind);
const char* to_string(RowKind kind);

enum class Relation { le, eq, ge };

// (kind, entity, snapshot); snapshot is -1 for per-entity items.
struct VarRef {
  VarKind kind;
  std::string entity;
  int snapshot = -1;
};

struct RowRef {
  RowKind kind;
  std::string entity;
  int snapshot = -1;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Sparse LP in triplet form plus the registries mapping indices back to model
// entities. Build with add_variable/add_row/add_entry, then finalize() once:
// it merges duplicate (row, col) entries, drops explicit zeros and sorts
// column-major.
class LinearProgram {
 public:
  int add_variable(VarKind kind, std::string entity, int snapshot, double lower,
                   double upper, double cost);
  int add_row(RowKind kind, std::string entity, int snapshot, Relation rel, double rhs);
  void add_entry(int row, int col, double value);
  void finalize();

  int num_vars() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<Triplet>& triplets() const { return triplets_; }
  const std::vector<VarRef>& var_refs() const { return var_refs_; }
  const std::vector<RowRef>& row_refs() const { return row_refs_; }

  double objective_offset() const { return objective_offset_; }
  void set_objective_offset(double v) { objective_offset_ = v; }
  void add_objective_offset(double v) { objective_offset_ += v; }

  void set_bounds(int var, double lower, double upper);

  // -1 when absent.
  int find_var(VarKind kind, const std::string& entity, int snapshot = -1) const;
  int find_row(RowKind kind, const std::string& entity, int snapshot = -1) const;

  std::string var_name(int var) const;
  std::string row_name(int row) const;

  bool finalized() const { return finalized_; }

 private:
  std::vector<double> cost_, lower_, upper_, rhs_;
  std::vector<Relation> relations_;
  std::vector<Triplet> triplets_;
  std::vector<VarRef> var_refs_;
  std::vector<RowRef> row_refs_;
  double objective_offset_ = 0.0;
  bool finalized_ = false;

  using Key = std::tuple<int, std::string, int>;
  std::map<Key, int> var_lookup_;
  std::map<Key, int> row_lookup_;
};

// Free-format MPS with row/column names taken from the registries.
void write_mps(const LinearProgram& lp, std::ostream& out,
               const std::string& problem_name = "storval");

}  // namespace storval
