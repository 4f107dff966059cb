#pragma once

#include <utility>
#include <vector>

#include "storval/model.hpp"

namespace storval {

// Bus-line incidence. Column l has +1 at the line's from-bus and -1 at its
// to-bus; stored as the two bus indices per line.
struct IncidenceMatrix {
  int num_buses = 0;
  std::vector<int> from;  // per line
  std::vector<int> to;    // per line

  int num_lines() const { return static_cast<int>(from.size()); }

  // K * v for a per-bus result, v indexed by line.
  std::vector<double> apply(const std::vector<double>& per_line) const;
};

// One entry per line participating in a cycle: signed orientation of the line
// along the cycle direction.
struct CycleEntry {
  int line = 0;
  int sign = 0;  // +1 or -1
};

struct CycleBasis {
  std::vector<std::vector<CycleEntry>> cycles;  // entries sorted by line index

  int num_cycles() const { return static_cast<int>(cycles.size()); }
};

IncidenceMatrix incidence_matrix(const Network& network);

// Fundamental cycles from a spanning forest: depth-first traversal rooted at
// the lowest-indexed bus of each component, visiting lines in input order.
// Each non-tree line closes exactly one cycle, oriented along that line.
CycleBasis cycle_basis(const Network& network);

int connected_components(const Network& network);

// K*C as integer entries; all-zero for a valid basis.
std::vector<std::vector<int>> incidence_cycle_product(const IncidenceMatrix& k,
                                                      const CycleBasis& c);

}  // namespace storval
