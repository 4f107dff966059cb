#include "storval/graph.hpp"

#include <algorithm>

#include "storval/errors.hpp"

namespace storval {

std::vector<double> IncidenceMatrix::apply(const std::vector<double>& per_line) const {
  std::vector<double> out(num_buses, 0.0);
  for (int l = 0; l < num_lines(); ++l) {
    out[from[l]] += per_line[l];
    out[to[l]] -= per_line[l];
  }
  return out;
}

IncidenceMatrix incidence_matrix(const Network& network) {
  IncidenceMatrix k;
  k.num_buses = static_cast<int>(network.buses.size());
  k.from.reserve(network.lines.size());
  k.to.reserve(network.lines.size());
  for (const Line& l : network.lines) {
    int a = network.bus_index(l.bus_from);
    int b = network.bus_index(l.bus_to);
    if (a < 0 || b < 0) throw Error("UnknownBus", "incidence_matrix: line " + l.id);
    k.from.push_back(a);
    k.to.push_back(b);
  }
  return k;
}

namespace {

struct Forest {
  std::vector<int> parent_bus;   // -1 at roots
  std::vector<int> parent_line;  // line connecting bus to parent
  std::vector<int> parent_sign;  // +1 if the tree line is oriented parent->bus
  std::vector<int> depth;
  std::vector<int> component;
  std::vector<int> non_tree_lines;
};

Forest spanning_forest(const IncidenceMatrix& k) {
  const int n = k.num_buses;
  const int m = k.num_lines();
  Forest f;
  f.parent_bus.assign(n, -1);
  f.parent_line.assign(n, -1);
  f.parent_sign.assign(n, 0);
  f.depth.assign(n, 0);
  f.component.assign(n, -1);

  // adjacency in line input order
  std::vector<std::vector<int>> adj(n);
  for (int l = 0; l < m; ++l) {
    adj[k.from[l]].push_back(l);
    adj[k.to[l]].push_back(l);
  }

  std::vector<bool> line_in_tree(m, false);
  std::vector<std::size_t> cursor(n, 0);
  int ncomp = 0;
  for (int root = 0; root < n; ++root) {
    if (f.component[root] >= 0) continue;
    f.component[root] = ncomp;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int u = stack.back();
      if (cursor[u] == adj[u].size()) {
        stack.pop_back();
        continue;
      }
      int l = adj[u][cursor[u]++];
      int v = (k.from[l] == u) ? k.to[l] : k.from[l];
      if (f.component[v] < 0) {
        f.component[v] = ncomp;
        f.parent_bus[v] = u;
        f.parent_line[v] = l;
        f.parent_sign[v] = (k.from[l] == u) ? +1 : -1;
        f.depth[v] = f.depth[u] + 1;
        line_in_tree[l] = true;
        stack.push_back(v);
      }
    }
    ++ncomp;
  }
  for (int l = 0; l < m; ++l) {
    if (!line_in_tree[l]) f.non_tree_lines.push_back(l);
  }
  return f;
}

}  // namespace

int connected_components(const Network& network) {
  IncidenceMatrix k = incidence_matrix(network);
  Forest f = spanning_forest(k);
  int ncomp = 0;
  for (int c : f.component) ncomp = std::max(ncomp, c + 1);
  return ncomp;
}

CycleBasis cycle_basis(const Network& network) {
  IncidenceMatrix k = incidence_matrix(network);
  Forest f = spanning_forest(k);

  CycleBasis basis;
  basis.cycles.reserve(f.non_tree_lines.size());
  for (int l : f.non_tree_lines) {
    // cycle: the non-tree line from->to, then the tree path back to->...->from
    std::vector<CycleEntry> cyc{{l, +1}};
    int a = k.to[l];
    int b = k.from[l];
    // climb to the common ancestor; walking up from `a` follows the cycle
    // direction, walking up from `b` goes against it
    while (a != b) {
      if (f.depth[a] >= f.depth[b]) {
        cyc.push_back({f.parent_line[a], -f.parent_sign[a]});
        a = f.parent_bus[a];
      } else {
        cyc.push_back({f.parent_line[b], f.parent_sign[b]});
        b = f.parent_bus[b];
      }
    }
    std::sort(cyc.begin(), cyc.end(),
              [](const CycleEntry& x, const CycleEntry& y) { return x.line < y.line; });
    basis.cycles.push_back(std::move(cyc));
  }
  return basis;
}

std::vector<std::vector<int>> incidence_cycle_product(const IncidenceMatrix& k,
                                                      const CycleBasis& c) {
  std::vector<std::vector<int>> prod(k.num_buses,
                                     std::vector<int>(c.num_cycles(), 0));
  for (int j = 0; j < c.num_cycles(); ++j) {
    for (const CycleEntry& e : c.cycles[j]) {
      prod[k.from[e.line]][j] += e.sign;
      prod[k.to[e.line]][j] -= e.sign;
    }
  }
  return prod;
}

}  // namespace storval
