#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "storval/errors.hpp"
#include "storval/solver.hpp"

namespace storval {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

StandardForm to_standard_form(const LinearProgram& lp) {
  if (!lp.finalized()) {
    throw Error("NotFinalized", "to_standard_form: LinearProgram must be finalized");
  }
  StandardForm sf;
  sf.num_rows = lp.num_rows();
  sf.num_structural = lp.num_vars();
  sf.lower = lp.lower();
  sf.upper = lp.upper();
  sf.cost = lp.cost();
  sf.rhs = lp.rhs();
  sf.slack_of_row.assign(lp.num_rows(), -1);

  // structural columns from the column-sorted triplets
  sf.col_start.assign(lp.num_vars() + 1, 0);
  for (const Triplet& t : lp.triplets()) {
    if (t.row < 0 || t.row >= lp.num_rows() || t.col < 0 || t.col >= lp.num_vars()) {
      throw Error("MalformedProblem", "triplet index out of range");
    }
    sf.col_start[t.col + 1]++;
  }
  for (int j = 0; j < lp.num_vars(); ++j) sf.col_start[j + 1] += sf.col_start[j];
  sf.row_index.resize(lp.triplets().size());
  sf.values.resize(lp.triplets().size());
  {
    std::vector<int> cursor(sf.col_start.begin(), sf.col_start.end() - 1);
    for (const Triplet& t : lp.triplets()) {
      int k = cursor[t.col]++;
      sf.row_index[k] = t.row;
      sf.values[k] = t.value;
    }
  }

  // one slack column per inequality row
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.relations()[i] == Relation::eq) continue;
    sf.slack_of_row[i] = sf.num_cols();
    sf.col_start.push_back(static_cast<int>(sf.row_index.size()) + 1);
    sf.row_index.push_back(i);
    sf.values.push_back(1.0);
    sf.cost.push_back(0.0);
    if (lp.relations()[i] == Relation::le) {
      sf.lower.push_back(0.0);
      sf.upper.push_back(kInf);
    } else {
      sf.lower.push_back(-kInf);
      sf.upper.push_back(0.0);
    }
  }
  return sf;
}

namespace {

// B^-1 maintained as a periodic sparse LU plus a product-form eta file.
class BasisFactor {
 public:
  // basis columns are fetched through the column getter so that implicit
  // artificial columns need no storage
  template <typename ColumnGetter>
  bool factorize(int m, const std::vector<int>& basis, ColumnGetter&& get_column) {
    m_ = m;
    etas_.clear();
    if (m_ == 0) return true;
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<std::pair<int, double>> col;
    for (int p = 0; p < m_; ++p) {
      col.clear();
      get_column(basis[p], col);
      for (const auto& [row, val] : col) entries.emplace_back(row, p, val);
    }
    Eigen::SparseMatrix<double> b(m_, m_);
    b.setFromTriplets(entries.begin(), entries.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    return lu_.info() == Eigen::Success;
  }

  // x := B^-1 x
  void ftran(std::vector<double>& x) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> xm(x.data(), m_);
    xm = lu_.solve(xm.eval());
    for (const Eta& e : etas_) {
      double zr = x[e.pivot_row];
      if (zr == 0.0) continue;
      double t = zr / e.pivot_value;
      for (const auto& [i, wi] : e.entries) x[i] -= t * wi;
      x[e.pivot_row] = t;
    }
  }

  // y := B^-T y
  void btran(std::vector<double>& y) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      double s = 0.0;
      for (const auto& [i, wi] : e.entries) s += wi * y[i];
      y[e.pivot_row] = (y[e.pivot_row] - s) / e.pivot_value;
    }
    Eigen::Map<Eigen::VectorXd> ym(y.data(), m_);
    ym = lu_.transpose().solve(ym.eval());
  }

  // w = B^-1 a_q for the column entering at basis position r
  void push_eta(int pivot_row, const std::vector<double>& w) {
    Eta e;
    e.pivot_row = pivot_row;
    e.pivot_value = w[pivot_row];
    for (int i = 0; i < m_; ++i) {
      if (i != pivot_row && w[i] != 0.0) e.entries.emplace_back(i, w[i]);
    }
    etas_.push_back(std::move(e));
  }

  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pivot_row = 0;
    double pivot_value = 1.0;
    std::vector<std::pair<int, double>> entries;  // excludes the pivot row
  };

  int m_ = 0;
  // transpose() is non-const in Eigen's SparseLU though solving mutates nothing
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

enum class VStat : char { basic, at_lower, at_upper, free_nonbasic };

class Simplex {
 public:
  Simplex(const StandardForm& sf, const SolverOptions& opts)
      : sf_(sf), opts_(opts), m_(sf.num_rows), n_real_(sf.num_cols()) {
    if (opts_.feasibility_tol <= 0 || opts_.optimality_tol <= 0 || opts_.pivot_tol <= 0) {
      throw Error("MalformedOptions", "solver tolerances must be positive");
    }
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_real_, 1.0);
    if (opts_.scaling) equilibrate();
    n_total_ = n_real_ + m_;  // one artificial per row
    art_sign_.assign(m_, 1.0);
  }

  SolveStatus run() {
    initialize();
    SolveStatus st = phase1();
    if (st != SolveStatus::optimal) return st;
    st = phase2();
    return st;
  }

  long iterations() const { return iterations_; }

  // unscaled structural values
  std::vector<double> structural_values() const {
    std::vector<double> x(sf_.num_structural);
    for (int j = 0; j < sf_.num_structural; ++j) x[j] = value_[j] * col_scale_[j];
    return x;
  }

  // unscaled row duals under the d(objective)/d(rhs) convention
  std::vector<double> row_duals() const {
    std::vector<double> y(m_, 0.0);
    if (m_ == 0) return y;
    for (int p = 0; p < m_; ++p) y[p] = cost_[basis_[p]];
    factor_.btran(y);
    for (int i = 0; i < m_; ++i) y[i] *= row_scale_[i];
    return y;
  }

 private:
  void equilibrate() {
    // two rounds of inf-norm row/column scaling, powers kept implicit
    for (int round = 0; round < 2; ++round) {
      std::vector<double> rmax(m_, 0.0);
      for (int j = 0; j < n_real_; ++j) {
        for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
          double v = std::abs(sf_.values[k]) * row_scale_[sf_.row_index[k]] * col_scale_[j];
          rmax[sf_.row_index[k]] = std::max(rmax[sf_.row_index[k]], v);
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (rmax[i] > 0.0) row_scale_[i] /= rmax[i];
      }
      std::vector<double> cmax(n_real_, 0.0);
      for (int j = 0; j < n_real_; ++j) {
        for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
          double v = std::abs(sf_.values[k]) * row_scale_[sf_.row_index[k]] * col_scale_[j];
          cmax[j] = std::max(cmax[j], v);
        }
      }
      for (int j = 0; j < n_real_; ++j) {
        if (cmax[j] > 0.0) col_scale_[j] /= cmax[j];
      }
    }
    // apply: A' = R A C, b' = R b, bounds/cost in scaled variable units
    for (int j = 0; j < n_real_; ++j) {
      for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
        sf_.values[k] *= row_scale_[sf_.row_index[k]] * col_scale_[j];
      }
      sf_.cost[j] *= col_scale_[j];
      if (std::isfinite(sf_.lower[j])) sf_.lower[j] /= col_scale_[j];
      if (std::isfinite(sf_.upper[j])) sf_.upper[j] /= col_scale_[j];
    }
    for (int i = 0; i < m_; ++i) sf_.rhs[i] *= row_scale_[i];
  }

  void get_column(int j, std::vector<std::pair<int, double>>& out) const {
    if (j < n_real_) {
      for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
        out.emplace_back(sf_.row_index[k], sf_.values[k]);
      }
    } else {
      out.emplace_back(j - n_real_, art_sign_[j - n_real_]);
    }
  }

  double col_dot(int j, const std::vector<double>& y) const {
    if (j < n_real_) {
      double s = 0.0;
      for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
        s += sf_.values[k] * y[sf_.row_index[k]];
      }
      return s;
    }
    return art_sign_[j - n_real_] * y[j - n_real_];
  }

  double lower_of(int j) const { return j < n_real_ ? sf_.lower[j] : art_lower_; }
  double upper_of(int j) const {
    if (j < n_real_) return sf_.upper[j];
    return art_upper_;
  }

  void initialize() {
    stat_.assign(n_total_, VStat::at_lower);
    value_.assign(n_total_, 0.0);
    pos_.assign(n_total_, -1);
    basis_.assign(m_, -1);

    for (int j = 0; j < n_real_; ++j) {
      if (std::isfinite(sf_.lower[j])) {
        stat_[j] = VStat::at_lower;
        value_[j] = sf_.lower[j];
      } else if (std::isfinite(sf_.upper[j])) {
        stat_[j] = VStat::at_upper;
        value_[j] = sf_.upper[j];
      } else {
        stat_[j] = VStat::free_nonbasic;
        value_[j] = 0.0;
      }
    }

    // residuals decide the artificial signs; artificial basis is diagonal
    std::vector<double> residual = sf_.rhs;
    for (int j = 0; j < n_real_; ++j) {
      if (value_[j] == 0.0) continue;
      for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
        residual[sf_.row_index[k]] -= sf_.values[k] * value_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      art_sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
      int a = n_real_ + i;
      basis_[i] = a;
      pos_[a] = i;
      stat_[a] = VStat::basic;
      value_[a] = std::abs(residual[i]);
    }
    art_lower_ = 0.0;
    art_upper_ = kInf;

    cost_.assign(n_total_, 0.0);
    for (int i = 0; i < m_; ++i) cost_[n_real_ + i] = 1.0;

    factorize_basis();
  }

  void factorize_basis() {
    bool ok = factor_.factorize(m_, basis_, [this](int j, auto& out) { get_column(j, out); });
    if (!ok) throw Error("SingularBasis", "basis factorization failed");
  }

  void recompute_basic_values() {
    if (m_ == 0) return;
    std::vector<double> r = sf_.rhs;
    for (int j = 0; j < n_total_; ++j) {
      if (stat_[j] == VStat::basic || value_[j] == 0.0) continue;
      if (j < n_real_) {
        for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) {
          r[sf_.row_index[k]] -= sf_.values[k] * value_[j];
        }
      } else {
        r[j - n_real_] -= art_sign_[j - n_real_] * value_[j];
      }
    }
    factor_.ftran(r);
    for (int p = 0; p < m_; ++p) value_[basis_[p]] = r[p];
  }

  // reduced costs of all nonbasic columns for the current cost vector
  void compute_duals(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int p = 0; p < m_; ++p) y[p] = cost_[basis_[p]];
    factor_.btran(y);
  }

  struct Candidate {
    int col = -1;
    double reduced = 0.0;
    int direction = 0;  // +1 increasing, -1 decreasing
  };

  Candidate price(const std::vector<double>& y, bool bland) const {
    Candidate best;
    double best_score = opts_.optimality_tol;
    for (int j = 0; j < n_total_; ++j) {
      if (stat_[j] == VStat::basic) continue;
      double lo = lower_of(j);
      double up = upper_of(j);
      if (lo == up) continue;  // fixed, cannot move
      double d = cost_[j] - col_dot(j, y);
      int dir = 0;
      if (stat_[j] == VStat::at_lower && d < -opts_.optimality_tol) {
        dir = +1;
      } else if (stat_[j] == VStat::at_upper && d > opts_.optimality_tol) {
        dir = -1;
      } else if (stat_[j] == VStat::free_nonbasic && std::abs(d) > opts_.optimality_tol) {
        dir = d < 0 ? +1 : -1;
      }
      if (dir == 0) continue;
      if (bland) return {j, d, dir};  // lowest eligible index
      double score = std::abs(d);
      if (score > best_score) {
        best_score = score;
        best = {j, d, dir};
      }
    }
    return best;
  }

  struct RatioResult {
    double step = kInf;
    int blocking_pos = -1;  // basis position; -1 means the entering bound blocks
    bool to_upper = false;  // bound hit by the blocking basic variable
  };

  RatioResult ratio_test(int entering, int direction, const std::vector<double>& w) const {
    RatioResult r;
    double lo = lower_of(entering);
    double up = upper_of(entering);
    if (std::isfinite(up - lo)) r.step = up - lo;

    for (int p = 0; p < m_; ++p) {
      double wd = direction * w[p];
      if (std::abs(wd) <= opts_.pivot_tol) continue;
      int b = basis_[p];
      double xb = value_[b];
      double t;
      bool hits_upper;
      if (wd > 0.0) {
        double lb = lower_of(b);
        if (!std::isfinite(lb)) continue;
        t = (xb - lb) / wd;
        hits_upper = false;
      } else {
        double ub = upper_of(b);
        if (!std::isfinite(ub)) continue;
        t = (xb - ub) / wd;
        hits_upper = true;
      }
      if (t < 0.0) t = 0.0;  // tiny bound violations from roundoff
      // ties resolved toward the lowest variable index for determinism
      if (t < r.step - 1e-12 ||
          (t < r.step + 1e-12 && r.blocking_pos >= 0 && b < basis_[r.blocking_pos])) {
        r.step = t;
        r.blocking_pos = p;
        r.to_upper = hits_upper;
      }
    }
    return r;
  }

  // one pivot; returns false when the current phase is optimal
  enum class StepResult { pivoted, optimal, unbounded };

  StepResult step() {
    std::vector<double> y;
    compute_duals(y);
    Candidate cand = price(y, bland_mode_);
    if (cand.col < 0) return StepResult::optimal;

    std::vector<double> w(m_, 0.0);
    {
      std::vector<std::pair<int, double>> col;
      get_column(cand.col, col);
      for (const auto& [row, val] : col) w[row] = val;
      factor_.ftran(w);
    }

    RatioResult rt = ratio_test(cand.col, cand.direction, w);
    if (!std::isfinite(rt.step)) return StepResult::unbounded;

    ++iterations_;
    bool degenerate = rt.step <= 1e-12;
    if (opts_.anti_cycling) {
      if (degenerate) {
        if (++stall_count_ >= opts_.stall_window) bland_mode_ = true;
      } else {
        stall_count_ = 0;
        bland_mode_ = false;
      }
    }

    double delta = cand.direction * rt.step;
    if (rt.blocking_pos < 0) {
      // bound flip: the entering variable crosses to its other bound
      for (int p = 0; p < m_; ++p) {
        if (w[p] != 0.0) value_[basis_[p]] -= w[p] * delta;
      }
      value_[cand.col] += delta;
      stat_[cand.col] = cand.direction > 0 ? VStat::at_upper : VStat::at_lower;
      return StepResult::pivoted;
    }

    int leaving = basis_[rt.blocking_pos];
    for (int p = 0; p < m_; ++p) {
      if (w[p] != 0.0) value_[basis_[p]] -= w[p] * delta;
    }
    value_[cand.col] += delta;
    value_[leaving] = rt.to_upper ? upper_of(leaving) : lower_of(leaving);
    stat_[leaving] = rt.to_upper ? VStat::at_upper : VStat::at_lower;
    pos_[leaving] = -1;
    stat_[cand.col] = VStat::basic;
    pos_[cand.col] = rt.blocking_pos;
    basis_[rt.blocking_pos] = cand.col;

    if (std::abs(w[rt.blocking_pos]) < opts_.pivot_tol) {
      // pivot too small to update stably; rebuild instead
      factorize_basis();
      recompute_basic_values();
      return StepResult::pivoted;
    }
    factor_.push_eta(rt.blocking_pos, w);
    if (factor_.eta_count() >= opts_.refactor_interval) {
      factorize_basis();
      recompute_basic_values();
    }
    return StepResult::pivoted;
  }

  SolveStatus phase1() {
    double bnorm = 1.0;
    for (double b : sf_.rhs) bnorm = std::max(bnorm, std::abs(b));
    while (true) {
      if (iterations_ >= opts_.max_iterations) return SolveStatus::iteration_limit;
      double infeas = infeasibility();
      if (infeas <= opts_.feasibility_tol * bnorm) break;  // feasible
      StepResult sr = step();
      if (sr == StepResult::optimal) {
        return infeasibility() <= opts_.feasibility_tol * bnorm ? SolveStatus::optimal
                                                                : SolveStatus::infeasible;
      }
      if (sr == StepResult::unbounded) {
        // phase-1 objective is bounded below by zero; treat as infeasible
        return SolveStatus::infeasible;
      }
    }
    return SolveStatus::optimal;
  }

  double infeasibility() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      int a = n_real_ + i;
      if (stat_[a] == VStat::basic) s += std::abs(value_[a]);
      // nonbasic artificials sit at a bound; only a nonzero bound contributes
      else s += std::abs(value_[a]);
    }
    return s;
  }

  SolveStatus phase2() {
    // real costs; artificials pinned to zero
    for (int j = 0; j < n_real_; ++j) cost_[j] = sf_.cost[j];
    for (int i = 0; i < m_; ++i) {
      int a = n_real_ + i;
      cost_[a] = 0.0;
      if (stat_[a] != VStat::basic) value_[a] = 0.0;
    }
    art_lower_ = 0.0;
    art_upper_ = 0.0;
    stall_count_ = 0;
    bland_mode_ = false;

    while (true) {
      if (iterations_ >= opts_.max_iterations) return SolveStatus::iteration_limit;
      StepResult sr = step();
      if (sr == StepResult::optimal) return SolveStatus::optimal;
      if (sr == StepResult::unbounded) return SolveStatus::unbounded;
    }
  }

  StandardForm sf_;  // scaled in place
  SolverOptions opts_;
  int m_ = 0;
  int n_real_ = 0;
  int n_total_ = 0;

  std::vector<double> row_scale_, col_scale_;
  std::vector<double> art_sign_;
  double art_lower_ = 0.0, art_upper_ = kInf;

  std::vector<VStat> stat_;
  std::vector<double> value_;
  std::vector<int> pos_;
  std::vector<int> basis_;
  std::vector<double> cost_;

  BasisFactor factor_;
  long iterations_ = 0;
  int stall_count_ = 0;
  bool bland_mode_ = false;
};

}  // namespace

Solution solve(const LinearProgram& lp, const SolverOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  StandardForm sf = to_standard_form(lp);

  Solution sol;
  Simplex simplex(sf, opts);
  sol.status = simplex.run();
  sol.iterations = simplex.iterations();

  if (sol.status == SolveStatus::optimal) {
    sol.primal = simplex.structural_values();
    sol.dual = simplex.row_duals();
    sol.reduced_cost.assign(lp.num_vars(), 0.0);
    for (int j = 0; j < lp.num_vars(); ++j) sol.reduced_cost[j] = lp.cost()[j];
    for (const Triplet& t : lp.triplets()) {
      sol.reduced_cost[t.col] -= t.value * sol.dual[t.row];
    }
    double obj = lp.objective_offset();
    for (int j = 0; j < lp.num_vars(); ++j) obj += lp.cost()[j] * sol.primal[j];
    sol.objective = obj;
  }

  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

std::string CertificateReport::to_string() const {
  std::ostringstream out;
  out << "max_primal_residual " << max_primal_residual << "\n"
      << "max_dual_residual " << max_dual_residual << "\n"
      << "max_complementarity " << max_complementarity << "\n"
      << "relative_duality_gap " << relative_duality_gap << "\n"
      << "pass " << (pass ? "true" : "false") << "\n";
  if (!worst_row.empty()) out << "worst_row " << worst_row << "\n";
  return out.str();
}

CertificateReport verify_kkt(const LinearProgram& lp, const Solution& solution,
                             double tol) {
  if (solution.status != SolveStatus::optimal) {
    throw Error("NotOptimal", "verify_kkt requires an optimal solution");
  }
  CertificateReport rep;

  const auto& x = solution.primal;
  const auto& y = solution.dual;

  // row activities
  std::vector<double> activity(lp.num_rows(), 0.0);
  for (const Triplet& t : lp.triplets()) activity[t.row] += t.value * x[t.col];

  for (int i = 0; i < lp.num_rows(); ++i) {
    double act = activity[i];
    double b = lp.rhs()[i];
    double resid = 0.0;
    double slack = 0.0;
    switch (lp.relations()[i]) {
      case Relation::eq:
        resid = std::abs(act - b);
        slack = 0.0;
        break;
      case Relation::le:
        resid = std::max(0.0, act - b);
        slack = std::max(0.0, b - act);
        break;
      case Relation::ge:
        resid = std::max(0.0, b - act);
        slack = std::max(0.0, act - b);
        break;
    }
    double scale = std::max({1.0, std::abs(b), std::abs(act)});
    if (resid / scale > rep.max_primal_residual) {
      rep.max_primal_residual = resid / scale;
      rep.worst_row = lp.row_name(i);
    }
    double cs = std::abs(slack * y[i]) / std::max(1.0, std::abs(b));
    rep.max_complementarity = std::max(rep.max_complementarity, cs);

    // relaxing a <= row cannot raise a minimum, so its dual is non-positive;
    // symmetrically >= rows carry non-negative duals
    double sign_viol = 0.0;
    if (lp.relations()[i] == Relation::le && y[i] > 0.0) sign_viol = y[i];
    if (lp.relations()[i] == Relation::ge && y[i] < 0.0) sign_viol = -y[i];
    rep.max_dual_residual =
        std::max(rep.max_dual_residual, sign_viol / std::max(1.0, std::abs(b)));
  }

  // variable bounds fold into the primal residual
  for (int j = 0; j < lp.num_vars(); ++j) {
    double lo = lp.lower()[j], up = lp.upper()[j];
    double v = std::max({0.0, lo - x[j], x[j] - up});
    double scale = std::max(1.0, std::abs(x[j]));
    if (v / scale > rep.max_primal_residual) {
      rep.max_primal_residual = v / scale;
      rep.worst_row = lp.var_name(j);
    }
  }

  // dual feasibility and variable complementarity via reduced costs
  std::vector<double> reduced(lp.cost());
  for (const Triplet& t : lp.triplets()) reduced[t.col] -= t.value * y[t.row];
  double dual_obj = lp.objective_offset();
  for (int i = 0; i < lp.num_rows(); ++i) dual_obj += lp.rhs()[i] * y[i];
  for (int j = 0; j < lp.num_vars(); ++j) {
    double d = reduced[j];
    double lo = lp.lower()[j], up = lp.upper()[j];
    double scale = std::max(1.0, std::abs(lp.cost()[j]));
    double viol = 0.0;
    if (d > 0.0) {
      if (std::isfinite(lo)) {
        dual_obj += lo * d;
        viol = std::abs(x[j] - lo) * d / std::max(1.0, std::abs(x[j]));
        rep.max_complementarity = std::max(rep.max_complementarity, viol);
      } else {
        rep.max_dual_residual = std::max(rep.max_dual_residual, d / scale);
      }
    } else if (d < 0.0) {
      if (std::isfinite(up)) {
        dual_obj += up * d;
        viol = std::abs(up - x[j]) * (-d) / std::max(1.0, std::abs(x[j]));
        rep.max_complementarity = std::max(rep.max_complementarity, viol);
      } else {
        rep.max_dual_residual = std::max(rep.max_dual_residual, -d / scale);
      }
    }
  }

  double primal_obj = lp.objective_offset();
  for (int j = 0; j < lp.num_vars(); ++j) primal_obj += lp.cost()[j] * x[j];
  rep.relative_duality_gap =
      std::abs(primal_obj - dual_obj) / std::max(1.0, std::abs(primal_obj));

  rep.pass = rep.max_primal_residual <= tol && rep.max_dual_residual <= tol &&
             rep.max_complementarity <= tol && rep.relative_duality_gap <= tol;
  return rep;
}

}  // namespace storval
