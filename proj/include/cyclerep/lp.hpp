#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cyclerep/error.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/sparse_matrix.hpp"

namespace cyclerep {

/// min c.x + offset  s.t.  A x = b, x >= 0, x_j integer where integrality[j].
struct LinearProgram {
  std::vector<Rational> objective;
  SparseMatrix constraints;
  std::vector<Rational> rhs;
  std::vector<bool> integrality;  // empty means "no integer variables"
  Rational objective_offset{0};

  Index num_variables() const { return objective.size(); }
  Index num_constraints() const { return rhs.size(); }

  void validate() const {
    if (constraints.cols() != objective.size()) {
      throw ValidationError("LinearProgram: objective length does not match column count");
    }
    if (constraints.rows() != rhs.size()) {
      throw ValidationError("LinearProgram: rhs length does not match row count");
    }
    if (!integrality.empty() && integrality.size() != objective.size()) {
      throw ValidationError("LinearProgram: integrality mask length mismatch");
    }
  }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<Rational> x;
  Rational cost{0};
  std::size_t pivots = 0;
  std::size_t branch_nodes = 0;
  std::optional<Rational> relaxation_cost;  // MIP root LP cost

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Exact residual check A x == b and x >= 0.
inline bool is_feasible(const LinearProgram& p, const std::vector<Rational>& x) {
  if (x.size() != p.num_variables()) {
    return false;
  }
  std::vector<Entry> entries;
  for (Index j = 0; j < x.size(); ++j) {
    if (sgn(x[j]) < 0) {
      return false;
    }
    if (sgn(x[j]) != 0) {
      entries.push_back({j, x[j]});
    }
  }
  SparseColumn ax = p.constraints.multiply(entries);
  SparseColumn b;
  for (Index i = 0; i < p.rhs.size(); ++i) {
    if (sgn(p.rhs[i]) != 0) {
      b.push_back({i, p.rhs[i]});
    }
  }
  return ax == b;
}

namespace detail {

/// Dense simplex tableau. Row i holds B^{-1}A and B^{-1}b in the last slot;
/// `d` holds reduced costs and minus the current objective in the last slot.
class Tableau {
 public:
  Tableau(Index m, Index n) : m_(m), n_(n), a_(m, std::vector<Rational>(n + 1)), d_(n + 1), basis_(m, 0) {}

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Rational& at(Index i, Index j) { return a_[i][j]; }
  Rational& rhs(Index i) { return a_[i][n_]; }
  Rational& reduced_cost(Index j) { return d_[j]; }
  Index& basic(Index i) { return basis_[i]; }
  std::size_t pivots() const { return pivots_; }

  /// Rebuilds the cost row for objective c (size n) given the current basis.
  void set_objective(const std::vector<Rational>& c) {
    Rational tmp;
    for (Index j = 0; j <= n_; ++j) {
      d_[j] = j < n_ ? c[j] : Rational(0);
    }
    for (Index i = 0; i < m_; ++i) {
      const Rational& cb = c[basis_[i]];
      if (sgn(cb) == 0) {
        continue;
      }
      for (Index j = 0; j <= n_; ++j) {
        if (sgn(a_[i][j]) != 0) {
          mpq_mul(tmp.get_mpq_t(), cb.get_mpq_t(), a_[i][j].get_mpq_t());
          mpq_sub(d_[j].get_mpq_t(), d_[j].get_mpq_t(), tmp.get_mpq_t());
        }
      }
    }
  }

  void pivot(Index r, Index q) {
    auto& prow = a_[r];
    nz_.clear();
    const Rational inv = 1 / prow[q];
    for (Index j = 0; j <= n_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz_.push_back(j);
      }
    }
    Rational f;
    Rational tmp;
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[q]) == 0) {
        return;
      }
      f = row[q];
      for (Index j : nz_) {
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), prow[j].get_mpq_t());
        mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), tmp.get_mpq_t());
      }
    };
    for (Index i = 0; i < m_; ++i) {
      if (i != r) {
        eliminate(a_[i]);
      }
    }
    eliminate(d_);
    basis_[r] = q;
    ++pivots_;
  }

  enum class Outcome { Optimal, Unbounded };

  /// Primal simplex with Bland's rule over the allowed columns.
  Outcome run(const std::vector<bool>& allowed) {
    for (;;) {
      Index q = n_;
      for (Index j = 0; j < n_; ++j) {
        if (allowed[j] && sgn(d_[j]) < 0) {
          q = j;
          break;
        }
      }
      if (q == n_) {
        return Outcome::Optimal;
      }
      Index r = m_;
      Rational best;
      Rational ratio;
      for (Index i = 0; i < m_; ++i) {
        if (sgn(a_[i][q]) <= 0) {
          continue;
        }
        ratio = a_[i][n_] / a_[i][q];
        if (r == m_ || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) {
        return Outcome::Unbounded;
      }
      pivot(r, q);
    }
  }

  void remove_row(Index r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

  const std::vector<Rational>& row(Index i) const { return a_[i]; }

 private:
  Index m_;
  Index n_;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> d_;
  std::vector<Index> basis_;
  std::vector<Index> nz_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Two-phase primal simplex, Bland's rule, exact arithmetic.
///
/// Presolve drops all-zero columns (fixed at 0, or unbounded if their cost is
/// negative) and all-zero rows (infeasible unless their rhs is 0). Rows with a
/// +1 unit column after sign normalisation start with that column basic;
/// only the remaining rows get artificials.
inline Solution solve_lp(const LinearProgram& p) {
  p.validate();
  const Index m0 = p.num_constraints();
  const Index n0 = p.num_variables();
  Solution sol;
  sol.x.assign(n0, Rational(0));

  std::vector<Index> col_map;  // tableau column -> program column
  for (Index j = 0; j < n0; ++j) {
    if (!p.constraints.column(j).empty()) {
      col_map.push_back(j);
    } else if (sgn(p.objective[j]) < 0) {
      sol.status = SolveStatus::Unbounded;
      return sol;
    }
  }
  std::vector<bool> row_used(m0, false);
  for (Index j : col_map) {
    for (const auto& e : p.constraints.column(j)) {
      row_used[e.row] = true;
    }
  }
  std::vector<Index> row_map;
  std::vector<Index> row_index(m0, kNoIndex);
  for (Index i = 0; i < m0; ++i) {
    if (row_used[i]) {
      row_index[i] = row_map.size();
      row_map.push_back(i);
    } else if (sgn(p.rhs[i]) != 0) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
  }
  const Index m = row_map.size();
  const Index n = col_map.size();

  std::vector<int> row_sign(m, 1);
  for (Index i = 0; i < m; ++i) {
    if (sgn(p.rhs[row_map[i]]) < 0) {
      row_sign[i] = -1;
    }
  }
  // Crash basis: a column with a single nonzero that is positive after
  // normalisation can start basic in its row.
  std::vector<Index> crash(m, kNoIndex);
  for (Index k = 0; k < n; ++k) {
    const auto& col = p.constraints.column(col_map[k]);
    if (col.size() != 1) {
      continue;
    }
    const Index i = row_index[col[0].row];
    if (crash[i] == kNoIndex && sgn(col[0].value) * row_sign[i] > 0) {
      crash[i] = k;
    }
  }
  Index artificials = 0;
  for (Index i = 0; i < m; ++i) {
    if (crash[i] == kNoIndex) {
      ++artificials;
    }
  }

  const Index total = n + artificials;
  detail::Tableau t(m, total);
  for (Index k = 0; k < n; ++k) {
    for (const auto& e : p.constraints.column(col_map[k])) {
      const Index i = row_index[e.row];
      t.at(i, k) = row_sign[i] > 0 ? e.value : Rational(-e.value);
    }
  }
  {
    Index next = n;
    for (Index i = 0; i < m; ++i) {
      t.rhs(i) = row_sign[i] > 0 ? p.rhs[row_map[i]] : Rational(-p.rhs[row_map[i]]);
      if (crash[i] == kNoIndex) {
        t.at(i, next) = 1;
        t.basic(i) = next++;
      } else {
        const Index k = crash[i];
        const Rational scale = 1 / t.at(i, k);
        if (scale != 1) {
          for (Index j = 0; j <= total; ++j) {
            if (sgn(t.at(i, j)) != 0) {
              t.at(i, j) *= scale;
            }
          }
        }
        t.basic(i) = k;
      }
    }
  }
  // Crash columns are unit columns, so the starting basis matrix is diagonal
  // and the scaling above already gives B^{-1}A.

  std::vector<bool> allowed(total, true);
  if (artificials > 0) {
    std::vector<Rational> phase1(total, Rational(0));
    for (Index j = n; j < total; ++j) {
      phase1[j] = 1;
    }
    t.set_objective(phase1);
    t.run(allowed);
    if (sgn(t.reduced_cost(total)) != 0) {  // -(sum of artificials) < 0
      sol.status = SolveStatus::Infeasible;
      sol.pivots = t.pivots();
      return sol;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (Index i = 0; i < t.rows();) {
      if (t.basic(i) < n) {
        ++i;
        continue;
      }
      Index q = kNoIndex;
      for (Index j = 0; j < n; ++j) {
        if (sgn(t.row(i)[j]) != 0) {
          q = j;
          break;
        }
      }
      if (q == kNoIndex) {
        t.remove_row(i);  // redundant constraint
      } else {
        t.pivot(i, q);
        ++i;
      }
    }
    for (Index j = n; j < total; ++j) {
      allowed[j] = false;
    }
  }

  std::vector<Rational> cost(total, Rational(0));
  for (Index k = 0; k < n; ++k) {
    cost[k] = p.objective[col_map[k]];
  }
  t.set_objective(cost);
  const auto outcome = t.run(allowed);
  sol.pivots = t.pivots();
  if (outcome == detail::Tableau::Outcome::Unbounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }
  for (Index i = 0; i < t.rows(); ++i) {
    const Index k = t.basic(i);
    if (k < n) {
      sol.x[col_map[k]] = t.rhs(i);
    }
  }
  sol.status = SolveStatus::Optimal;
  sol.cost = p.objective_offset;
  for (Index j = 0; j < n0; ++j) {
    if (sgn(sol.x[j]) != 0) {
      sol.cost += p.objective[j] * sol.x[j];
    }
  }
  if (!is_feasible(p, sol.x)) {
    throw InternalError("solve_lp: returned point violates A x = b");
  }
  return sol;
}

namespace detail {

struct BranchBound {
  Index var;
  bool upper;  // x_var <= value, else x_var >= value
  Rational value;
};

inline LinearProgram with_bounds(const LinearProgram& p, const std::vector<BranchBound>& bounds) {
  if (bounds.empty()) {
    return p;
  }
  const Index n = p.num_variables();
  const Index m = p.num_constraints();
  LinearProgram q;
  q.objective = p.objective;
  q.objective.resize(n + bounds.size(), Rational(0));
  q.rhs = p.rhs;
  q.objective_offset = p.objective_offset;
  q.constraints = SparseMatrix(m + bounds.size(), n + bounds.size());
  for (Index j = 0; j < n; ++j) {
    SparseColumn col = p.constraints.column(j);
    for (Index b = 0; b < bounds.size(); ++b) {
      if (bounds[b].var == j) {
        col.push_back({m + b, Rational(1)});
      }
    }
    q.constraints.set_column(j, std::move(col));
  }
  for (Index b = 0; b < bounds.size(); ++b) {
    q.constraints.set_column(n + b, {{m + b, Rational(bounds[b].upper ? 1 : -1)}});
    q.rhs.push_back(bounds[b].value);
  }
  return q;
}

}  // namespace detail

/// Depth-first branch and bound over solve_lp. Branches on the masked
/// variable whose fractional part is nearest 1/2 (lowest index on ties),
/// exploring the down branch first.
inline Solution solve_mip(const LinearProgram& p) {
  p.validate();
  const Index n = p.num_variables();
  bool any_integer = false;
  for (bool b : p.integrality) {
    any_integer = any_integer || b;
  }
  Solution root = solve_lp(p);
  root.branch_nodes = 1;
  if (root.optimal()) {
    root.relaxation_cost = root.cost;
  }
  if (!any_integer || !root.optimal()) {
    return root;
  }

  const Rational half(1, 2);
  auto branching_var = [&](const std::vector<Rational>& x) -> Index {
    Index best = kNoIndex;
    Rational best_gap;
    for (Index j = 0; j < n; ++j) {
      if (!p.integrality[j] || is_integer(x[j])) {
        continue;
      }
      Rational gap = abs(x[j] - floor_of(x[j]) - half);
      if (best == kNoIndex || gap < best_gap) {
        best = j;
        best_gap = gap;
      }
    }
    return best;
  };

  Solution best;
  best.status = SolveStatus::Infeasible;
  std::size_t nodes = 0;
  std::size_t pivots = 0;
  std::vector<std::vector<detail::BranchBound>> stack;
  stack.emplace_back();
  while (!stack.empty()) {
    auto bounds = std::move(stack.back());
    stack.pop_back();
    Solution node;
    if (bounds.empty()) {
      node = root;
    } else {
      node = solve_lp(detail::with_bounds(p, bounds));
      node.x.resize(n);
    }
    ++nodes;
    pivots += node.pivots;
    if (node.status == SolveStatus::Unbounded) {
      // An unbounded relaxation at the root with integer data means the
      // integer program is unbounded or infeasible; report it as unbounded.
      best = node;
      best.status = SolveStatus::Unbounded;
      break;
    }
    if (!node.optimal()) {
      continue;
    }
    if (best.optimal() && node.cost >= best.cost) {
      continue;
    }
    const Index j = branching_var(node.x);
    if (j == kNoIndex) {
      best = std::move(node);
      continue;
    }
    auto up = bounds;
    up.push_back({j, false, ceil_of(node.x[j])});
    auto down = std::move(bounds);
    down.push_back({j, true, floor_of(node.x[j])});
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }
  best.branch_nodes = nodes;
  best.pivots = pivots;
  best.relaxation_cost = root.cost;
  if (best.optimal() && !is_feasible(p, best.x)) {
    throw InternalError("solve_mip: returned point violates A x = b");
  }
  return best;
}

/// Plain-text dump in a CPLEX-LP-like layout with exact fractions.
inline void write_lp(std::ostream& os, const LinearProgram& p) {
  auto term = [&os](const Rational& c, Index j, bool first) {
    if (sgn(c) < 0) {
      os << " - ";
    } else if (!first) {
      os << " + ";
    } else {
      os << " ";
    }
    os << to_string(abs(c)) << " x" << j;
  };
  os << "Minimize\n obj:";
  bool first = true;
  for (Index j = 0; j < p.num_variables(); ++j) {
    if (sgn(p.objective[j]) != 0) {
      term(p.objective[j], j, first);
      first = false;
    }
  }
  if (sgn(p.objective_offset) != 0 || first) {
    os << (first ? " " : " + ") << to_string(p.objective_offset);
  }
  os << "\nSubject To\n";
  std::vector<std::vector<std::pair<Index, Rational>>> rows(p.num_constraints());
  for (Index j = 0; j < p.num_variables(); ++j) {
    for (const auto& e : p.constraints.column(j)) {
      rows[e.row].emplace_back(j, e.value);
    }
  }
  for (Index i = 0; i < rows.size(); ++i) {
    os << " c" << i << ":";
    bool f = true;
    for (const auto& [j, v] : rows[i]) {
      term(v, j, f);
      f = false;
    }
    if (f) {
      os << " 0 x0";
    }
    os << " = " << to_string(p.rhs[i]) << "\n";
  }
  os << "Bounds\n";
  for (Index j = 0; j < p.num_variables(); ++j) {
    os << " x" << j << " >= 0\n";
  }
  bool any = false;
  for (Index j = 0; j < p.integrality.size(); ++j) {
    if (p.integrality[j]) {
      os << (any ? " x" : "General\n x") << j;
      any = true;
    }
  }
  if (any) {
    os << "\n";
  }
  os << "End\n";
}

}  // namespace cyclerep
