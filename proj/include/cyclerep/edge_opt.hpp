#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cyclerep/complex.hpp"
#include "cyclerep/error.hpp"
#include "cyclerep/lp.hpp"
#include "cyclerep/persistence.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/sparse_matrix.hpp"

namespace cyclerep {

enum class WeightMode { Uniform, Length, Area };

inline const char* to_string(WeightMode w) {
  switch (w) {
    case WeightMode::Uniform:
      return "uniform";
    case WeightMode::Length:
      return "length";
    case WeightMode::Area:
      return "area";
  }
  return "unknown";
}

inline WeightMode parse_weight_mode(const std::string& s) {
  if (s == "uniform") return WeightMode::Uniform;
  if (s == "length") return WeightMode::Length;
  if (s == "area") return WeightMode::Area;
  throw ValidationError("unknown weight mode '" + s + "'");
}

inline Rational edge_weight(const FilteredComplex& k, Index e, WeightMode mode) {
  switch (mode) {
    case WeightMode::Uniform:
      return Rational(1);
    case WeightMode::Length:
      return rational_from_double(k.edge_length(e));
    case WeightMode::Area:
      break;
  }
  throw ConfigurationError("area weights apply to triangle programs only");
}

/// sum_i W_i |x_i| over a 1-chain.
inline Rational weighted_l1(const FilteredComplex& k, const SparseColumn& chain, WeightMode mode) {
  Rational total(0);
  for (const auto& e : chain) {
    total += edge_weight(k, e.row, mode) * abs(e.value);
  }
  return total;
}

/// Per-cycle solver bookkeeping shared by the edge and triangle optimizers.
struct CycleSolveStats {
  Index index = 0;                  // position in the basis / barcode
  Rational original_cost{0};        // objective evaluated at the original
  Rational optimal_cost{0};         // objective at the returned chain
  std::optional<Rational> relaxation_cost;  // LP relaxation when integral
  SolveStatus status = SolveStatus::Optimal;
  bool kept_original = false;       // solver gave no improvement candidate
  std::size_t pivots = 0;
  std::size_t branch_nodes = 0;
  Index num_constraints = 0;
  Index num_variables = 0;
  double seconds = 0.0;
};

/// Program over a fixed edge row set: x+ - x- - sum_k y_k d_k = x_orig with
/// free direction coefficients y (split into y+ and y-).
struct EdgeProgram {
  LinearProgram lp;
  std::vector<Index> edges;           // row -> edge index in S_1
  std::vector<Index> triangles;       // boundary directions used
  std::vector<Index> cycles;          // basis cycles used as directions
  Index num_directions = 0;
};

inline EdgeProgram assemble_edge_program(const FilteredComplex& k, std::vector<Index> edges,
                                         const SparseColumn& x_orig,
                                         const std::vector<const SparseColumn*>& directions,
                                         WeightMode weights, bool integral) {
  std::vector<Index> row_of(k.size(1), kNoIndex);
  for (Index r = 0; r < edges.size(); ++r) {
    row_of[edges[r]] = r;
  }
  auto restrict_to_rows = [&](const SparseColumn& col) {
    std::vector<Entry> out;
    out.reserve(col.size());
    for (const auto& e : col) {
      if (row_of[e.row] == kNoIndex) {
        throw InternalError("edge program: chain leaves the admissible edge set");
      }
      out.push_back({row_of[e.row], e.value});
    }
    return make_column(std::move(out));
  };

  const Index nr = edges.size();
  const Index nd = directions.size();
  EdgeProgram prog;
  prog.num_directions = nd;
  auto& lp = prog.lp;
  lp.constraints = SparseMatrix(nr, 2 * nr + 2 * nd);
  lp.objective.assign(2 * nr + 2 * nd, Rational(0));
  lp.integrality.assign(2 * nr + 2 * nd, false);
  for (Index r = 0; r < nr; ++r) {
    const Rational w = edge_weight(k, edges[r], weights);
    lp.constraints.set_column(r, {{r, Rational(1)}});
    lp.constraints.set_column(nr + r, {{r, Rational(-1)}});
    lp.objective[r] = w;
    lp.objective[nr + r] = w;
    lp.integrality[r] = integral;
    lp.integrality[nr + r] = integral;
  }
  for (Index d = 0; d < nd; ++d) {
    SparseColumn col = restrict_to_rows(*directions[d]);
    lp.constraints.set_column(2 * nr + d, scaled(col, Rational(-1)));
    lp.constraints.set_column(2 * nr + nd + d, std::move(col));
  }
  lp.rhs.assign(nr, Rational(0));
  for (const auto& e : restrict_to_rows(x_orig)) {
    lp.rhs[e.row] = e.value;
  }
  prog.edges = std::move(edges);
  return prog;
}

/// Reads x = x+ - x- back as a 1-chain over S_1.
inline SparseColumn edge_chain_from_solution(const EdgeProgram& prog, const std::vector<Rational>& x) {
  const Index nr = prog.edges.size();
  std::vector<Entry> out;
  for (Index r = 0; r < nr; ++r) {
    Rational v = x[r] - x[nr + r];
    if (sgn(v) != 0) {
      out.push_back({prog.edges[r], std::move(v)});
    }
  }
  return make_column(std::move(out));
}

struct EdgeProgramSpec {
  Index target = 0;
  WeightMode weights = WeightMode::Uniform;
  bool integral = false;
  bool use_column_basis = true;  // restrict triangles to nonzero R2 columns
};

/// Minimise the weighted l1 norm of x^Orig + (boundaries born no later) +
/// (other basis cycles born no later and dying no later).
inline EdgeProgram build_edge_program(const EdgeProgramSpec& spec, const std::vector<CycleRepresentative>& basis,
                                      const FilteredComplex& k, const PersistenceResult& ph) {
  if (spec.target >= basis.size()) {
    throw ValidationError("build_edge_program: target index out of range");
  }
  const auto& target = basis[spec.target];
  const Rational& b = target.lifespan.birth;

  std::vector<Index> edges;
  for (Index e = 0; e < k.size(1) && k.birth(1, e) <= b; ++e) {
    edges.push_back(e);
  }
  std::vector<const SparseColumn*> directions;
  std::vector<Index> triangles;
  for (Index t = 0; t < k.size(2) && k.birth(2, t) <= b; ++t) {
    if (spec.use_column_basis && ph.dec2.is_zero_column(t)) {
      continue;
    }
    triangles.push_back(t);
    directions.push_back(&ph.boundary2.column(t));
  }
  std::vector<Index> cycles;
  for (Index i = 0; i < basis.size(); ++i) {
    if (i == spec.target) {
      continue;
    }
    const auto& z = basis[i].lifespan;
    if (z.birth <= b && death_le(z.death, target.lifespan.death)) {
      cycles.push_back(i);
      directions.push_back(&basis[i].chain);
    }
  }
  EdgeProgram prog = assemble_edge_program(k, std::move(edges), target.chain, directions, spec.weights, spec.integral);
  prog.triangles = std::move(triangles);
  prog.cycles = std::move(cycles);
  return prog;
}

/// Program over the complex just before the target's birth edge in the
/// simplex-wise order: x^Orig plus any cycle of that subcomplex.
inline EdgeProgram build_filtered_program(Index target, const std::vector<CycleRepresentative>& basis,
                                          const FilteredComplex& k, const PersistenceResult& ph,
                                          WeightMode weights, bool integral) {
  if (target >= basis.size() || !basis[target].source_pair) {
    throw ValidationError("build_filtered_program: target has no birth simplex");
  }
  const Index sigma = basis[target].source_pair->birth_simplex;
  const Index sigma_pos = k.order_position(1, sigma);

  std::vector<Index> edges;
  for (Index e = 0; e <= sigma; ++e) {
    edges.push_back(e);
  }
  std::vector<const SparseColumn*> directions;
  std::vector<Index> triangles;
  for (Index t = 0; t < k.size(2) && k.order_position(2, t) < sigma_pos; ++t) {
    if (!ph.dec2.is_zero_column(t)) {
      triangles.push_back(t);
      directions.push_back(&ph.boundary2.column(t));
    }
  }
  // Cycles of the earlier complex not already accounted for by a boundary.
  std::vector<Index> cycles;
  for (Index e = 0; e < sigma; ++e) {
    if (!ph.dec1.is_zero_column(e)) {
      continue;
    }
    const Index killer = ph.dec2.column_with_low[e];
    if (killer != kNoIndex && k.order_position(2, killer) < sigma_pos) {
      continue;
    }
    cycles.push_back(e);
    directions.push_back(&ph.dec1.transform.column(e));
  }
  EdgeProgram prog = assemble_edge_program(k, std::move(edges), basis[target].chain, directions, weights, integral);
  prog.triangles = std::move(triangles);
  prog.cycles = std::move(cycles);
  return prog;
}

struct EdgeOptions {
  WeightMode weights = WeightMode::Uniform;
  bool integral = false;
  bool replace = true;  // the sweep replaces each solved element in place
  bool use_column_basis = true;
};

struct OptimizationResult {
  std::vector<CycleRepresentative> basis;
  std::vector<CycleSolveStats> stats;
  std::vector<Solution> solutions;  // raw solver output per cycle
};

namespace detail {

inline CycleSolveStats solve_edge_cycle(const FilteredComplex& k, const EdgeProgram& prog, const SparseColumn& x_orig,
                                        WeightMode weights, bool integral, SparseColumn& chain_out,
                                        Solution& sol_out) {
  CycleSolveStats st;
  st.num_constraints = prog.lp.num_constraints();
  st.num_variables = prog.lp.num_variables();
  st.original_cost = weighted_l1(k, x_orig, weights);
  const auto start = std::chrono::steady_clock::now();
  sol_out = integral ? solve_mip(prog.lp) : solve_lp(prog.lp);
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  st.status = sol_out.status;
  st.pivots = sol_out.pivots;
  st.branch_nodes = sol_out.branch_nodes;
  st.relaxation_cost = sol_out.relaxation_cost;
  if (sol_out.status == SolveStatus::Unbounded) {
    throw InternalError("edge program unbounded despite nonnegative weights");
  }
  if (!sol_out.optimal()) {
    // Only reachable with integrality and a non-integral original: the
    // integer hull can be empty. Keep the original.
    if (!integral) {
      throw InternalError("edge program infeasible although the original is feasible");
    }
    st.kept_original = true;
    chain_out = x_orig;
    st.optimal_cost = st.original_cost;
    return st;
  }
  chain_out = edge_chain_from_solution(prog, sol_out.x);
  st.optimal_cost = weighted_l1(k, chain_out, weights);
  if (st.optimal_cost > st.original_cost) {
    throw InternalError("edge program optimum exceeds the cost of the original");
  }
  return st;
}

}  // namespace detail

/// Sweeps the basis in barcode order, solving the persistent
/// edge program for each element against the partially optimised basis.
inline OptimizationResult optimize_basis_persistent(const FilteredComplex& k, const PersistenceResult& ph,
                                                    const EdgeOptions& opt) {
  OptimizationResult out;
  std::vector<CycleRepresentative> current = ph.basis;
  out.basis = ph.basis;
  for (Index j = 0; j < current.size(); ++j) {
    EdgeProgramSpec spec{j, opt.weights, opt.integral, opt.use_column_basis};
    const EdgeProgram prog = build_edge_program(spec, current, k, ph);
    SparseColumn chain;
    Solution sol;
    CycleSolveStats st = detail::solve_edge_cycle(k, prog, current[j].chain, opt.weights, opt.integral, chain, sol);
    st.index = j;
    if (opt.replace) {
      current[j].chain = chain;
    }
    out.basis[j].chain = std::move(chain);
    out.stats.push_back(std::move(st));
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

/// Filtered-basis variant: each cycle may absorb any cycle of the complex
/// preceding its birth edge. Lifespans are recomputed and may change.
inline OptimizationResult optimize_basis_filtered(const FilteredComplex& k, const PersistenceResult& ph,
                                                  const EdgeOptions& opt) {
  OptimizationResult out;
  out.basis = ph.basis;
  for (Index j = 0; j < ph.basis.size(); ++j) {
    const EdgeProgram prog = build_filtered_program(j, ph.basis, k, ph, opt.weights, opt.integral);
    SparseColumn chain;
    Solution sol;
    CycleSolveStats st = detail::solve_edge_cycle(k, prog, ph.basis[j].chain, opt.weights, opt.integral, chain, sol);
    st.index = j;
    out.basis[j].lifespan = chain_lifespan(k, ph.dec2, chain);
    out.basis[j].chain = std::move(chain);
    out.stats.push_back(std::move(st));
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

}  // namespace cyclerep
