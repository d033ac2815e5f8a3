#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cyclerep/complex.hpp"
#include "cyclerep/edge_opt.hpp"
#include "cyclerep/error.hpp"
#include "cyclerep/lp.hpp"
#include "cyclerep/persistence.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/sparse_matrix.hpp"

namespace cyclerep {

enum class SlicingStrategy { ZeroOut, BuildAll, BuildPart };

inline const char* to_string(SlicingStrategy s) {
  switch (s) {
    case SlicingStrategy::ZeroOut:
      return "zero-out";
    case SlicingStrategy::BuildAll:
      return "build-all";
    case SlicingStrategy::BuildPart:
      return "build-part";
  }
  return "unknown";
}

inline SlicingStrategy parse_slicing_strategy(const std::string& s) {
  if (s == "zero-out") return SlicingStrategy::ZeroOut;
  if (s == "build-all") return SlicingStrategy::BuildAll;
  if (s == "build-part") return SlicingStrategy::BuildPart;
  throw ValidationError("unknown slicing strategy '" + s + "'");
}

/// Edges strictly after sigma (born no later than tau) and triangles strictly
/// before tau (born no earlier than sigma), plus tau. Both ascending.
struct FSets {
  std::vector<Index> edges;
  std::vector<Index> triangles;
};

inline FSets compute_f_sets(const IntervalPair& pair, const FilteredComplex& k) {
  if (!pair.death_simplex) {
    throw ValidationError("compute_f_sets: interval has no death simplex");
  }
  const Index sigma = pair.birth_simplex;
  const Index tau = *pair.death_simplex;
  const Rational& b = k.birth(1, sigma);
  const Rational& d = k.birth(2, tau);
  if (!(b < d)) {
    throw ValidationError("compute_f_sets: degenerate pair with equal births");
  }
  FSets f;
  for (Index e = sigma + 1; e < k.size(1) && k.birth(1, e) <= d; ++e) {
    f.edges.push_back(e);
  }
  for (Index t = 0; t < tau; ++t) {
    if (k.birth(2, t) >= b) {
      f.triangles.push_back(t);
    }
  }
  f.triangles.push_back(tau);
  return f;
}

/// Constraint block with its column labels. Under zero-out the shape is the
/// full boundary matrix and excluded entries are zero.
struct SlicedBoundary {
  SparseMatrix matrix;
  std::vector<Index> column_triangles;  // column -> triangle
  Index tau_column = 0;
};

inline SlicedBoundary slice_boundary(SlicingStrategy strategy, const FilteredComplex& k,
                                     const SparseMatrix* boundary2, const FSets& f, Index tau) {
  SlicedBoundary out;
  switch (strategy) {
    case SlicingStrategy::ZeroOut: {
      if (!boundary2) {
        throw ValidationError("slice_boundary: zero-out needs the full boundary matrix");
      }
      std::vector<bool> keep_row(k.size(1), false);
      std::vector<bool> keep_col(k.size(2), false);
      for (Index e : f.edges) keep_row[e] = true;
      for (Index t : f.triangles) keep_col[t] = true;
      out.matrix = SparseMatrix(boundary2->rows(), boundary2->cols());
      for (Index t = 0; t < boundary2->cols(); ++t) {
        if (!keep_col[t]) {
          continue;
        }
        SparseColumn col;
        for (const auto& e : boundary2->column(t)) {
          if (keep_row[e.row]) {
            col.push_back(e);
          }
        }
        out.matrix.set_column(t, std::move(col));
      }
      out.column_triangles = all_indices(k.size(2));
      out.tau_column = tau;
      break;
    }
    case SlicingStrategy::BuildAll: {
      if (!boundary2) {
        throw ValidationError("slice_boundary: build-all needs the full boundary matrix");
      }
      out.matrix = slice(*boundary2, f.edges, f.triangles);
      out.column_triangles = f.triangles;
      out.tau_column = f.triangles.size() - 1;
      break;
    }
    case SlicingStrategy::BuildPart: {
      std::vector<Index> row_of(k.size(1), kNoIndex);
      for (Index r = 0; r < f.edges.size(); ++r) {
        row_of[f.edges[r]] = r;
      }
      out.matrix = SparseMatrix(f.edges.size(), f.triangles.size());
      for (Index c = 0; c < f.triangles.size(); ++c) {
        std::vector<Entry> col;
        for (const auto& e : k.boundary_column(2, f.triangles[c])) {
          if (row_of[e.row] != kNoIndex) {
            col.push_back({row_of[e.row], e.value});
          }
        }
        out.matrix.set_column(c, make_column(std::move(col)));
      }
      out.column_triangles = f.triangles;
      out.tau_column = f.triangles.size() - 1;
      break;
    }
  }
  return out;
}

inline Rational triangle_weight(const FilteredComplex& k, Index t, WeightMode mode) {
  switch (mode) {
    case WeightMode::Uniform:
      return Rational(1);
    case WeightMode::Area:
      return rational_from_double(triangle_area(k, t));
    case WeightMode::Length:
      break;
  }
  throw ConfigurationError("length weights apply to edge programs only");
}

inline void require_triangle_weights(const FilteredComplex& k, WeightMode mode) {
  if (mode == WeightMode::Area && !k.has_geometry()) {
    throw ConfigurationError("area weights need a complex built from Euclidean coordinates");
  }
  if (mode == WeightMode::Length) {
    throw ConfigurationError("length weights apply to edge programs only");
  }
}

/// sum_t W_t |v_t| over a 2-chain.
inline Rational weighted_volume(const FilteredComplex& k, const SparseColumn& volume, WeightMode mode) {
  Rational total(0);
  for (const auto& e : volume) {
    total += triangle_weight(k, e.row, mode) * abs(e.value);
  }
  return total;
}

/// v+ and v- for every column except tau; v_tau = 1 is substituted into the
/// right-hand side and its weight into the objective offset.
struct TriangleProgram {
  LinearProgram lp;
  std::vector<Index> variable_triangles;  // one per split pair
  Index tau = 0;
};

inline TriangleProgram build_triangle_program(const SlicedBoundary& sb, const FilteredComplex& k,
                                              WeightMode weights, bool integral) {
  require_triangle_weights(k, weights);
  TriangleProgram prog;
  prog.tau = sb.column_triangles.at(sb.tau_column);
  std::vector<Index> cols;
  for (Index c = 0; c < sb.matrix.cols(); ++c) {
    if (c != sb.tau_column) {
      cols.push_back(c);
    }
  }
  const Index nv = cols.size();
  auto& lp = prog.lp;
  lp.constraints = SparseMatrix(sb.matrix.rows(), 2 * nv);
  lp.objective.assign(2 * nv, Rational(0));
  lp.integrality.assign(2 * nv, integral);
  for (Index v = 0; v < nv; ++v) {
    const Index t = sb.column_triangles[cols[v]];
    const SparseColumn& col = sb.matrix.column(cols[v]);
    // Zeroed-out columns keep weight 0 so presolve fixes them without
    // computing areas of triangles the program never uses.
    const Rational w = col.empty() ? Rational(0) : triangle_weight(k, t, weights);
    lp.constraints.set_column(v, col);
    lp.constraints.set_column(nv + v, scaled(col, Rational(-1)));
    lp.objective[v] = w;
    lp.objective[nv + v] = w;
    prog.variable_triangles.push_back(t);
  }
  lp.rhs.assign(sb.matrix.rows(), Rational(0));
  for (const auto& e : sb.matrix.column(sb.tau_column)) {
    lp.rhs[e.row] = -e.value;
  }
  lp.objective_offset = triangle_weight(k, prog.tau, weights);
  return prog;
}

/// The 2-chain v with v_tau = 1 read back from a solution.
inline SparseColumn volume_from_solution(const TriangleProgram& prog, const std::vector<Rational>& x) {
  const Index nv = prog.variable_triangles.size();
  std::vector<Entry> out{{prog.tau, Rational(1)}};
  for (Index v = 0; v < nv; ++v) {
    Rational val = x[v] - x[nv + v];
    if (sgn(val) != 0) {
      out.push_back({prog.variable_triangles[v], std::move(val)});
    }
  }
  return make_column(std::move(out));
}

/// Reference volume from exact elimination on the F1 rows: tau's column
/// reduced against the earlier F-hat columns. Used as the unoptimised
/// baseline for cost ratios.
inline SparseColumn reduction_volume(const FilteredComplex& k, const FSets& f) {
  std::vector<Index> row_of(k.size(1), kNoIndex);
  for (Index r = 0; r < f.edges.size(); ++r) {
    row_of[f.edges[r]] = r;
  }
  auto restricted = [&](Index t) {
    std::vector<Entry> col;
    for (const auto& e : k.boundary_column(2, t)) {
      if (row_of[e.row] != kNoIndex) {
        col.push_back({row_of[e.row], e.value});
      }
    }
    return make_column(std::move(col));
  };
  std::vector<SparseColumn> r;
  std::vector<SparseColumn> v;
  std::vector<Index> owner(f.edges.size(), kNoIndex);
  SparseColumn scratch;
  Rational factor;
  for (Index c = 0; c < f.triangles.size(); ++c) {
    SparseColumn rc = restricted(f.triangles[c]);
    SparseColumn vc{{f.triangles[c], Rational(1)}};
    while (!rc.empty() && owner[rc.back().row] != kNoIndex) {
      const Index o = owner[rc.back().row];
      factor = -rc.back().value / r[o].back().value;
      scaled_add_in_place(rc, r[o], factor, scratch);
      scaled_add_in_place(vc, v[o], factor, scratch);
    }
    if (c + 1 == f.triangles.size()) {
      if (!rc.empty()) {
        throw InternalError("reduction_volume: tau's boundary is not reducible on F1");
      }
      return vc;
    }
    if (!rc.empty()) {
      owner[rc.back().row] = r.size();
    }
    r.push_back(std::move(rc));
    v.push_back(std::move(vc));
  }
  throw InternalError("reduction_volume: empty triangle set");
}

struct TriangleOptions {
  WeightMode weights = WeightMode::Uniform;
  bool integral = false;
  SlicingStrategy strategy = SlicingStrategy::BuildPart;
};

struct TriangleResult {
  std::vector<CycleRepresentative> basis;  // aligned with the barcode
  std::vector<std::optional<SparseColumn>> volumes;  // finite bars only
  std::vector<std::optional<CycleSolveStats>> stats;
  std::vector<Solution> solutions;
};

/// Solves the volume program for one finite interval.
inline CycleSolveStats optimize_interval(const FilteredComplex& k, const PersistenceResult& ph,
                                         const IntervalPair& pair, const TriangleOptions& opt,
                                         SparseColumn& volume_out, SparseColumn& cycle_out, Solution& sol_out) {
  const FSets f = compute_f_sets(pair, k);
  const SlicedBoundary sb = slice_boundary(opt.strategy, k, &ph.boundary2, f, *pair.death_simplex);
  const TriangleProgram prog = build_triangle_program(sb, k, opt.weights, opt.integral);
  CycleSolveStats st;
  st.num_constraints = prog.lp.num_constraints();
  st.num_variables = prog.lp.num_variables();
  st.original_cost = weighted_volume(k, reduction_volume(k, f), opt.weights);
  const auto start = std::chrono::steady_clock::now();
  sol_out = opt.integral ? solve_mip(prog.lp) : solve_lp(prog.lp);
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  st.status = sol_out.status;
  st.pivots = sol_out.pivots;
  st.branch_nodes = sol_out.branch_nodes;
  st.relaxation_cost = sol_out.relaxation_cost;
  if (!sol_out.optimal()) {
    throw InternalError(std::string("volume program ") + to_string(sol_out.status));
  }
  volume_out = volume_from_solution(prog, sol_out.x);
  cycle_out = ph.boundary2.multiply(volume_out);
  if (sgn(coefficient(cycle_out, pair.birth_simplex)) == 0) {
    throw InternalError("volume boundary misses the birth edge");
  }
  st.optimal_cost = sol_out.cost;
  return st;
}

/// Optimal volumes for finite bars; essential bars keep their
/// reduction representatives.
inline TriangleResult optimize_basis_triangle(const FilteredComplex& k, const PersistenceResult& ph,
                                              const TriangleOptions& opt) {
  require_triangle_weights(k, opt.weights);
  TriangleResult out;
  out.basis = ph.basis;
  out.volumes.resize(ph.barcode.size());
  out.stats.resize(ph.barcode.size());
  out.solutions.resize(ph.barcode.size());
  for (Index i = 0; i < ph.barcode.size(); ++i) {
    const auto& bar = ph.barcode[i];
    if (!bar.is_finite()) {
      continue;
    }
    SparseColumn volume;
    SparseColumn cycle;
    CycleSolveStats st = optimize_interval(k, ph, bar, opt, volume, cycle, out.solutions[i]);
    st.index = i;
    out.basis[i].chain = std::move(cycle);
    out.volumes[i] = std::move(volume);
    out.stats[i] = std::move(st);
  }
  return out;
}

}  // namespace cyclerep
