#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cyclerep/complex.hpp"
#include "cyclerep/error.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/sparse_matrix.hpp"

namespace cyclerep {

/// R = D V with R reduced and V invertible upper triangular.
struct Decomposition {
  SparseMatrix reduced;    // R
  SparseMatrix transform;  // V
  std::vector<Index> low;  // column -> pivot row, kNoIndex for zero columns
  std::vector<Index> column_with_low;  // row -> column whose low it is, or kNoIndex

  bool is_zero_column(Index j) const { return low.at(j) == kNoIndex; }
};

/// Standard left-to-right column reduction, tracking V.
inline Decomposition reduce(const SparseMatrix& d) {
  const Index n = d.cols();
  std::vector<SparseColumn> r(n);
  std::vector<SparseColumn> v(n);
  Decomposition out;
  out.low.assign(n, kNoIndex);
  out.column_with_low.assign(d.rows(), kNoIndex);
  SparseColumn scratch;
  Rational factor;
  for (Index j = 0; j < n; ++j) {
    r[j] = d.column(j);
    v[j] = {{j, Rational(1)}};
    while (!r[j].empty()) {
      const Index p = r[j].back().row;
      const Index k = out.column_with_low[p];
      if (k == kNoIndex) {
        break;
      }
      factor = -r[j].back().value / r[k].back().value;
      scaled_add_in_place(r[j], r[k], factor, scratch);
      scaled_add_in_place(v[j], v[k], factor, scratch);
    }
    if (!r[j].empty()) {
      const Index p = r[j].back().row;
      out.low[j] = p;
      out.column_with_low[p] = j;
    }
  }
  out.reduced = SparseMatrix(d.rows(), n);
  out.transform = SparseMatrix(n, n);
  for (Index j = 0; j < n; ++j) {
    out.reduced.set_column(j, std::move(r[j]));
    out.transform.set_column(j, std::move(v[j]));
  }
  return out;
}

/// Indices of nonzero columns of a reduced matrix.
inline std::vector<Index> column_basis_indices(const Decomposition& dec) {
  std::vector<Index> out;
  for (Index j = 0; j < dec.low.size(); ++j) {
    if (dec.low[j] != kNoIndex) {
      out.push_back(j);
    }
  }
  return out;
}

struct IntervalPair {
  int dimension = 1;
  Index birth_simplex = 0;
  std::optional<Index> death_simplex;
  Rational birth_value;
  std::optional<Rational> death_value;

  bool is_finite() const { return death_simplex.has_value(); }
  friend bool operator==(const IntervalPair&, const IntervalPair&) = default;
};

/// [birth, death); death absent means infinity.
struct Lifespan {
  Rational birth;
  std::optional<Rational> death;

  friend bool operator==(const Lifespan&, const Lifespan&) = default;
};

/// a <= b on death values where nullopt is infinity.
inline bool death_le(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!b) {
    return true;
  }
  if (!a) {
    return false;
  }
  return *a <= *b;
}

struct CycleRepresentative {
  SparseColumn chain;  // over S_1
  Lifespan lifespan;
  std::optional<IntervalPair> source_pair;
};

/// Everything downstream needs from a persistence computation in dimension 1.
struct PersistenceResult {
  SparseMatrix boundary1;
  SparseMatrix boundary2;
  Decomposition dec1;
  Decomposition dec2;
  std::vector<IntervalPair> pairs;    // all of Gamma, including zero-length pairs
  std::vector<IntervalPair> barcode;  // strict finite pairs and essential bars, sorted
  std::vector<CycleRepresentative> basis;  // aligned with barcode
};

inline bool barcode_less(const IntervalPair& a, const IntervalPair& b) {
  const int c = cmp(a.birth_value, b.birth_value);
  if (c != 0) {
    return c < 0;
  }
  if (a.death_value != b.death_value) {
    if (!a.death_value) return false;
    if (!b.death_value) return true;
    return *a.death_value < *b.death_value;
  }
  return a.birth_simplex < b.birth_simplex;
}

/// Dimension-1 pairs of Gamma (all of them, including zero-length) plus
/// essential classes; the barcode keeps only strict intervals.
inline std::vector<IntervalPair> extract_pairs(const FilteredComplex& k, const Decomposition& dec1,
                                               const Decomposition& dec2) {
  std::vector<IntervalPair> out;
  for (Index tau = 0; tau < dec2.low.size(); ++tau) {
    if (dec2.low[tau] == kNoIndex) {
      continue;
    }
    const Index sigma = dec2.low[tau];
    out.push_back({1, sigma, tau, k.birth(1, sigma), k.birth(2, tau)});
  }
  for (Index sigma = 0; sigma < dec1.low.size(); ++sigma) {
    const bool positive = dec1.low[sigma] == kNoIndex;
    const bool killed = sigma < dec2.column_with_low.size() && dec2.column_with_low[sigma] != kNoIndex;
    if (positive && !killed) {
      out.push_back({1, sigma, std::nullopt, k.birth(1, sigma), std::nullopt});
    }
  }
  return out;
}

inline std::vector<IntervalPair> extract_barcode(const FilteredComplex& k, const Decomposition& dec1,
                                                 const Decomposition& dec2) {
  std::vector<IntervalPair> bars;
  for (auto& p : extract_pairs(k, dec1, dec2)) {
    if (!p.death_value || p.birth_value < *p.death_value) {
      bars.push_back(std::move(p));
    }
  }
  std::sort(bars.begin(), bars.end(), barcode_less);
  return bars;
}

/// Finite bars take R2[:, tau]; essential bars take V1[:, sigma]. No rescaling.
inline std::vector<CycleRepresentative> initial_cycle_basis(const std::vector<IntervalPair>& barcode,
                                                            const Decomposition& dec1,
                                                            const Decomposition& dec2) {
  std::vector<CycleRepresentative> out;
  out.reserve(barcode.size());
  for (const auto& bar : barcode) {
    CycleRepresentative rep;
    rep.chain = bar.death_simplex ? dec2.reduced.column(*bar.death_simplex)
                                  : dec1.transform.column(bar.birth_simplex);
    rep.lifespan = {bar.birth_value, bar.death_value};
    rep.source_pair = bar;
    out.push_back(std::move(rep));
  }
  return out;
}

inline PersistenceResult compute_persistence(const FilteredComplex& k) {
  PersistenceResult res;
  res.boundary1 = boundary_matrix(k, 1);
  res.boundary2 = boundary_matrix(k, 2);
  res.dec1 = reduce(res.boundary1);
  res.dec2 = reduce(res.boundary2);
  res.pairs = extract_pairs(k, res.dec1, res.dec2);
  res.barcode = extract_barcode(k, res.dec1, res.dec2);
  res.basis = initial_cycle_basis(res.barcode, res.dec1, res.dec2);
  return res;
}

/// First filtration value at which every edge of the chain is present.
inline Rational chain_birth(const FilteredComplex& k, const SparseColumn& chain) {
  Rational b(0);
  for (const auto& e : chain) {
    if (k.birth(1, e.row) > b) {
      b = k.birth(1, e.row);
    }
  }
  return b;
}

/// First filtration value at which the chain is a boundary, or nullopt if it
/// never is. The nonzero R2 columns have distinct lows, so the expansion of
/// the chain in them is unique; the columns used are a prefix-closed witness.
inline std::optional<Rational> chain_death(const FilteredComplex& k, const Decomposition& dec2,
                                           const SparseColumn& chain) {
  SparseColumn c = chain;
  SparseColumn scratch;
  Rational factor;
  std::optional<Rational> death;
  while (!c.empty()) {
    const Index p = c.back().row;
    const Index t = p < dec2.column_with_low.size() ? dec2.column_with_low[p] : kNoIndex;
    if (t == kNoIndex) {
      return std::nullopt;
    }
    const SparseColumn& col = dec2.reduced.column(t);
    factor = -c.back().value / col.back().value;
    scaled_add_in_place(c, col, factor, scratch);
    if (!death || k.birth(2, t) > *death) {
      death = k.birth(2, t);
    }
  }
  if (!death) {
    // the zero chain is a boundary from the start
    return Rational(0);
  }
  return death;
}

inline Lifespan chain_lifespan(const FilteredComplex& k, const Decomposition& dec2, const SparseColumn& chain) {
  return {chain_birth(k, chain), chain_death(k, dec2, chain)};
}

/// Sparse matrix-vector check that a 1-chain is a cycle.
inline bool is_cycle(const SparseMatrix& boundary1, const SparseColumn& chain) {
  return boundary1.multiply(chain).empty();
}

}  // namespace cyclerep
