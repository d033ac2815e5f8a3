#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cyclerep/error.hpp"
#include "cyclerep/rational.hpp"

namespace cyclerep {

using Index = std::size_t;

/// Sentinel for "no index" in index maps.
inline constexpr Index kNoIndex = static_cast<Index>(-1);

struct Entry {
  Index row;
  Rational value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sparse vector over Q: entries sorted by strictly increasing row, no zeros.
using SparseColumn = std::vector<Entry>;

namespace detail {

inline void scaled_add_into(SparseColumn& out, const SparseColumn& a, const SparseColumn& b,
                            const Rational& factor) {
  out.clear();
  out.reserve(a.size() + b.size());
  Rational tmp;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->row < ib->row)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->row < ia->row) {
      mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), ib->value.get_mpq_t());
      out.push_back({ib->row, tmp});
      ++ib;
    } else {
      mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), ib->value.get_mpq_t());
      mpq_add(tmp.get_mpq_t(), tmp.get_mpq_t(), ia->value.get_mpq_t());
      if (sgn(tmp) != 0) {
        out.push_back({ia->row, tmp});
      }
      ++ia;
      ++ib;
    }
  }
}

}  // namespace detail

/// a + factor * b.
inline SparseColumn scaled_add(const SparseColumn& a, const SparseColumn& b, const Rational& factor) {
  SparseColumn out;
  detail::scaled_add_into(out, a, b, factor);
  return out;
}

/// In-place a += factor * b, reusing `scratch` as the merge buffer.
inline void scaled_add_in_place(SparseColumn& a, const SparseColumn& b, const Rational& factor,
                                SparseColumn& scratch) {
  detail::scaled_add_into(scratch, a, b, factor);
  a.swap(scratch);
}

inline SparseColumn scaled(const SparseColumn& a, const Rational& factor) {
  if (sgn(factor) == 0) {
    return {};
  }
  SparseColumn out = a;
  for (auto& e : out) {
    e.value *= factor;
  }
  return out;
}

/// Coefficient at `row`, or zero.
inline Rational coefficient(const SparseColumn& col, Index row) {
  auto it = std::lower_bound(col.begin(), col.end(), row,
                             [](const Entry& e, Index r) { return e.row < r; });
  if (it != col.end() && it->row == row) {
    return it->value;
  }
  return Rational(0);
}

inline std::optional<Index> low(const SparseColumn& col) {
  if (col.empty()) {
    return std::nullopt;
  }
  return col.back().row;
}

/// Builds a canonical column from unsorted (row, value) pairs, summing duplicates.
inline SparseColumn make_column(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row < b.row; });
  SparseColumn out;
  for (auto& e : entries) {
    if (!out.empty() && out.back().row == e.row) {
      out.back().value += e.value;
      if (sgn(out.back().value) == 0) {
        out.pop_back();
      }
    } else if (sgn(e.value) != 0) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

/// Column-major sparse matrix over Q.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols) : rows_(rows), columns_(cols) {}

  static SparseMatrix identity(Index n) {
    SparseMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      m.columns_[i].push_back({i, Rational(1)});
    }
    return m;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense) {
    const Index rows = dense.size();
    const Index cols = rows == 0 ? 0 : dense.front().size();
    SparseMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      if (dense[i].size() != cols) {
        throw ValidationError("from_dense: ragged rows");
      }
      for (Index j = 0; j < cols; ++j) {
        if (sgn(dense[i][j]) != 0) {
          m.columns_[j].push_back({i, dense[i][j]});
        }
      }
    }
    return m;
  }

  Index rows() const { return rows_; }
  Index cols() const { return columns_.size(); }

  const SparseColumn& column(Index j) const {
    check_col(j);
    return columns_[j];
  }

  void set_column(Index j, SparseColumn col) {
    check_col(j);
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (col[k].row >= rows_) {
        throw IndexError("set_column: row index out of range");
      }
      if (sgn(col[k].value) == 0) {
        throw ValidationError("set_column: explicit zero entry");
      }
      if (k > 0 && col[k - 1].row >= col[k].row) {
        throw ValidationError("set_column: rows not strictly increasing");
      }
    }
    columns_[j] = std::move(col);
  }

  void append_column(SparseColumn col) {
    columns_.emplace_back();
    set_column(columns_.size() - 1, std::move(col));
  }

  Rational at(Index i, Index j) const {
    if (i >= rows_) {
      throw IndexError("at: row index out of range");
    }
    return coefficient(column(j), i);
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns_) {
      n += c.size();
    }
    return n;
  }

  bool is_zero() const { return nonzeros() == 0; }

  std::vector<std::vector<Rational>> to_dense() const {
    std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols()));
    for (Index j = 0; j < cols(); ++j) {
      for (const auto& e : columns_[j]) {
        d[e.row][j] = e.value;
      }
    }
    return d;
  }

  /// this * v for a sparse vector v indexed by columns.
  SparseColumn multiply(const SparseColumn& v) const {
    std::vector<Entry> acc;
    for (const auto& e : v) {
      for (const auto& a : column(e.row)) {
        acc.push_back({a.row, a.value * e.value});
      }
    }
    return make_column(std::move(acc));
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) {
      throw ValidationError("matrix product: dimension mismatch");
    }
    SparseMatrix out(a.rows(), b.cols());
    for (Index j = 0; j < b.cols(); ++j) {
      out.columns_[j] = a.multiply(b.columns_[j]);
    }
    return out;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void check_col(Index j) const {
    if (j >= columns_.size()) {
      throw IndexError("column index out of range");
    }
  }

  Index rows_ = 0;
  std::vector<SparseColumn> columns_;
};

/// Submatrix with the given rows and columns, re-indexed in the order given.
inline SparseMatrix slice(const SparseMatrix& m, std::span<const Index> rows,
                          std::span<const Index> cols) {
  constexpr Index absent = static_cast<Index>(-1);
  std::vector<Index> row_map(m.rows(), absent);
  for (Index k = 0; k < rows.size(); ++k) {
    if (rows[k] >= m.rows()) {
      throw IndexError("slice: row index out of range");
    }
    row_map[rows[k]] = k;
  }
  SparseMatrix out(rows.size(), cols.size());
  for (Index k = 0; k < cols.size(); ++k) {
    if (cols[k] >= m.cols()) {
      throw IndexError("slice: column index out of range");
    }
    std::vector<Entry> entries;
    for (const auto& e : m.column(cols[k])) {
      if (row_map[e.row] != absent) {
        entries.push_back({row_map[e.row], e.value});
      }
    }
    out.set_column(k, make_column(std::move(entries)));
  }
  return out;
}

/// All indices 0..n-1; convenience for `slice`.
inline std::vector<Index> all_indices(Index n) {
  std::vector<Index> v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = i;
  }
  return v;
}

/// Rank over Q by exact column reduction on pivot rows.
inline Index rank(const SparseMatrix& m) {
  constexpr Index absent = static_cast<Index>(-1);
  std::vector<Index> pivot_owner(m.rows(), absent);
  std::vector<SparseColumn> reduced;
  reduced.reserve(m.cols());
  SparseColumn scratch;
  Index r = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    SparseColumn col = m.column(j);
    while (!col.empty()) {
      const Index p = col.back().row;
      const Index owner = pivot_owner[p];
      if (owner == absent) {
        break;
      }
      const SparseColumn& piv = reduced[owner];
      Rational factor = -col.back().value / piv.back().value;
      scaled_add_in_place(col, piv, factor, scratch);
    }
    if (!col.empty()) {
      pivot_owner[col.back().row] = reduced.size();
      reduced.push_back(std::move(col));
      ++r;
    }
  }
  return r;
}

inline Index nullity(const SparseMatrix& m) { return m.cols() - rank(m); }

}  // namespace cyclerep
