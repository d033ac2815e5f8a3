#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclerep/error.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/sparse_matrix.hpp"

namespace cyclerep {

using Vertex = std::uint32_t;
using DistanceMatrix = std::vector<std::vector<double>>;
using PointCloud = std::vector<std::vector<double>>;

struct Simplex {
  std::vector<Vertex> vertices;  // strictly increasing

  Index dimension() const { return vertices.size() - 1; }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

inline constexpr int kMaxDimension = 2;

/// A filtered simplicial complex through dimension 2 with a simplex-wise
/// refinement: simplices are ordered by birth, then dimension, then
/// lexicographically by vertex list. Immutable after construction.
class FilteredComplex {
 public:
  struct Input {
    Simplex simplex;
    Rational birth;
  };

  /// General filtered complex from an explicit simplex list. Every face must
  /// be listed, and births must be monotone along faces. Edge lengths default
  /// to the edge birth value.
  static FilteredComplex from_simplices(std::vector<Input> simplices,
                                        std::optional<std::vector<double>> edge_lengths = std::nullopt) {
    FilteredComplex k;
    Vertex max_vertex = 0;
    for (const auto& in : simplices) {
      const auto& vs = in.simplex.vertices;
      if (vs.empty() || vs.size() > kMaxDimension + 1) {
        throw ValidationError("from_simplices: simplex dimension outside 0..2");
      }
      for (std::size_t i = 1; i < vs.size(); ++i) {
        if (vs[i - 1] >= vs[i]) {
          throw ValidationError("from_simplices: vertex list not strictly increasing");
        }
      }
      if (sgn(in.birth) < 0) {
        throw ValidationError("from_simplices: negative birth");
      }
      max_vertex = std::max(max_vertex, vs.back());
    }
    k.num_points_ = simplices.empty() ? 0 : max_vertex + 1;
    for (auto& in : simplices) {
      const Index d = in.simplex.dimension();
      k.simplices_[d].push_back(std::move(in.simplex));
      k.births_[d].push_back(std::move(in.birth));
    }
    k.finalize();
    // faces and filtration property
    for (int d = 1; d <= kMaxDimension; ++d) {
      for (Index i = 0; i < k.size(d); ++i) {
        const auto& vs = k.simplices_[d][i].vertices;
        for (std::size_t omit = 0; omit < vs.size(); ++omit) {
          std::vector<Vertex> face;
          for (std::size_t t = 0; t < vs.size(); ++t) {
            if (t != omit) {
              face.push_back(vs[t]);
            }
          }
          auto f = k.find(face);
          if (!f) {
            throw ValidationError("from_simplices: missing face");
          }
          if (k.births_[d - 1][*f] > k.births_[d][i]) {
            throw ValidationError("from_simplices: face born after its coface");
          }
        }
      }
    }
    k.edge_length_.resize(k.size(1));
    if (edge_lengths) {
      if (edge_lengths->size() != k.size(1)) {
        throw ValidationError("from_simplices: edge length count mismatch");
      }
      // lengths are given in input order; remap through the sort permutation
      for (Index i = 0; i < k.size(1); ++i) {
        k.edge_length_[i] = (*edge_lengths)[k.input_position_[1][i]];
      }
    } else {
      for (Index i = 0; i < k.size(1); ++i) {
        k.edge_length_[i] = to_double(k.births_[1][i]);
      }
    }
    return k;
  }

  Index num_points() const { return num_points_; }
  Index size(int dim) const { return simplices_.at(dim).size(); }

  const Simplex& simplex(int dim, Index i) const { return simplices_.at(dim).at(i); }
  const std::vector<Simplex>& simplices(int dim) const { return simplices_.at(dim); }
  const Rational& birth(int dim, Index i) const { return births_.at(dim).at(i); }
  const std::vector<Rational>& births(int dim) const { return births_.at(dim); }

  /// Position in the total simplex-wise order over all dimensions.
  Index order_position(int dim, Index i) const { return order_.at(dim).at(i); }

  double edge_length(Index e) const { return edge_length_.at(e); }
  const std::vector<double>& edge_lengths() const { return edge_length_; }

  /// True when built from Euclidean coordinates; enables areas and
  /// surveyor's formula.
  bool has_geometry() const { return !points_.empty(); }
  const PointCloud& points() const { return points_; }

  /// Filtration keys are squared Euclidean distances (point-cloud input).
  bool squared_keys() const { return squared_keys_; }

  /// Filtration key in the units of the input dissimilarity.
  double display_value(const Rational& key) const {
    const double v = to_double(key);
    return squared_keys_ ? std::sqrt(v) : v;
  }

  std::optional<Index> vertex_index(Vertex v) const { return find({v}); }

  std::optional<Index> edge_index(Vertex u, Vertex v) const {
    if (u > v) {
      std::swap(u, v);
    }
    return find({u, v});
  }

  std::optional<Index> triangle_index(Vertex a, Vertex b, Vertex c) const {
    std::array<Vertex, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return find({t[0], t[1], t[2]});
  }

  std::optional<Index> find(const std::vector<Vertex>& vs) const {
    if (vs.empty() || vs.size() > kMaxDimension + 1) {
      return std::nullopt;
    }
    const auto& map = lookup_[vs.size() - 1];
    auto it = map.find(key_of(vs));
    if (it == map.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  /// Indices into S_{dim-1} of the faces of simplex (dim, i), in the order
  /// "omit vertex 0, omit vertex 1, ...".
  std::vector<Index> faces(int dim, Index i) const {
    const auto& vs = simplex(dim, i).vertices;
    std::vector<Index> out;
    out.reserve(vs.size());
    for (std::size_t omit = 0; omit < vs.size(); ++omit) {
      std::vector<Vertex> face;
      for (std::size_t t = 0; t < vs.size(); ++t) {
        if (t != omit) {
          face.push_back(vs[t]);
        }
      }
      out.push_back(*find(face));
    }
    return out;
  }

  /// Signed boundary column of simplex (dim, i) over S_{dim-1}.
  SparseColumn boundary_column(int dim, Index i) const {
    const auto f = faces(dim, i);
    std::vector<Entry> entries;
    for (std::size_t omit = 0; omit < f.size(); ++omit) {
      entries.push_back({f[omit], Rational(omit % 2 == 0 ? 1 : -1)});
    }
    return make_column(std::move(entries));
  }

  /// Sorted distinct birth values across all simplices.
  std::vector<Rational> filtration_values() const {
    std::vector<Rational> values;
    for (const auto& b : births_) {
      values.insert(values.end(), b.begin(), b.end());
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  }

 private:
  friend FilteredComplex build_vr_from_keys(Index, const std::vector<std::optional<Rational>>&,
                                            const std::vector<double>&, int);
  friend FilteredComplex build_vr(const DistanceMatrix&, std::optional<double>, int);
  friend FilteredComplex build_vr(const PointCloud&, std::optional<double>, int, bool);

  std::uint64_t key_of(const std::vector<Vertex>& vs) const {
    const std::uint64_t n = std::max<std::uint64_t>(num_points_, 1);
    std::uint64_t key = 0;
    for (Vertex v : vs) {
      key = key * n + v;
    }
    return key;
  }

  void finalize() {
    for (int d = 0; d <= kMaxDimension; ++d) {
      auto& s = simplices_[d];
      auto& b = births_[d];
      std::vector<Index> perm(s.size());
      std::iota(perm.begin(), perm.end(), Index{0});
      std::sort(perm.begin(), perm.end(), [&](Index x, Index y) {
        const int c = cmp(b[x], b[y]);
        if (c != 0) {
          return c < 0;
        }
        return s[x].vertices < s[y].vertices;
      });
      std::vector<Simplex> s2;
      std::vector<Rational> b2;
      s2.reserve(s.size());
      b2.reserve(s.size());
      for (Index p : perm) {
        s2.push_back(std::move(s[p]));
        b2.push_back(std::move(b[p]));
      }
      s = std::move(s2);
      b = std::move(b2);
      input_position_[d] = std::move(perm);
      lookup_[d].clear();
      lookup_[d].reserve(s.size());
      for (Index i = 0; i < s.size(); ++i) {
        if (!lookup_[d].emplace(key_of(s[i].vertices), i).second) {
          throw ValidationError("duplicate simplex");
        }
      }
    }
    struct Item {
      const Rational* birth;
      int dim;
      Index idx;
    };
    std::vector<Item> all;
    for (int d = 0; d <= kMaxDimension; ++d) {
      order_[d].assign(simplices_[d].size(), 0);
      for (Index i = 0; i < simplices_[d].size(); ++i) {
        all.push_back({&births_[d][i], d, i});
      }
    }
    std::sort(all.begin(), all.end(), [](const Item& x, const Item& y) {
      const int c = cmp(*x.birth, *y.birth);
      if (c != 0) {
        return c < 0;
      }
      if (x.dim != y.dim) {
        return x.dim < y.dim;
      }
      return x.idx < y.idx;  // per-dimension order is already lexicographic within a birth
    });
    for (Index p = 0; p < all.size(); ++p) {
      order_[all[p].dim][all[p].idx] = p;
    }
  }

  Index num_points_ = 0;
  std::array<std::vector<Simplex>, kMaxDimension + 1> simplices_;
  std::array<std::vector<Rational>, kMaxDimension + 1> births_;
  std::array<std::vector<Index>, kMaxDimension + 1> order_;
  std::array<std::vector<Index>, kMaxDimension + 1> input_position_;
  std::array<std::unordered_map<std::uint64_t, Index>, kMaxDimension + 1> lookup_;
  std::vector<double> edge_length_;
  PointCloud points_;
  bool squared_keys_ = false;
};

/// VR construction from exact edge keys (row-major upper triangle, u < v;
/// absent = beyond the threshold) and per-pair lengths.
inline FilteredComplex build_vr_from_keys(Index n, const std::vector<std::optional<Rational>>& keys,
                                          const std::vector<double>& lengths, int max_dim) {
  if (max_dim < 0 || max_dim > kMaxDimension) {
    throw ValidationError("build_vr: max_dim must be in 0..2");
  }
  auto pair_index = [n](Index u, Index v) { return u * n + v; };
  FilteredComplex k;
  k.num_points_ = n;
  for (Index v = 0; v < n; ++v) {
    k.simplices_[0].push_back({{static_cast<Vertex>(v)}});
    k.births_[0].emplace_back(0);
  }
  std::vector<double> edge_lengths;
  if (max_dim >= 1) {
    for (Index u = 0; u < n; ++u) {
      for (Index v = u + 1; v < n; ++v) {
        if (const auto& key = keys[pair_index(u, v)]) {
          k.simplices_[1].push_back({{static_cast<Vertex>(u), static_cast<Vertex>(v)}});
          k.births_[1].push_back(*key);
          edge_lengths.push_back(lengths[pair_index(u, v)]);
        }
      }
    }
  }
  if (max_dim >= 2) {
    std::vector<Index> nbrs;
    for (Index u = 0; u < n; ++u) {
      for (Index v = u + 1; v < n; ++v) {
        const auto& uv = keys[pair_index(u, v)];
        if (!uv) {
          continue;
        }
        for (Index w = v + 1; w < n; ++w) {
          const auto& uw = keys[pair_index(u, w)];
          const auto& vw = keys[pair_index(v, w)];
          if (!uw || !vw) {
            continue;
          }
          const Rational* b = &*uv;
          if (*uw > *b) b = &*uw;
          if (*vw > *b) b = &*vw;
          k.simplices_[2].push_back(
              {{static_cast<Vertex>(u), static_cast<Vertex>(v), static_cast<Vertex>(w)}});
          k.births_[2].push_back(*b);
        }
      }
    }
  }
  k.finalize();
  k.edge_length_.resize(k.size(1));
  for (Index i = 0; i < k.size(1); ++i) {
    k.edge_length_[i] = edge_lengths[k.input_position_[1][i]];
  }
  return k;
}

inline void validate_distance_matrix(const DistanceMatrix& d) {
  const Index n = d.size();
  for (Index i = 0; i < n; ++i) {
    if (d[i].size() != n) {
      throw ValidationError("distance matrix is not square (row " + std::to_string(i) + ")");
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double x = d[i][j];
      const std::string where = " at (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      if (!std::isfinite(x)) {
        throw ValidationError("non-finite dissimilarity" + where);
      }
      if (x < 0) {
        throw ValidationError("negative dissimilarity" + where);
      }
      if (i == j && x != 0) {
        throw ValidationError("nonzero diagonal" + where);
      }
      if (x != d[j][i]) {
        throw ValidationError("asymmetric dissimilarity" + where);
      }
    }
  }
}

/// Vietoris-Rips filtration of a dissimilarity matrix. Edge {u,v} is born at
/// D[u][v] (converted exactly), triangles at the max of their edges.
inline FilteredComplex build_vr(const DistanceMatrix& d, std::optional<double> max_eps = std::nullopt,
                                int max_dim = kMaxDimension) {
  validate_distance_matrix(d);
  const Index n = d.size();
  std::optional<Rational> threshold;
  if (max_eps && std::isfinite(*max_eps)) {
    threshold = rational_from_double(*max_eps);
  }
  std::vector<std::optional<Rational>> keys(n * n);
  std::vector<double> lengths(n * n, 0.0);
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      Rational key = rational_from_double(d[u][v]);
      if (!threshold || key <= *threshold) {
        keys[u * n + v] = std::move(key);
        lengths[u * n + v] = d[u][v];
      }
    }
  }
  return build_vr_from_keys(n, keys, lengths, max_dim);
}

/// Vietoris-Rips filtration of a Euclidean point cloud. The exact squared
/// distance is the filtration key; lengths are its square root.
inline FilteredComplex build_vr(const PointCloud& points, std::optional<double> max_eps, int max_dim,
                                bool /*euclidean*/) {
  const Index n = points.size();
  const Index dim = n == 0 ? 0 : points.front().size();
  std::vector<std::vector<Rational>> coords(n);
  for (Index i = 0; i < n; ++i) {
    if (points[i].size() != dim) {
      throw ValidationError("point cloud rows have differing dimension (row " + std::to_string(i) + ")");
    }
    for (double x : points[i]) {
      coords[i].push_back(rational_from_double(x));
    }
  }
  std::optional<Rational> threshold;
  if (max_eps && std::isfinite(*max_eps)) {
    if (*max_eps < 0) {
      throw ValidationError("max_eps must be nonnegative");
    }
    Rational e = rational_from_double(*max_eps);
    threshold = e * e;
  }
  std::vector<std::optional<Rational>> keys(n * n);
  std::vector<double> lengths(n * n, 0.0);
  Rational diff;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      Rational sq(0);
      for (Index c = 0; c < dim; ++c) {
        diff = coords[u][c] - coords[v][c];
        sq += diff * diff;
      }
      if (!threshold || sq <= *threshold) {
        lengths[u * n + v] = std::sqrt(to_double(sq));
        keys[u * n + v] = std::move(sq);
      }
    }
  }
  FilteredComplex k = build_vr_from_keys(n, keys, lengths, max_dim);
  k.points_ = points;
  k.squared_keys_ = true;
  return k;
}

inline FilteredComplex build_vr_points(const PointCloud& points, std::optional<double> max_eps = std::nullopt,
                                       int max_dim = kMaxDimension) {
  return build_vr(points, max_eps, max_dim, true);
}

/// Boundary matrix of dimension n (1 or 2): columns S_n, rows S_{n-1}, both in
/// filtration order; entry (-1)^i at the face omitting vertex i.
inline SparseMatrix boundary_matrix(const FilteredComplex& k, int n) {
  if (n < 1 || n > kMaxDimension) {
    throw ValidationError("boundary_matrix: dimension must be 1 or 2");
  }
  SparseMatrix m(k.size(n - 1), k.size(n));
  for (Index j = 0; j < k.size(n); ++j) {
    m.set_column(j, k.boundary_column(n, j));
  }
  return m;
}

/// Heron's formula (Kahan's stable form) on side lengths.
inline double heron_area(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  a = s[0];
  b = s[1];
  c = s[2];
  if (c < 0 || !std::isfinite(a)) {
    throw AreaUndefinedError("heron_area: invalid side lengths");
  }
  const double excess = a - (b + c);
  if (excess > 4 * std::numeric_limits<double>::epsilon() * a) {
    throw AreaUndefinedError("heron_area: side lengths violate the triangle inequality");
  }
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return p <= 0 ? 0.0 : 0.25 * std::sqrt(p);
}

inline double triangle_area(const FilteredComplex& k, Index triangle) {
  const auto f = k.faces(2, triangle);
  return heron_area(k.edge_length(f[0]), k.edge_length(f[1]), k.edge_length(f[2]));
}

/// Smallest r at which some vertex is within r of all others; VR homology in
/// positive dimensions vanishes from there on.
inline double enclosing_radius(const DistanceMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : d) {
    best = std::min(best, *std::max_element(row.begin(), row.end()));
  }
  return best;
}

inline DistanceMatrix euclidean_distances(const PointCloud& points) {
  const Index n = points.size();
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      double s = 0;
      for (Index c = 0; c < points[u].size(); ++c) {
        const double t = points[u][c] - points[v][c];
        s += t * t;
      }
      d[u][v] = d[v][u] = std::sqrt(s);
    }
  }
  return d;
}

}  // namespace cyclerep
