#pragma once

// Small hand-checkable complexes shared by the unit tests and the acceptance
// binary.

#include <cmath>
#include <vector>

#include "cyclerep/cyclerep.hpp"

namespace fixtures {

using namespace cyclerep;

inline DistanceMatrix far_matrix(Index n, double far = 10.0) {
  DistanceMatrix d(n, std::vector<double>(n, far));
  for (Index i = 0; i < n; ++i) {
    d[i][i] = 0;
  }
  return d;
}

inline void set(DistanceMatrix& d, Index u, Index v, double x) { d[u][v] = d[v][u] = x; }

// Five vertices a..e = 0..4. A triangle c,d,e at 1; a 4-cycle a-b-c-d
// completed at 2; edges to e at 3 fill three triangles a-b-e, a-d-e, b-c-e.
// The bar [2,3) is born at edge b-c and killed by triangle b-c-e.
inline constexpr Vertex A = 0, B = 1, C = 2, D = 3, E = 4;
inline constexpr double kHubSquareMaxEps = 5.0;

inline DistanceMatrix hub_square_distances() {
  DistanceMatrix d = far_matrix(5);
  set(d, C, D, 1);
  set(d, C, E, 1);
  set(d, D, E, 1);
  set(d, A, B, 2);
  set(d, A, D, 2);
  set(d, B, C, 2);
  set(d, A, E, 3);
  set(d, B, E, 3);
  return d;
}

inline FilteredComplex hub_square() { return build_vr(hub_square_distances(), kHubSquareMaxEps); }

// Not a VR complex: the triangle 0-1-2 fills at 2, the loop 3-4-5 appears at
// 2 and the loop 3-4-6-5 at 3.
inline FilteredComplex two_loops() {
  std::vector<FilteredComplex::Input> s;
  for (Vertex v = 0; v < 7; ++v) {
    s.push_back({{{v}}, Rational(0)});
  }
  auto edge = [&](Vertex u, Vertex v, int b) { s.push_back({{{u, v}}, Rational(b)}); };
  edge(0, 1, 1);
  edge(1, 2, 1);
  edge(0, 2, 1);
  s.push_back({{{0, 1, 2}}, Rational(2)});
  edge(3, 4, 2);
  edge(4, 5, 2);
  edge(3, 5, 2);
  edge(4, 6, 3);
  edge(5, 6, 3);
  return FilteredComplex::from_simplices(std::move(s));
}

// Inner square 0-1-2-3 at 0, outer square 4-5-6-7 at 1, and an annulus of
// eight triangles joining them at 2.
inline DistanceMatrix annulus_distances() {
  DistanceMatrix d = far_matrix(8);
  set(d, 0, 1, 0);
  set(d, 1, 2, 0);
  set(d, 2, 3, 0);
  set(d, 0, 3, 0);
  set(d, 4, 5, 1);
  set(d, 5, 6, 1);
  set(d, 6, 7, 1);
  set(d, 4, 7, 1);
  for (Vertex i = 0; i < 4; ++i) {
    set(d, i, i + 4, 2);            // spokes
    set(d, i, (i + 1) % 4 + 4, 2);  // diagonals
  }
  return d;
}

inline FilteredComplex annulus() { return build_vr(annulus_distances(), 5.0); }

// A 5-cycle 0-1-2-3-4 with the chord 1-4; the only triangle is 0-1-4.
inline DistanceMatrix chorded_pentagon_distances() {
  DistanceMatrix d = far_matrix(5);
  set(d, 0, 1, 1);
  set(d, 1, 2, 1);
  set(d, 2, 3, 1);
  set(d, 3, 4, 1);
  set(d, 0, 4, 1);
  set(d, 1, 4, 1);
  return d;
}

inline FilteredComplex chorded_pentagon() { return build_vr(chorded_pentagon_distances(), 5.0); }

inline PointCloud unit_square_points() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

inline FilteredComplex unit_square() { return build_vr_points(unit_square_points()); }

inline FilteredComplex equilateral3() {
  DistanceMatrix d = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  return build_vr(d, 2.0);
}

/// Chain over S_1 from (u, v, coefficient) triples.
inline SparseColumn edge_chain(const FilteredComplex& k, std::vector<std::tuple<Vertex, Vertex, int>> terms) {
  std::vector<Entry> entries;
  for (auto [u, v, c] : terms) {
    const auto e = k.edge_index(u, v);
    if (!e) {
      throw std::logic_error("edge_chain: missing edge");
    }
    // orientation: the stored edge runs low -> high
    entries.push_back({*e, Rational(u < v ? c : -c)});
  }
  return make_column(std::move(entries));
}

}  // namespace fixtures
