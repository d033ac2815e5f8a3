#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclerep/complex.hpp"
#include "cyclerep/error.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/sparse_matrix.hpp"

namespace cyclerep {

enum class LossMode { EdgeUniform, EdgeLength, TriangleUniform, TriangleArea };

inline int loss_dimension(LossMode m) {
  return (m == LossMode::EdgeUniform || m == LossMode::EdgeLength) ? 1 : 2;
}

/// Weighted support size, exact. `dim` is the dimension of the chain.
inline Rational loss_exact(const SparseColumn& chain, int dim, LossMode mode, const FilteredComplex& k) {
  if (dim != loss_dimension(mode)) {
    throw ValidationError("loss: chain dimension does not match the loss mode");
  }
  Rational total(0);
  for (const auto& e : chain) {
    if (e.row >= k.size(dim)) {
      throw ValidationError("loss: chain index outside the complex");
    }
    switch (mode) {
      case LossMode::EdgeUniform:
      case LossMode::TriangleUniform:
        total += 1;
        break;
      case LossMode::EdgeLength:
        total += rational_from_double(k.edge_length(e.row));
        break;
      case LossMode::TriangleArea:
        if (!k.has_geometry()) {
          throw ConfigurationError("loss: area needs a complex built from coordinates");
        }
        total += rational_from_double(triangle_area(k, e.row));
        break;
    }
  }
  return total;
}

inline double loss(const SparseColumn& chain, int dim, LossMode mode, const FilteredComplex& k) {
  return to_double(loss_exact(chain, dim, mode, k));
}

/// Independent loops in the support: nullity of the boundary restricted to
/// the supporting edges.
inline Index loop_count(const SparseColumn& chain, const FilteredComplex& k) {
  SparseMatrix sub(k.size(0), chain.size());
  for (Index c = 0; c < chain.size(); ++c) {
    sub.set_column(c, k.boundary_column(1, chain[c].row));
  }
  return nullity(sub);
}

enum class CoeffClass { Pm1Zero, Integral, Fractional };

inline const char* to_string(CoeffClass c) {
  switch (c) {
    case CoeffClass::Pm1Zero:
      return "pm1-zero";
    case CoeffClass::Integral:
      return "integral";
    case CoeffClass::Fractional:
      return "fractional";
  }
  return "unknown";
}

inline CoeffClass classify_coefficients(const SparseColumn& chain) {
  CoeffClass c = CoeffClass::Pm1Zero;
  for (const auto& e : chain) {
    if (!is_integer(e.value)) {
      return CoeffClass::Fractional;
    }
    if (!is_unit_or_zero(e.value)) {
      c = CoeffClass::Integral;
    }
  }
  return c;
}

enum class SurveyorReason { Eligible, NotPlanar, EmptySupport, NotSingleCycle, SelfIntersecting };

inline const char* to_string(SurveyorReason r) {
  switch (r) {
    case SurveyorReason::Eligible:
      return "eligible";
    case SurveyorReason::NotPlanar:
      return "not-planar";
    case SurveyorReason::EmptySupport:
      return "empty-support";
    case SurveyorReason::NotSingleCycle:
      return "not-single-cycle";
    case SurveyorReason::SelfIntersecting:
      return "self-intersecting";
  }
  return "unknown";
}

struct SurveyorArea {
  std::optional<double> area;
  SurveyorReason reason = SurveyorReason::Eligible;
};

namespace detail {

struct QPoint {
  Rational x;
  Rational y;
};

inline int orientation(const QPoint& a, const QPoint& b, const QPoint& c) {
  return sgn((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

// c collinear with ab: is it inside the bounding box of ab?
inline bool on_segment(const QPoint& a, const QPoint& b, const QPoint& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(const QPoint& p1, const QPoint& p2, const QPoint& q1, const QPoint& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) {
    return true;
  }
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace detail

/// Shoelace area of the polygon traced by the support, when the support is a
/// single simple closed polygon in the plane.
inline SurveyorArea surveyor_area(const SparseColumn& chain, const FilteredComplex& k) {
  if (!k.has_geometry() || k.points().front().size() != 2) {
    return {std::nullopt, SurveyorReason::NotPlanar};
  }
  if (chain.empty()) {
    return {std::nullopt, SurveyorReason::EmptySupport};
  }
  std::map<Vertex, std::vector<Vertex>> adj;
  for (const auto& e : chain) {
    const auto& vs = k.simplex(1, e.row).vertices;
    adj[vs[0]].push_back(vs[1]);
    adj[vs[1]].push_back(vs[0]);
  }
  for (const auto& [v, nb] : adj) {
    if (nb.size() != 2) {
      return {std::nullopt, SurveyorReason::NotSingleCycle};
    }
  }
  // Walk the cycle; it must visit every support vertex.
  std::vector<Vertex> order;
  const Vertex start = adj.begin()->first;
  Vertex prev = start;
  Vertex cur = start;
  do {
    order.push_back(cur);
    const auto& nb = adj[cur];
    const Vertex next = (nb[0] != prev || order.size() == 1) ? nb[0] : nb[1];
    prev = cur;
    cur = next;
  } while (cur != start && order.size() <= adj.size());
  if (order.size() != adj.size() || cur != start) {
    return {std::nullopt, SurveyorReason::NotSingleCycle};
  }

  const Index m = order.size();
  std::vector<detail::QPoint> p(m);
  for (Index i = 0; i < m; ++i) {
    const auto& xy = k.points()[order[i]];
    p[i] = {rational_from_double(xy[0]), rational_from_double(xy[1])};
  }
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
      if (adjacent) {
        // Adjacent segments share one endpoint; they may only meet there,
        // i.e. must not fold back onto each other.
        const Index shared = (j == i + 1) ? j : i;
        const auto& a = p[(shared + m - 1) % m];
        const auto& s = p[shared];
        const auto& b = p[(shared + 1) % m];
        if (detail::orientation(a, s, b) == 0) {
          const Rational dot = (a.x - s.x) * (b.x - s.x) + (a.y - s.y) * (b.y - s.y);
          if (sgn(dot) > 0) {
            return {std::nullopt, SurveyorReason::SelfIntersecting};
          }
        }
        continue;
      }
      if (detail::segments_intersect(p[i], p[(i + 1) % m], p[j], p[(j + 1) % m])) {
        return {std::nullopt, SurveyorReason::SelfIntersecting};
      }
    }
  }
  Rational twice(0);
  for (Index i = 0; i < m; ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % m];
    twice += a.x * b.y - b.x * a.y;
  }
  return {to_double(abs(twice) / 2), SurveyorReason::Eligible};
}

/// Statistics for one representative; the raw rows of a report.
struct CycleStats {
  Index loss_edge_unif = 0;
  double loss_edge_len = 0.0;
  std::optional<Index> loss_tri_unif;
  std::optional<double> loss_tri_area;
  std::optional<double> surveyor_area;
  Index num_loops = 0;
  CoeffClass coeff_class = CoeffClass::Pm1Zero;
  std::optional<Rational> cost_ratio_vs_original;
  double solve_time = 0.0;
  std::optional<bool> lp_vs_mip_cost_equal;
  std::optional<bool> also_uniform_optimal;  // length-optimal cycle attains the uniform optimum
};

struct NumericSummary {
  double min = 0;
  double median = 0;
  double mean = 0;
  double max = 0;
  Index count = 0;
};

inline std::optional<NumericSummary> summarize(std::vector<double> v) {
  if (v.empty()) {
    return std::nullopt;
  }
  std::sort(v.begin(), v.end());
  NumericSummary s;
  s.count = v.size();
  s.min = v.front();
  s.max = v.back();
  const Index n = v.size();
  s.median = n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
  double sum = 0;
  for (double x : v) {
    sum += x;
  }
  s.mean = sum / static_cast<double>(n);
  return s;
}

struct ReportSummary {
  Index count = 0;
  std::optional<NumericSummary> cost_ratio;
  std::optional<NumericSummary> loss_edge_unif;
  std::optional<NumericSummary> loss_edge_len;
  std::optional<NumericSummary> loss_tri_unif;
  std::optional<NumericSummary> loss_tri_area;
  std::optional<NumericSummary> surveyor_area;
  std::optional<NumericSummary> num_loops;
  std::optional<NumericSummary> solve_time;
  std::optional<double> fraction_pm1_zero;
  std::optional<double> fraction_integral_not_pm1;
  std::optional<double> fraction_fractional;
  std::optional<double> fraction_lp_equals_mip;
  std::optional<double> fraction_also_uniform_optimal;
  std::map<Index, Index> loop_histogram;
};

inline ReportSummary aggregate_report(const std::vector<CycleStats>& rows) {
  ReportSummary s;
  s.count = rows.size();
  if (rows.empty()) {
    return s;
  }
  std::vector<double> ratio, eu, el, tu, ta, sa, loops, time;
  Index pm1 = 0, integral = 0, fractional = 0;
  Index lpmip_n = 0, lpmip_eq = 0, uni_n = 0, uni_eq = 0;
  for (const auto& r : rows) {
    if (r.cost_ratio_vs_original) ratio.push_back(to_double(*r.cost_ratio_vs_original));
    eu.push_back(static_cast<double>(r.loss_edge_unif));
    el.push_back(r.loss_edge_len);
    if (r.loss_tri_unif) tu.push_back(static_cast<double>(*r.loss_tri_unif));
    if (r.loss_tri_area) ta.push_back(*r.loss_tri_area);
    if (r.surveyor_area) sa.push_back(*r.surveyor_area);
    loops.push_back(static_cast<double>(r.num_loops));
    time.push_back(r.solve_time);
    ++s.loop_histogram[r.num_loops];
    switch (r.coeff_class) {
      case CoeffClass::Pm1Zero:
        ++pm1;
        break;
      case CoeffClass::Integral:
        ++integral;
        break;
      case CoeffClass::Fractional:
        ++fractional;
        break;
    }
    if (r.lp_vs_mip_cost_equal) {
      ++lpmip_n;
      lpmip_eq += *r.lp_vs_mip_cost_equal ? 1 : 0;
    }
    if (r.also_uniform_optimal) {
      ++uni_n;
      uni_eq += *r.also_uniform_optimal ? 1 : 0;
    }
  }
  const double n = static_cast<double>(rows.size());
  s.cost_ratio = summarize(ratio);
  s.loss_edge_unif = summarize(eu);
  s.loss_edge_len = summarize(el);
  s.loss_tri_unif = summarize(tu);
  s.loss_tri_area = summarize(ta);
  s.surveyor_area = summarize(sa);
  s.num_loops = summarize(loops);
  s.solve_time = summarize(time);
  s.fraction_pm1_zero = pm1 / n;
  s.fraction_integral_not_pm1 = integral / n;
  s.fraction_fractional = fractional / n;
  if (lpmip_n > 0) s.fraction_lp_equals_mip = static_cast<double>(lpmip_eq) / lpmip_n;
  if (uni_n > 0) s.fraction_also_uniform_optimal = static_cast<double>(uni_eq) / uni_n;
  return s;
}

}  // namespace cyclerep
