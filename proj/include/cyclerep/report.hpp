#pragma once

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclerep/complex.hpp"
#include "cyclerep/edge_opt.hpp"
#include "cyclerep/io.hpp"
#include "cyclerep/metrics.hpp"
#include "cyclerep/persistence.hpp"
#include "cyclerep/tri_opt.hpp"

namespace cyclerep {

using Json = nlohmann::ordered_json;

enum class ProgramKind { EdgePersistent, EdgeFiltered, Triangle };

inline const char* to_string(ProgramKind p) {
  switch (p) {
    case ProgramKind::EdgePersistent:
      return "edge-persistent";
    case ProgramKind::EdgeFiltered:
      return "edge-filtered";
    case ProgramKind::Triangle:
      return "triangle";
  }
  return "unknown";
}

inline ProgramKind parse_program_kind(const std::string& s) {
  if (s == "edge-persistent") return ProgramKind::EdgePersistent;
  if (s == "edge-filtered") return ProgramKind::EdgeFiltered;
  if (s == "triangle") return ProgramKind::Triangle;
  throw ValidationError("unknown program '" + s + "'");
}

struct RunConfig {
  std::optional<std::string> input_path;
  InputKind input_kind = InputKind::Points;
  std::optional<GeneratorSpec> generator;
  std::optional<double> max_eps;  // default: the enclosing radius
  ProgramKind program = ProgramKind::EdgePersistent;
  WeightMode weights = WeightMode::Uniform;
  bool integral = false;
  SlicingStrategy strategy = SlicingStrategy::BuildPart;
  std::uint64_t seed = 0;
  bool dedupe = false;
  bool timings = false;

  void validate() const {
    if (input_path.has_value() == generator.has_value()) {
      throw ConfigurationError("exactly one input source (file or generator) is required");
    }
    if (weights == WeightMode::Area && program != ProgramKind::Triangle) {
      throw ConfigurationError("area weights require the triangle program");
    }
    if (weights == WeightMode::Length && program == ProgramKind::Triangle) {
      throw ConfigurationError("length weights apply to edge programs only");
    }
    if (max_eps && !(*max_eps >= 0)) {
      throw ConfigurationError("max-eps must be nonnegative");
    }
  }
};

// ---------------------------------------------------------------------------
// JSON encoding helpers

inline Json integer_json(const mpz_class& z) {
  if (auto v = small_integer(z)) {
    return *v;
  }
  return z.get_str();
}

inline Json vertices_json(const Simplex& s) {
  Json a = Json::array();
  for (Vertex v : s.vertices) {
    a.push_back(v);
  }
  return a;
}

/// [[vertices], numerator, denominator] per nonzero entry.
inline Json chain_json(const FilteredComplex& k, int dim, const SparseColumn& chain) {
  Json a = Json::array();
  for (const auto& e : chain) {
    a.push_back(Json::array({vertices_json(k.simplex(dim, e.row)), integer_json(e.value.get_num()),
                             integer_json(e.value.get_den())}));
  }
  return a;
}

inline Json exact_json(const Rational& q) {
  Json j;
  j["exact"] = to_string(q);
  j["value"] = to_double(q);
  return j;
}

inline Json optional_exact_json(const std::optional<Rational>& q) { return q ? exact_json(*q) : Json(nullptr); }

inline Json lifespan_json(const FilteredComplex& k, const Lifespan& l) {
  Json j;
  j["birth"] = k.display_value(l.birth);
  j["death"] = l.death ? Json(k.display_value(*l.death)) : Json(nullptr);
  return j;
}

inline Json numeric_summary_json(const std::optional<NumericSummary>& s) {
  if (!s) {
    return nullptr;
  }
  Json j;
  j["count"] = s->count;
  j["min"] = s->min;
  j["median"] = s->median;
  j["mean"] = s->mean;
  j["max"] = s->max;
  return j;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json summary_json(const ReportSummary& s, bool timings) {
  Json j;
  j["count"] = s.count;
  j["cost_ratio"] = numeric_summary_json(s.cost_ratio);
  j["loss_edge_unif"] = numeric_summary_json(s.loss_edge_unif);
  j["loss_edge_len"] = numeric_summary_json(s.loss_edge_len);
  j["loss_tri_unif"] = numeric_summary_json(s.loss_tri_unif);
  j["loss_tri_area"] = numeric_summary_json(s.loss_tri_area);
  j["surveyor_area"] = numeric_summary_json(s.surveyor_area);
  j["num_loops"] = numeric_summary_json(s.num_loops);
  if (timings) {
    j["solve_time"] = numeric_summary_json(s.solve_time);
  }
  j["fraction_pm1_zero"] = optional_json(s.fraction_pm1_zero);
  j["fraction_integral_not_pm1"] = optional_json(s.fraction_integral_not_pm1);
  j["fraction_fractional"] = optional_json(s.fraction_fractional);
  j["fraction_lp_equals_mip"] = optional_json(s.fraction_lp_equals_mip);
  j["fraction_also_uniform_optimal"] = optional_json(s.fraction_also_uniform_optimal);
  Json hist = Json::object();
  for (const auto& [loops, count] : s.loop_histogram) {
    hist[std::to_string(loops)] = count;
  }
  j["loop_histogram"] = hist;
  return j;
}

inline Json config_json(const RunConfig& c) {
  Json j;
  if (c.input_path) {
    j["input"] = *c.input_path;
    j["input_kind"] = c.input_kind == InputKind::Points ? "points" : "distances";
  } else {
    j["generator"] = to_string(c.generator->kind);
    j["n"] = c.generator->n;
    j["dim"] = c.generator->dim;
    if (c.generator->kind == GeneratorKind::Gamma) {
      j["gamma_shape"] = c.generator->gamma_shape;
      j["gamma_scale"] = c.generator->gamma_scale;
    }
  }
  j["max_eps"] = c.max_eps ? Json(*c.max_eps) : Json(nullptr);
  j["program"] = to_string(c.program);
  j["weights"] = to_string(c.weights);
  j["integral"] = c.integral;
  j["strategy"] = to_string(c.strategy);
  j["seed"] = c.seed;
  j["dedupe"] = c.dedupe;
  return j;
}

/// Fills the loss / structure statistics of one representative.
inline CycleStats cycle_stats(const FilteredComplex& k, const SparseColumn& chain,
                              const std::optional<SparseColumn>& volume) {
  CycleStats st;
  st.loss_edge_unif = chain.size();
  st.loss_edge_len = loss(chain, 1, LossMode::EdgeLength, k);
  if (volume) {
    st.loss_tri_unif = volume->size();
    if (k.has_geometry()) {
      st.loss_tri_area = loss(*volume, 2, LossMode::TriangleArea, k);
    }
  }
  st.surveyor_area = surveyor_area(chain, k).area;
  st.num_loops = loop_count(chain, k);
  st.coeff_class = classify_coefficients(chain);
  return st;
}

inline Json solver_json(const CycleSolveStats& s, bool integral, bool timings) {
  Json j;
  j["status"] = to_string(s.status);
  j["kept_original"] = s.kept_original;
  j["constraints"] = s.num_constraints;
  j["variables"] = s.num_variables;
  j["pivots"] = s.pivots;
  j["branch_nodes"] = s.branch_nodes;
  j["relaxation_cost"] = optional_exact_json(s.relaxation_cost);
  j["lp_vs_mip_cost_equal"] =
      integral && s.relaxation_cost && !s.kept_original ? Json(*s.relaxation_cost == s.optimal_cost) : Json(nullptr);
  if (timings) {
    j["seconds"] = s.seconds;
  }
  return j;
}

struct RunOutput {
  Json report;
  std::vector<CycleStats> rows;
  bool ok = true;
};

namespace detail {

inline Dataset load_dataset(const RunConfig& c) {
  if (c.input_path) {
    return ingest(*c.input_path, c.input_kind, c.dedupe);
  }
  Dataset ds = generate(*c.generator, c.seed);
  if (c.dedupe && ds.kind == InputKind::Points) {
    ds.points = dedupe_points(ds.points);
    ds.distances = euclidean_distances(ds.points);
  }
  return ds;
}

}  // namespace detail

/// Barcode and initial representatives only.
inline Json barcode_json(const FilteredComplex& k, const PersistenceResult& ph) {
  Json bars = Json::array();
  for (Index i = 0; i < ph.barcode.size(); ++i) {
    const auto& bar = ph.barcode[i];
    Json b;
    b["index"] = i;
    b["birth"] = k.display_value(bar.birth_value);
    b["death"] = bar.death_value ? Json(k.display_value(*bar.death_value)) : Json(nullptr);
    b["birth_key"] = to_string(bar.birth_value);
    b["death_key"] = bar.death_value ? Json(to_string(*bar.death_value)) : Json(nullptr);
    b["birth_edge"] = vertices_json(k.simplex(1, bar.birth_simplex));
    b["death_triangle"] = bar.death_simplex ? vertices_json(k.simplex(2, *bar.death_simplex)) : Json(nullptr);
    b["representative"] = chain_json(k, 1, ph.basis[i].chain);
    bars.push_back(std::move(b));
  }
  return bars;
}

inline Json complex_json(const FilteredComplex& k, std::optional<double> eps) {
  Json j;
  j["vertices"] = k.size(0);
  j["edges"] = k.size(1);
  j["triangles"] = k.size(2);
  j["max_eps"] = eps ? Json(*eps) : Json(nullptr);
  j["squared_keys"] = k.squared_keys();
  return j;
}

/// Effective threshold: the requested one, else the enclosing radius (the
/// dimension-1 barcode is unchanged by truncating there).
inline double effective_max_eps(const RunConfig& c, const Dataset& ds) {
  if (c.max_eps) {
    return *c.max_eps;
  }
  return enclosing_radius(ds.distances);
}

/// ingest/generate -> complex -> persistence -> optimizer -> metrics.
/// Module errors are caught and recorded with a failure marker so the
/// partial report can still be written.
inline RunOutput run(const RunConfig& c) {
  RunOutput out;
  Json& rep = out.report;
  rep["format"] = "cyclerep-report";
  rep["version"] = 1;
  rep["config"] = config_json(c);
  rep["status"] = "running";
  Json intervals = Json::array();
  try {
    c.validate();
    const Dataset ds = detail::load_dataset(c);
    const double eps = effective_max_eps(c, ds);
    const FilteredComplex k = build_complex(ds, eps);
    rep["complex"] = complex_json(k, eps);
    if (c.weights == WeightMode::Area && !k.has_geometry()) {
      throw ConfigurationError("area weights need Euclidean point input");
    }
    const PersistenceResult ph = compute_persistence(k);

    std::vector<CycleRepresentative> optimized;
    std::vector<std::optional<CycleSolveStats>> stats(ph.barcode.size());
    std::vector<std::optional<SparseColumn>> volumes(ph.barcode.size());
    std::vector<std::optional<bool>> also_uniform(ph.barcode.size());
    if (c.program == ProgramKind::Triangle) {
      TriangleOptions opt{c.weights, c.integral, c.strategy};
      auto res = optimize_basis_triangle(k, ph, opt);
      optimized = std::move(res.basis);
      stats = std::move(res.stats);
      volumes = std::move(res.volumes);
    } else {
      EdgeOptions opt{c.weights, c.integral};
      auto solve = [&](const EdgeOptions& o) {
        return c.program == ProgramKind::EdgePersistent ? optimize_basis_persistent(k, ph, o)
                                                        : optimize_basis_filtered(k, ph, o);
      };
      auto res = solve(opt);
      if (c.weights == WeightMode::Length) {
        EdgeOptions uo = opt;
        uo.weights = WeightMode::Uniform;
        const auto uni = solve(uo);
        for (Index i = 0; i < ph.barcode.size(); ++i) {
          also_uniform[i] =
              weighted_l1(k, res.basis[i].chain, WeightMode::Uniform) == uni.stats[i].optimal_cost;
        }
      }
      optimized = std::move(res.basis);
      for (Index i = 0; i < res.stats.size(); ++i) {
        stats[i] = std::move(res.stats[i]);
      }
    }

    for (Index i = 0; i < ph.barcode.size(); ++i) {
      const auto& bar = ph.barcode[i];
      CycleStats row = cycle_stats(k, optimized[i].chain, volumes[i]);
      row.also_uniform_optimal = also_uniform[i];
      Json iv;
      iv["index"] = i;
      iv["birth"] = k.display_value(bar.birth_value);
      iv["death"] = bar.death_value ? Json(k.display_value(*bar.death_value)) : Json(nullptr);
      iv["birth_key"] = to_string(bar.birth_value);
      iv["death_key"] = bar.death_value ? Json(to_string(*bar.death_value)) : Json(nullptr);
      iv["birth_edge"] = vertices_json(k.simplex(1, bar.birth_simplex));
      iv["death_triangle"] = bar.death_simplex ? vertices_json(k.simplex(2, *bar.death_simplex)) : Json(nullptr);
      iv["original_chain"] = chain_json(k, 1, ph.basis[i].chain);
      iv["optimized_chain"] = chain_json(k, 1, optimized[i].chain);
      iv["optimized_lifespan"] = lifespan_json(k, chain_lifespan(k, ph.dec2, optimized[i].chain));
      if (volumes[i]) {
        iv["volume"] = chain_json(k, 2, *volumes[i]);
      }
      if (stats[i]) {
        const auto& s = *stats[i];
        if (sgn(s.original_cost) > 0) {
          row.cost_ratio_vs_original = s.optimal_cost / s.original_cost;
        }
        row.solve_time = s.seconds;
        if (c.integral && s.relaxation_cost && !s.kept_original) {
          row.lp_vs_mip_cost_equal = *s.relaxation_cost == s.optimal_cost;
        }
        iv["cost_before"] = exact_json(s.original_cost);
        iv["cost_after"] = exact_json(s.optimal_cost);
        iv["cost_ratio"] = optional_exact_json(row.cost_ratio_vs_original);
        iv["solver"] = solver_json(s, c.integral, c.timings);
      } else {
        iv["cost_before"] = nullptr;
        iv["cost_after"] = nullptr;
        iv["cost_ratio"] = nullptr;
        iv["solver"] = nullptr;
      }
      iv["coeff_class"] = to_string(row.coeff_class);
      iv["num_loops"] = row.num_loops;
      iv["loss_edge_unif"] = row.loss_edge_unif;
      iv["loss_edge_len"] = row.loss_edge_len;
      iv["loss_tri_unif"] = row.loss_tri_unif ? Json(*row.loss_tri_unif) : Json(nullptr);
      iv["loss_tri_area"] = optional_json(row.loss_tri_area);
      iv["surveyor_area"] = optional_json(row.surveyor_area);
      iv["also_uniform_optimal"] = row.also_uniform_optimal ? Json(*row.also_uniform_optimal) : Json(nullptr);
      intervals.push_back(std::move(iv));
      out.rows.push_back(std::move(row));
    }
    rep["intervals"] = std::move(intervals);
    rep["summary"] = summary_json(aggregate_report(out.rows), c.timings);
    rep["status"] = "ok";
  } catch (const std::exception& e) {
    rep["intervals"] = std::move(intervals);
    rep["status"] = "failed";
    rep["error"] = e.what();
    out.ok = false;
  }
  return out;
}

inline std::string csv_field(const Json& v) {
  if (v.is_null()) {
    return "";
  }
  if (v.is_object() && v.contains("exact")) {
    return v["exact"].get<std::string>();
  }
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_number_float()) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v.get<double>();
    return ss.str();
  }
  return v.dump();
}

/// One row per interval of a report.
inline void write_report_csv(std::ostream& os, const Json& report) {
  static const char* const cols[] = {"index",      "birth",          "death",         "cost_before",
                                     "cost_after", "cost_ratio",     "coeff_class",   "num_loops",
                                     "loss_edge_unif", "loss_edge_len", "loss_tri_unif", "loss_tri_area",
                                     "surveyor_area", "also_uniform_optimal"};
  bool first = true;
  for (const char* c : cols) {
    os << (first ? "" : ",") << c;
    first = false;
  }
  os << ",status,pivots,branch_nodes,lp_vs_mip_cost_equal\n";
  if (!report.contains("intervals")) {
    return;
  }
  for (const auto& iv : report["intervals"]) {
    first = true;
    for (const char* c : cols) {
      os << (first ? "" : ",") << (iv.contains(c) ? csv_field(iv[c]) : "");
      first = false;
    }
    const Json& s = iv.contains("solver") ? iv["solver"] : Json(nullptr);
    if (s.is_null()) {
      os << ",,,,\n";
    } else {
      os << "," << csv_field(s["status"]) << "," << csv_field(s["pivots"]) << "," << csv_field(s["branch_nodes"]) << ","
         << csv_field(s["lp_vs_mip_cost_equal"]) << "\n";
    }
  }
}

}  // namespace cyclerep
