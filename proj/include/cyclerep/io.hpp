#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cyclerep/complex.hpp"
#include "cyclerep/error.hpp"

namespace cyclerep {

enum class InputKind { Points, Distances };

/// What ingestion and generation hand to the pipeline: always a
/// dissimilarity matrix, plus coordinates when the data are points.
struct Dataset {
  InputKind kind = InputKind::Distances;
  PointCloud points;
  DistanceMatrix distances;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    out.push_back(trim(field));
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace detail

/// Numeric CSV: comma separated, optional single header line (detected as a
/// first line with any non-numeric field), blank lines ignored.
inline std::vector<std::vector<double>> parse_csv(std::istream& in, const std::string& source = "<stream>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  Index lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) {
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool header = false;
    for (Index c = 0; c < fields.size(); ++c) {
      auto v = detail::parse_double(fields[c]);
      if (!v) {
        if (first) {
          header = true;
          break;
        }
        throw ValidationError(source + ": line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                              ": cannot parse '" + fields[c] + "' as a number");
      }
      if (!std::isfinite(*v)) {
        throw ValidationError(source + ": line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                              ": non-finite value");
      }
      row.push_back(*v);
    }
    first = false;
    if (header) {
      continue;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(source + ": line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                            " fields, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open '" + path + "'");
  }
  return parse_csv(in, path);
}

/// Exact-duplicate points removed, first occurrence kept.
inline PointCloud dedupe_points(const PointCloud& points) {
  PointCloud out;
  std::set<std::vector<double>> seen;
  for (const auto& p : points) {
    if (seen.insert(p).second) {
      out.push_back(p);
    }
  }
  return out;
}

inline Dataset dataset_from_rows(std::vector<std::vector<double>> rows, InputKind kind, bool dedupe = false) {
  Dataset ds;
  ds.kind = kind;
  if (kind == InputKind::Points) {
    ds.points = dedupe ? dedupe_points(rows) : std::move(rows);
    ds.distances = euclidean_distances(ds.points);
  } else {
    if (dedupe) {
      throw ConfigurationError("deduplication applies to point clouds only");
    }
    validate_distance_matrix(rows);
    ds.distances = std::move(rows);
  }
  return ds;
}

inline Dataset ingest(const std::string& path, InputKind kind, bool dedupe = false) {
  return dataset_from_rows(read_csv(path), kind, dedupe);
}

inline FilteredComplex build_complex(const Dataset& ds, std::optional<double> max_eps) {
  if (ds.kind == InputKind::Points) {
    return build_vr_points(ds.points, max_eps);
  }
  return build_vr(ds.distances, max_eps);
}

inline void write_csv(std::ostream& os, const std::vector<std::vector<double>>& rows) {
  os << std::setprecision(17);
  for (const auto& r : rows) {
    for (Index c = 0; c < r.size(); ++c) {
      os << (c ? "," : "") << r[c];
    }
    os << "\n";
  }
}

// ---------------------------------------------------------------------------
// Generators. The engine is mt19937_64, whose output sequence is fixed by the
// C++ standard; the distribution transforms are written out here because the
// standard library's are implementation-defined.

enum class GeneratorKind { Normal, Gamma, Logistic, Exponential, ErdosRenyi };

inline GeneratorKind parse_generator_kind(const std::string& s) {
  if (s == "normal") return GeneratorKind::Normal;
  if (s == "gamma") return GeneratorKind::Gamma;
  if (s == "logistic") return GeneratorKind::Logistic;
  if (s == "exponential") return GeneratorKind::Exponential;
  if (s == "erdos-renyi") return GeneratorKind::ErdosRenyi;
  throw ValidationError("unknown generator '" + s + "'");
}

inline const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Normal:
      return "normal";
    case GeneratorKind::Gamma:
      return "gamma";
    case GeneratorKind::Logistic:
      return "logistic";
    case GeneratorKind::Exponential:
      return "exponential";
    case GeneratorKind::ErdosRenyi:
      return "erdos-renyi";
  }
  return "unknown";
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Box-Muller; the second variate is cached.
  double normal() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    cached_ = true;
    return r * std::cos(th);
  }

  double exponential(double rate = 1.0) { return -std::log(uniform_open()) / rate; }

  double logistic(double loc = 0.0, double scale = 1.0) {
    const double u = uniform_open();
    return loc + scale * std::log(u / (1.0 - u));
  }

  /// Marsaglia-Tsang; shape < 1 uses the u^(1/shape) boost.
  double gamma(double shape, double scale) {
    if (!(shape > 0) || !(scale > 0)) {
      throw ValidationError("gamma: shape and scale must be positive");
    }
    if (shape < 1) {
      return gamma(shape + 1, scale) * std::pow(uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0);
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1 - 0.0331 * x * x * x * x || std::log(u) < 0.5 * x * x + d * (1 - v + std::log(v))) {
        return scale * d * v;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
  bool cached_ = false;
  double spare_ = 0.0;
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Normal;
  Index n = 0;
  Index dim = 2;
  double gamma_shape = 2.0;
  double gamma_scale = 1.0;
};

inline Dataset generate(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 2) {
    throw ValidationError("generate: need at least 2 points");
  }
  if (spec.kind != GeneratorKind::ErdosRenyi && spec.dim < 1) {
    throw ValidationError("generate: dimension must be at least 1");
  }
  Sampler s(seed);
  Dataset ds;
  if (spec.kind == GeneratorKind::ErdosRenyi) {
    ds.kind = InputKind::Distances;
    ds.distances.assign(spec.n, std::vector<double>(spec.n, 0.0));
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = i + 1; j < spec.n; ++j) {
        ds.distances[i][j] = ds.distances[j][i] = s.uniform_open();
      }
    }
    return ds;
  }
  ds.kind = InputKind::Points;
  ds.points.assign(spec.n, std::vector<double>(spec.dim));
  for (auto& p : ds.points) {
    for (auto& x : p) {
      switch (spec.kind) {
        case GeneratorKind::Normal:
          x = s.normal();
          break;
        case GeneratorKind::Gamma:
          x = s.gamma(spec.gamma_shape, spec.gamma_scale);
          break;
        case GeneratorKind::Logistic:
          x = s.logistic();
          break;
        case GeneratorKind::Exponential:
          x = s.exponential();
          break;
        case GeneratorKind::ErdosRenyi:
          break;
      }
    }
  }
  ds.distances = euclidean_distances(ds.points);
  return ds;
}

}  // namespace cyclerep
