// Command-line front end: barcode, optimize, generate, report.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cyclerep/cyclerep.hpp"

namespace {

using namespace cyclerep;

struct InputFlags {
  std::string input;
  bool points = false;
  bool distances = false;
  std::string generator;
  std::size_t n = 0;
  std::size_t dim = 2;
  double gamma_shape = 2.0;
  double gamma_scale = 1.0;
  std::uint64_t seed = 0;
  std::optional<double> max_eps;
  bool dedupe = false;
};

void add_input_flags(CLI::App* app, InputFlags& f) {
  app->add_option("--input", f.input, "CSV file (point cloud or distance matrix)");
  auto* pts = app->add_flag("--points", f.points, "input file holds one point per row");
  auto* dst = app->add_flag("--distances", f.distances, "input file holds a distance matrix");
  pts->excludes(dst);
  app->add_option("--generate", f.generator, "synthetic input instead of a file")
      ->check(CLI::IsMember({"normal", "gamma", "logistic", "exponential", "erdos-renyi"}));
  app->add_option("--n", f.n, "number of generated points");
  app->add_option("--dim", f.dim, "ambient dimension of generated points");
  app->add_option("--gamma-shape", f.gamma_shape, "shape of the gamma generator");
  app->add_option("--gamma-scale", f.gamma_scale, "scale of the gamma generator");
  app->add_option("--seed", f.seed, "generator seed");
  app->add_option("--max-eps", f.max_eps, "filtration threshold (default: enclosing radius)");
  app->add_flag("--dedupe", f.dedupe, "drop exact duplicate points");
}

RunConfig config_from(const InputFlags& f) {
  RunConfig c;
  if (!f.input.empty()) {
    c.input_path = f.input;
    c.input_kind = f.distances ? InputKind::Distances : InputKind::Points;
  }
  if (!f.generator.empty()) {
    GeneratorSpec g;
    g.kind = parse_generator_kind(f.generator);
    g.n = f.n;
    g.dim = f.dim;
    g.gamma_shape = f.gamma_shape;
    g.gamma_scale = f.gamma_scale;
    c.generator = g;
  }
  c.max_eps = f.max_eps;
  c.seed = f.seed;
  c.dedupe = f.dedupe;
  return c;
}

/// Writes to --out, or stdout when empty.
template <class Fn>
void emit(const std::string& out, Fn&& write) {
  if (out.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(out);
  if (!os) {
    throw ValidationError("cannot write '" + out + "'");
  }
  write(os);
}

int cmd_barcode(const InputFlags& f, const std::string& out) {
  RunConfig c = config_from(f);
  c.validate();
  const Dataset ds = detail::load_dataset(c);
  const double eps = effective_max_eps(c, ds);
  const FilteredComplex k = build_complex(ds, eps);
  const PersistenceResult ph = compute_persistence(k);
  Json j;
  j["format"] = "cyclerep-barcode";
  j["version"] = 1;
  j["config"] = config_json(c);
  j["complex"] = complex_json(k, eps);
  j["intervals"] = barcode_json(k, ph);
  emit(out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  return 0;
}

int cmd_optimize(RunConfig c, const std::string& out, const std::string& format) {
  const RunOutput res = run(c);
  emit(out, [&](std::ostream& os) {
    if (format == "csv") {
      write_report_csv(os, res.report);
    } else {
      os << res.report.dump(2) << "\n";
    }
  });
  if (!res.ok) {
    std::cerr << "cyclerep: " << res.report["error"].get<std::string>() << "\n";
    return 1;
  }
  return 0;
}

int cmd_generate(const InputFlags& f, const std::string& out) {
  if (f.generator.empty()) {
    throw ConfigurationError("generate needs --generate KIND");
  }
  GeneratorSpec g;
  g.kind = parse_generator_kind(f.generator);
  g.n = f.n;
  g.dim = f.dim;
  g.gamma_shape = f.gamma_shape;
  g.gamma_scale = f.gamma_scale;
  const Dataset ds = generate(g, f.seed);
  emit(out, [&](std::ostream& os) {
    write_csv(os, ds.kind == InputKind::Points ? ds.points : ds.distances);
  });
  return 0;
}

/// Re-aggregates the per-interval rows of a saved report.
int cmd_report(const std::string& in, const std::string& out, const std::string& format) {
  std::ifstream is(in);
  if (!is) {
    throw ValidationError("cannot open '" + in + "'");
  }
  const Json rep = Json::parse(is);
  if (format == "csv") {
    emit(out, [&](std::ostream& os) { write_report_csv(os, rep); });
    return 0;
  }
  std::vector<CycleStats> rows;
  for (const auto& iv : rep.value("intervals", Json::array())) {
    CycleStats s;
    s.loss_edge_unif = iv["loss_edge_unif"].get<Index>();
    s.loss_edge_len = iv["loss_edge_len"].get<double>();
    if (!iv["loss_tri_unif"].is_null()) s.loss_tri_unif = iv["loss_tri_unif"].get<Index>();
    if (!iv["loss_tri_area"].is_null()) s.loss_tri_area = iv["loss_tri_area"].get<double>();
    if (!iv["surveyor_area"].is_null()) s.surveyor_area = iv["surveyor_area"].get<double>();
    s.num_loops = iv["num_loops"].get<Index>();
    const std::string cls = iv["coeff_class"].get<std::string>();
    s.coeff_class = cls == "pm1-zero" ? CoeffClass::Pm1Zero
                    : cls == "integral" ? CoeffClass::Integral
                                        : CoeffClass::Fractional;
    if (!iv["cost_ratio"].is_null()) s.cost_ratio_vs_original = parse_rational(iv["cost_ratio"]["exact"].get<std::string>());
    if (!iv["solver"].is_null() && !iv["solver"]["lp_vs_mip_cost_equal"].is_null()) {
      s.lp_vs_mip_cost_equal = iv["solver"]["lp_vs_mip_cost_equal"].get<bool>();
    }
    if (!iv["also_uniform_optimal"].is_null()) s.also_uniform_optimal = iv["also_uniform_optimal"].get<bool>();
    rows.push_back(std::move(s));
  }
  Json j;
  j["format"] = "cyclerep-summary";
  j["source"] = in;
  j["summary"] = summary_json(aggregate_report(rows), false);
  emit(out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent homology with exact rational coefficients and optimized cycle representatives"};
  app.require_subcommand(1);

  InputFlags bar_in;
  std::string bar_out;
  auto* bar = app.add_subcommand("barcode", "dimension-1 barcode with initial representatives (JSON)");
  add_input_flags(bar, bar_in);
  bar->add_option("--out", bar_out, "output path (default stdout)");

  InputFlags opt_in;
  std::string opt_out, program = "edge-persistent", weights = "uniform", strategy = "build-part", format = "json";
  bool integral = false, timings = false;
  auto* opt = app.add_subcommand("optimize", "optimize cycle representatives and write a report");
  add_input_flags(opt, opt_in);
  opt->add_option("--program", program)->check(CLI::IsMember({"edge-persistent", "edge-filtered", "triangle"}));
  opt->add_option("--weights", weights)->check(CLI::IsMember({"uniform", "length", "area"}));
  opt->add_flag("--integral", integral, "require integral chain coefficients");
  opt->add_option("--strategy", strategy, "boundary slicing for the triangle program")
      ->check(CLI::IsMember({"zero-out", "build-all", "build-part"}));
  opt->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  opt->add_option("--out", opt_out, "output path (default stdout)");
  opt->add_flag("--timings", timings, "include wall-clock solve times (reports stop being byte-reproducible)");

  InputFlags gen_in;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "write a synthetic point cloud or dissimilarity matrix as CSV");
  add_input_flags(gen, gen_in);
  gen->add_option("--out", gen_out, "output path (default stdout)");

  std::string rep_in, rep_out, rep_format = "json";
  auto* rep = app.add_subcommand("report", "summarize or flatten a saved optimize report");
  rep->add_option("--input", rep_in, "report JSON")->required();
  rep->add_option("--format", rep_format)->check(CLI::IsMember({"json", "csv"}));
  rep->add_option("--out", rep_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bar->parsed()) {
      return cmd_barcode(bar_in, bar_out);
    }
    if (opt->parsed()) {
      RunConfig c = config_from(opt_in);
      c.program = parse_program_kind(program);
      c.weights = parse_weight_mode(weights);
      c.integral = integral;
      c.strategy = parse_slicing_strategy(strategy);
      c.timings = timings;
      return cmd_optimize(c, opt_out, format);
    }
    if (gen->parsed()) {
      return cmd_generate(gen_in, gen_out);
    }
    if (rep->parsed()) {
      return cmd_report(rep_in, rep_out, rep_format);
    }
  } catch (const std::exception& e) {
    std::cerr << "cyclerep: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
