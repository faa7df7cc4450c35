// toricdeg: command-line front end for the toric degeneration invariants.
//
// Exit codes: 0 ok, 2 parse/validation, 3 not reflexive, 4 unbounded
// direction, 5 optimizer did not converge, 1 anything else.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "toricdeg/errors.hpp"
#include "toricdeg/io.hpp"

using namespace toricdeg;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNotReflexive = 3;
constexpr int kExitUnbounded = 4;
constexpr int kExitNoConvergence = 5;

struct Options {
  std::string path;
  std::string xi;
  std::string output;
  std::string ts;
  int m = 0;
  int m_max = 0;
  int oracle = 0;
  int bins = 0;
  int max_iter = 200;
  double tol = 1e-9;
  bool trace = false;
};

bool is_table(const std::string& path) { return std::filesystem::path(path).extension() == ".csv"; }

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunManifest manifest_for(const std::string& command, const Options& opt, const std::string& bytes) {
  RunManifest m;
  m.command = command;
  m.input_path = opt.path;
  m.input_sha256 = sha256_hex(bytes);
  return m;
}

void emit(const Options& opt, const Json& report, RunManifest manifest, const Timer& timer) {
  manifest.duration_seconds = timer.seconds();
  const std::string doc = render_document(report, manifest);
  if (opt.output.empty()) {
    std::cout << doc;
    std::cout.flush();
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + opt.output + "'");
  out << doc;
}

LatticePolytope polytope_from(const std::string& bytes) { return parse_polytope_json(bytes); }

void require_reflexive(const LatticePolytope& P) {
  if (!is_reflexive(P)) throw NotReflexive("polytope '" + P.name() + "' is not reflexive");
}

std::string rational_tuple(const RationalVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

int cmd_check(const Options& opt) {
  const auto P = polytope_from(read_file(opt.path));
  const bool reflexive = is_reflexive(P);
  const Rational vol = volume(P);
  Rational nf = 1;
  for (int i = 2; i <= P.dim(); ++i) nf *= i;
  std::cout << "name: " << (P.name().empty() ? stem(opt.path) : P.name()) << "\n"
            << "dim: " << P.dim() << "\n"
            << "vertices: " << P.vertices().size() << "\n"
            << "facets: " << P.facets().size() << "\n"
            << "reflexive: " << (reflexive ? "true" : "false") << "\n"
            << "volume: " << to_string(vol) << "\n"
            << "V = " << to_string(nf * vol) << "\n"
            << "barycenter: " << rational_tuple(barycenter(P)) << "\n";
  return 0;
}

int cmd_invariants(const Options& opt) {
  Timer timer;
  const std::string bytes = read_file(opt.path);
  RunManifest manifest = manifest_for("invariants", opt, bytes);
  manifest.parameters["xi"] = opt.xi;
  Json report;
  if (is_table(opt.path)) {
    std::istringstream in(bytes);
    const auto table = parse_weight_table(in);
    const auto xi = parse_torus_vector(opt.xi, table.dim());
    report = to_json(build_report(table, xi.xi, stem(opt.path)));
    report["source"] = "weight_table";
    manifest.parameters["m_max"] = table.m_max();
  } else {
    const auto P = polytope_from(bytes);
    require_reflexive(P);
    const auto xi = parse_torus_vector(opt.xi, P.dim());
    const auto r = build_report(P, xi.xi, xi.exact);
    report = to_json(r);
    report["source"] = "polytope";
    if (opt.oracle > 0) {
      manifest.parameters["oracle"] = opt.oracle;
      const auto table = weight_table_toric(P, opt.oracle);
      Json o;
      o["m"] = opt.oracle;
      const double c0_bf = c0_bruteforce(table, xi.xi, opt.oracle);
      o["c0_bruteforce"] = format_double(c0_bf);
      o["c0_relative_deviation"] = format_double(std::abs(c0_bf - r.c0) / r.c0);
      if (opt.oracle >= 8) {
        const auto fit = fit_b0_b1(table, xi.xi);
        o["b0_fit"] = format_double(fit.b0);
        o["b1_fit"] = format_double(fit.b1);
        o["b0_deviation"] = format_double(std::abs(fit.b0 - r.b0));
        o["b1_deviation"] = format_double(std::abs(fit.b1 - r.b1));
        o["fit_residual"] = format_double(fit.residual);
      }
      report["oracle"] = std::move(o);
    }
  }
  emit(opt, report, manifest, timer);
  return 0;
}

int cmd_optimize(const Options& opt) {
  Timer timer;
  const std::string bytes = read_file(opt.path);
  RunManifest manifest = manifest_for("optimize", opt, bytes);
  manifest.parameters["tol"] = format_double(opt.tol);
  manifest.parameters["max_iter"] = opt.max_iter;
  manifest.parameters["trace"] = opt.trace;
  const auto P = polytope_from(bytes);
  require_reflexive(P);
  const PolytopeContext ctx(P);
  OptimizerOptions o;
  o.tol = opt.tol;
  o.max_iter = opt.max_iter;
  o.record_trace = opt.trace;
  const auto result = maximize_h(ctx, o);

  Json report;
  report["polytope"] = P.name();
  report["dim"] = P.dim();
  report["V"] = to_string(ctx.degree());
  report["optimization"] = to_json(result, opt.trace);
  int code = 0;
  switch (result.status) {
    case OptimizationStatus::kConverged:
      report["mu_supremum"] = format_double(mu_supremum(ctx, result));
      report["h_stability"] = to_json(h_stability_verdict(ctx, result));
      break;
    case OptimizationStatus::kUnboundedDirection:
      report["mu_supremum"] = nullptr;
      report["h_stability"] = nullptr;
      code = kExitUnbounded;
      break;
    case OptimizationStatus::kMaxIterations:
      report["mu_supremum"] = nullptr;
      report["h_stability"] = nullptr;
      code = kExitNoConvergence;
      break;
  }
  emit(opt, report, manifest, timer);
  if (code == kExitUnbounded) std::cerr << "toricdeg: H is unbounded along the reported direction\n";
  if (code == kExitNoConvergence) std::cerr << "toricdeg: optimizer hit the iteration limit\n";
  return code;
}

int cmd_dh(const Options& opt) {
  Timer timer;
  const std::string bytes = read_file(opt.path);
  RunManifest manifest = manifest_for("dh", opt, bytes);
  manifest.parameters["xi"] = opt.xi;
  manifest.parameters["m"] = opt.m;
  if (opt.bins > 0) manifest.parameters["bins"] = opt.bins;
  if (opt.m < 1) throw ParseError("--m must be at least 1");
  const auto P = polytope_from(bytes);
  require_reflexive(P);
  const auto xi = parse_torus_vector(opt.xi, P.dim());
  const auto table = weight_table_toric(P, opt.m);
  const auto sample = dh_measure(table, xi.xi, opt.m);
  const double moment = dh_exp_moment(sample);
  const double c0 = c0_exact(P, xi.xi);
  Rational nf = 1;
  for (int i = 2; i <= P.dim(); ++i) nf *= i;
  const double V = Rational(nf * volume(P)).get_d();

  Json report;
  report["polytope"] = P.name();
  report["xi"] = json_vector(xi.xi.span());
  report["m"] = opt.m;
  report["atom_count"] = sample.atoms.size();
  if (opt.bins > 0) {
    report["histogram"] = dh_histogram(sample, opt.bins);
  } else {
    report["atoms"] = to_json(sample)["atoms"];
  }
  report["exp_moment"] = format_double(moment);
  report["c0_over_V"] = format_double(c0 / V);
  report["relative_deviation"] = format_double(std::abs(moment - c0 / V) / (c0 / V));
  emit(opt, report, manifest, timer);
  return 0;
}

int cmd_character(const Options& opt) {
  Timer timer;
  const std::string bytes = read_file(opt.path);
  RunManifest manifest = manifest_for("character", opt, bytes);
  manifest.parameters["xi"] = opt.xi;

  std::optional<LatticePolytope> polytope;
  std::optional<WeightTable> table;
  if (is_table(opt.path)) {
    std::istringstream in(bytes);
    table = parse_weight_table(in);
  } else {
    polytope = polytope_from(bytes);
    require_reflexive(*polytope);
    const int m_max = opt.m_max > 0 ? opt.m_max : 128;
    table = weight_table_toric(*polytope, m_max);
  }
  manifest.parameters["m_max"] = table->m_max();
  const auto xi = parse_torus_vector(opt.xi, table->dim());

  std::vector<double> ts = opt.ts.empty() ? laurent_sample_points() : parse_double_list(opt.ts);
  for (double t : ts) {
    if (!(t > 0.0)) throw ParseError("--t values must be positive");
  }
  manifest.parameters["t"] = json_vector(ts);

  Json report;
  report["source"] = polytope ? "polytope" : "weight_table";
  report["xi"] = json_vector(xi.xi.span());
  report["m_max"] = table->m_max();
  std::vector<double> values;
  for (double t : ts) values.push_back(weight_character(*table, xi.xi, t, table->m_max()));
  report["t"] = json_vector(ts);
  report["C"] = json_vector(values);

  try {
    const auto fit = laurent_fit(*table, xi.xi);
    Json f;
    f["b0_hat"] = format_double(fit.b0_hat);
    f["b1_hat"] = format_double(fit.b1_hat);
    if (polytope) {
      const auto exact = b0_b1_exact(*polytope, xi.exact);
      f["b0_exact"] = to_string(exact.b0);
      f["b1_exact"] = to_string(exact.b1);
      const double b0 = exact.b0.get_d(), b1 = exact.b1.get_d();
      f["b0_relative_deviation"] = b0 != 0.0 ? Json(format_double(std::abs(fit.b0_hat - b0) / std::abs(b0))) : Json();
      f["b1_relative_deviation"] = b1 != 0.0 ? Json(format_double(std::abs(fit.b1_hat - b1) / std::abs(b1))) : Json();
    }
    report["laurent_fit"] = std::move(f);
  } catch (const TruncationTooCoarse& e) {
    Json f;
    f["error"] = "truncation_too_coarse";
    f["required_m_max"] = e.required_m_max();
    report["laurent_fit"] = std::move(f);
    std::cerr << "toricdeg: " << e.what() << "\n";
  }
  emit(opt, report, manifest, timer);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric degeneration invariants: H, DF, optimal product degenerations and weight asymptotics"};
  app.require_subcommand(1);
  Options opt;

  auto* check = app.add_subcommand("check", "Validate a polytope file and print its basic data");
  check->add_option("path", opt.path, "Polytope JSON")->required();

  auto* inv = app.add_subcommand("invariants", "H, DF, c0, b0, b1 for a direction xi");
  inv->add_option("path", opt.path, "Polytope JSON or weight table CSV")->required();
  inv->add_option("--xi", opt.xi, "Comma-separated decimals or rationals")->required();
  inv->add_option("--oracle", opt.oracle, "Append brute-force recomputations at this degree");

  auto* optz = app.add_subcommand("optimize", "Maximize H over product degenerations");
  optz->add_option("path", opt.path, "Polytope JSON")->required();
  optz->add_option("--tol", opt.tol, "Gradient-norm tolerance");
  optz->add_option("--max-iter", opt.max_iter, "Newton iteration limit");
  optz->add_flag("--trace", opt.trace, "Include the iterate trace");

  auto* dh = app.add_subcommand("dh", "Weight distribution at level m");
  dh->add_option("path", opt.path, "Polytope JSON")->required();
  dh->add_option("--xi", opt.xi, "Comma-separated decimals or rationals")->required();
  dh->add_option("--m", opt.m, "Level")->required();
  dh->add_option("--bins", opt.bins, "Histogram bins instead of atoms");

  auto* ch = app.add_subcommand("character", "Weight character and its Laurent fit");
  ch->add_option("path", opt.path, "Polytope JSON or weight table CSV")->required();
  ch->add_option("--xi", opt.xi, "Comma-separated decimals or rationals")->required();
  ch->add_option("--t", opt.ts, "Comma-separated positive t values");
  ch->add_option("--m-max", opt.m_max, "Truncation degree for polytope input (default 128)");

  for (auto* sub : {inv, optz, dh, ch}) sub->add_option("--output", opt.output, "Write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*check) return cmd_check(opt);
    if (*inv) return cmd_invariants(opt);
    if (*optz) return cmd_optimize(opt);
    if (*dh) return cmd_dh(opt);
    if (*ch) return cmd_character(opt);
  } catch (const NotReflexive& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return kExitNotReflexive;
  } catch (const ParseError& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return kExitParse;
  } catch (const NonRationalInput& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return kExitParse;
  } catch (const DegeneratePolytope& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return kExitParse;
  } catch (const EmptyDegree& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return kExitParse;
  } catch (const InsufficientDegrees& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "toricdeg: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
