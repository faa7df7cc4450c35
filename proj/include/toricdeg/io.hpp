#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toricdeg/invariants.hpp"
#include "toricdeg/lattice_geom.hpp"
#include "toricdeg/optimal_degeneration.hpp"
#include "toricdeg/weight_rings.hpp"

namespace toricdeg {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// { "name": ..., "dim": n, "vertices": [[...], ...] } with entries given as
/// integers or "p/q" strings. Unknown keys such as "notes" are ignored.
/// Throws ParseError on malformed JSON or ragged rows, and lets
/// DegeneratePolytope through.
LatticePolytope parse_polytope_json(std::string_view text);
LatticePolytope load_polytope(const std::string& path);

std::string read_file(const std::string& path);

/// Comma-separated decimals or rationals. Throws ParseError when the count
/// differs from `dim` or an entry is not a rational.
struct ParsedTorusVector {
  TorusVector xi;
  RationalVector exact;
};
ParsedTorusVector parse_torus_vector(std::string_view text, int dim);

/// Comma-separated positive decimals.
std::vector<double> parse_double_list(std::string_view text);

/// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double x);
Json json_vector(std::span<const double> v);
Json json_vector(std::span<const Rational> v);

std::string sha256_hex(std::string_view bytes);

struct RunManifest {
  std::string command;
  std::string input_path;
  std::string input_sha256;
  Json parameters = Json::object();
  std::string tool_version = kToolVersion;
  double duration_seconds = 0.0;
};

Json to_json(const RunManifest& manifest);
Json to_json(const InvariantReport& report);
/// Trace is emitted when `with_trace` is set.
Json to_json(const OptimizationResult& result, bool with_trace);
Json to_json(const StabilityVerdict& verdict);
Json to_json(const DHSample& sample);
Json to_json(const LaurentFit& fit);

/// Equal-width histogram of the atoms over [min λ, max λ].
Json dh_histogram(const DHSample& sample, int bins);

/// {"report": body, "manifest": manifest}. Only the manifest carries
/// timing, so reports of identical runs are byte-identical.
std::string render_document(const Json& report, const RunManifest& manifest);

}  // namespace toricdeg
