#include "toricdeg/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "toricdeg/errors.hpp"

namespace toricdeg {

namespace {

Rational parse_entry(const Json& value, std::size_t row, std::size_t col) {
  const std::string where = "vertex row " + std::to_string(row) + ", entry " + std::to_string(col);
  try {
    if (value.is_number_integer()) return Rational(value.get<long>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const NonRationalInput& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    std::string piece(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    piece.erase(0, piece.find_first_not_of(" \t"));
    piece.erase(piece.find_last_not_of(" \t") + 1);
    out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

LatticePolytope parse_polytope_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("polytope file must hold a JSON object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw ParseError("missing \"vertices\" array");
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  const Json& rows = doc["vertices"];
  if (rows.empty()) throw ParseError("\"vertices\" is empty");
  long dim = -1;
  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long>() < 1) {
      throw ParseError("\"dim\" must be a positive integer");
    }
    dim = doc["dim"].get<long>();
  }
  std::vector<RationalVector> points;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array()) throw ParseError("vertex row " + std::to_string(r) + " is not an array");
    if (dim < 0) dim = static_cast<long>(rows[r].size());
    if (static_cast<long>(rows[r].size()) != dim) {
      throw ParseError("vertex row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                       " entries, expected " + std::to_string(dim));
    }
    RationalVector p;
    for (std::size_t c = 0; c < rows[r].size(); ++c) p.push_back(parse_entry(rows[r][c], r, c));
    points.push_back(std::move(p));
  }
  return build_polytope(std::move(points), name);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LatticePolytope load_polytope(const std::string& path) { return parse_polytope_json(read_file(path)); }

ParsedTorusVector parse_torus_vector(std::string_view text, int dim) {
  const auto pieces = split_commas(text);
  if (static_cast<int>(pieces.size()) != dim) {
    throw ParseError("--xi has " + std::to_string(pieces.size()) + " components, polytope dimension is " +
                     std::to_string(dim));
  }
  ParsedTorusVector out;
  for (const auto& p : pieces) {
    try {
      out.exact.push_back(parse_rational(p));
    } catch (const NonRationalInput& e) {
      throw ParseError(std::string("--xi: ") + e.what());
    }
    out.xi.components.push_back(out.exact.back().get_d());
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& p : split_commas(text)) {
    try {
      out.push_back(parse_rational(p).get_d());
    } catch (const NonRationalInput& e) {
      throw ParseError(e.what());
    }
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0 too
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json json_vector(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(format_double(x));
  return out;
}

Json json_vector(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

Json to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["input"] = m.input_path;
  j["input_sha256"] = m.input_sha256;
  j["parameters"] = m.parameters;
  j["tool_version"] = m.tool_version;
  j["duration_seconds"] = format_double(m.duration_seconds);
  return j;
}

Json to_json(const InvariantReport& r) {
  Json j;
  j["polytope"] = r.polytope_name;
  j["dim"] = r.dim;
  j["xi"] = json_vector(r.xi.span());
  j["V"] = format_double(r.degree);
  if (r.degree_exact) j["V_exact"] = to_string(*r.degree_exact);
  j["c0"] = format_double(r.c0);
  j["b0"] = format_double(r.b0);
  if (r.b0_exact) j["b0_exact"] = to_string(*r.b0_exact);
  j["b1"] = format_double(r.b1);
  if (r.b1_exact) j["b1_exact"] = to_string(*r.b1_exact);
  j["H"] = format_double(r.h);
  j["DF"] = format_double(r.df);
  j["jensen_gap"] = format_double(r.jensen_gap);
  return j;
}

Json to_json(const OptimizationResult& r, bool with_trace) {
  Json j;
  j["status"] = to_string(r.status);
  j["xi_star"] = json_vector(r.xi_star.span());
  j["h_star"] = format_double(r.h_star);
  j["grad_norm"] = format_double(r.grad_norm);
  j["hessian_max_eigenvalue"] = format_double(r.hessian_max_eigenvalue);
  j["iterations"] = r.iterations;
  j["flat_direction"] = r.flat_direction;
  j["jensen_certificate"] = r.jensen_ok;
  j["monotone_ascent"] = r.monotone;
  if (r.unbounded_direction) {
    j["unbounded_direction"] = json_vector(r.unbounded_direction->span());
    j["recession_slope"] = format_double(r.unbounded_slope);
  }
  if (with_trace) {
    Json trace = Json::array();
    for (const auto& it : r.trace) {
      Json t;
      t["iteration"] = it.iteration;
      t["xi"] = json_vector(it.xi.span());
      t["H"] = format_double(it.h);
      t["DF"] = format_double(it.df);
      t["grad_norm"] = format_double(it.grad_norm);
      t["step"] = format_double(it.step);
      trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
  }
  return j;
}

Json to_json(const StabilityVerdict& v) {
  Json j;
  j["verdict"] = v.label();
  j["description"] = v.description();
  if (v.witness) {
    j["witness"] = json_vector(v.witness->span());
    j["witness_H"] = format_double(v.witness_h);
  }
  return j;
}

Json to_json(const DHSample& s) {
  Json j;
  j["level"] = s.level;
  Json atoms = Json::array();
  for (const auto& a : s.atoms) atoms.push_back(Json::array({format_double(a.lambda), format_double(a.mass)}));
  j["atoms"] = std::move(atoms);
  return j;
}

Json to_json(const LaurentFit& f) {
  Json j;
  j["t"] = json_vector(f.ts);
  j["C"] = json_vector(f.values);
  j["b0_hat"] = format_double(f.b0_hat);
  j["b1_hat"] = format_double(f.b1_hat);
  return j;
}

Json dh_histogram(const DHSample& s, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be positive");
  Json j;
  if (s.atoms.empty()) return j;
  const double lo = s.atoms.front().lambda;
  const double hi = s.atoms.back().lambda;
  std::vector<KahanSum> mass(bins);
  for (const auto& a : s.atoms) {
    int b = hi > lo ? static_cast<int>((a.lambda - lo) / (hi - lo) * bins) : 0;
    b = std::clamp(b, 0, bins - 1);
    mass[b] += a.mass;
  }
  std::vector<double> edges(bins + 1), masses(bins);
  for (int b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * b / bins;
  for (int b = 0; b < bins; ++b) masses[b] = mass[b].value();
  j["edges"] = json_vector(edges);
  j["mass"] = json_vector(masses);
  return j;
}

std::string render_document(const Json& report, const RunManifest& manifest) {
  Json doc;
  doc["report"] = report;
  doc["manifest"] = to_json(manifest);
  return doc.dump(2) + "\n";
}

}  // namespace toricdeg
