#include "toricdeg/weight_rings.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "toricdeg/errors.hpp"
#include "toricdeg/lattice_kernels.hpp"
#include "toricdeg/simplex_calculus.hpp"

namespace toricdeg {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double dot(std::span<const std::int64_t> a, std::span<const double> xi) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * xi[i];
  return s;
}

void require_dim(int expected, const TorusVector& xi) {
  if (xi.dim() != expected) {
    throw std::invalid_argument("torus vector has dimension " + std::to_string(xi.dim()) + ", expected " +
                                std::to_string(expected));
  }
}

// Value at h = 0 of the polynomial through (h_i, y_i) (Neville).
double extrapolate_to_zero(std::vector<double> h, std::vector<double> y) {
  const std::size_t k = h.size();
  for (std::size_t level = 1; level < k; ++level) {
    for (std::size_t i = 0; i + level < k; ++i) {
      y[i] = (h[i + level] * y[i] - h[i] * y[i + 1]) / (h[i + level] - h[i]);
    }
  }
  return y[0];
}

double relative_character_tail(int dim, int m_max, double t) {
  KahanSum tail;
  for (int m = m_max + 1; m <= m_max + 4000; ++m) tail += std::exp(-t * m) * std::pow(m, dim + 1);
  return tail.value() / (factorial(dim + 1) / std::pow(t, dim + 2));
}

}  // namespace

WeightTable WeightTable::toric(const LatticePolytope& polytope, int m_max) {
  if (!is_reflexive(polytope)) throw NotReflexive("polytope '" + polytope.name() + "' is not reflexive");
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  WeightTable t;
  t.dim_ = polytope.dim();
  t.m_max_ = m_max;
  t.weight_bound_ = max_vertex_norm(polytope);
  t.source_ = WeightSource::kToric;
  t.polytope_ = polytope;
  return t;
}

WeightTable WeightTable::external(int dim, std::vector<std::vector<WeightSpace>> degrees) {
  if (dim < 1) throw std::invalid_argument("weight table dimension must be positive");
  if (degrees.empty()) throw EmptyDegree("weight table has no degrees");
  WeightTable t;
  t.dim_ = dim;
  t.m_max_ = static_cast<int>(degrees.size());
  t.source_ = WeightSource::kExternal;
  double bound = 0.0;
  for (std::size_t d = 0; d < degrees.size(); ++d) {
    const int m = static_cast<int>(d) + 1;
    auto& spaces = degrees[d];
    if (spaces.empty()) throw EmptyDegree("degree " + std::to_string(m) + " has no weight spaces");
    std::map<IntVector, std::int64_t> merged;
    for (auto& s : spaces) {
      if (static_cast<int>(s.weight.size()) != dim) throw std::invalid_argument("weight of wrong dimension");
      if (s.multiplicity < 1) throw std::invalid_argument("multiplicities must be positive");
      merged[s.weight] += s.multiplicity;
    }
    spaces.clear();
    for (auto& [w, mult] : merged) {
      double norm2 = 0.0;
      for (auto x : w) norm2 += static_cast<double>(x) * static_cast<double>(x);
      bound = std::max(bound, std::sqrt(norm2) / m);
      spaces.push_back({w, mult});
    }
  }
  t.weight_bound_ = bound;
  t.degrees_ = std::move(degrees);
  return t;
}

void WeightTable::check_degree(int m) const {
  if (m < 1 || m > m_max_) {
    throw DegreeOutOfRange("degree " + std::to_string(m) + " outside 1.." + std::to_string(m_max_));
  }
}

std::int64_t WeightTable::total_dimension(int m) const {
  check_degree(m);
  if (polytope_) return kernels::count_points(kernels::enumerate_rows(*polytope_, m));
  std::int64_t n = 0;
  for (const auto& s : degrees_[m - 1]) n += s.multiplicity;
  return n;
}

IntVector WeightTable::weight_moments(int m) const {
  check_degree(m);
  if (polytope_) return kernels::coordinate_sums(kernels::enumerate_rows(*polytope_, m));
  IntVector sums(dim_, 0);
  for (const auto& s : degrees_[m - 1]) {
    for (int i = 0; i < dim_; ++i) sums[i] += s.weight[i] * s.multiplicity;
  }
  return sums;
}

double WeightTable::exp_sum(const TorusVector& xi, int m) const {
  check_degree(m);
  require_dim(dim_, xi);
  const double scale = 1.0 / m;
  if (polytope_) return kernels::exp_sum(kernels::enumerate_rows(*polytope_, m), xi.span(), scale);
  KahanSum s;
  for (const auto& w : degrees_[m - 1]) s += std::exp(-scale * dot(w.weight, xi.span())) * static_cast<double>(w.multiplicity);
  return s.value();
}

std::vector<WeightSpace> WeightTable::weights(int m) const {
  check_degree(m);
  if (!polytope_) return degrees_[m - 1];
  std::vector<WeightSpace> out;
  for (auto& p : lattice_points(*polytope_, m)) out.push_back({std::move(p), 1});
  return out;
}

WeightTable weight_table_toric(const LatticePolytope& polytope, int m_max) { return WeightTable::toric(polytope, m_max); }

WeightTable parse_weight_table(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty weight table", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const int dim = static_cast<int>(header.size()) - 2;
  if (dim < 1 || header.front() != "m" || header.back() != "dim") {
    throw ParseError("header must be m,a1,...,an,dim", line_no);
  }
  for (int i = 0; i < dim; ++i) {
    if (header[i + 1] != "a" + std::to_string(i + 1)) throw ParseError("header must be m,a1,...,an,dim", line_no);
  }

  std::map<int, std::vector<WeightSpace>> by_degree;
  std::pair<int, IntVector> previous{0, {}};
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::int64_t> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      long long value = 0;
      try {
        value = std::stoll(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("field '" + cell + "' is not an integer", line_no);
      }
      if (used != cell.size()) throw ParseError("field '" + cell + "' is not an integer", line_no);
      cells.push_back(value);
    }
    if (line.back() == ',') throw ParseError("empty trailing field", line_no);
    if (static_cast<int>(cells.size()) != dim + 2) {
      throw ParseError("expected " + std::to_string(dim + 2) + " fields, found " + std::to_string(cells.size()), line_no);
    }
    const auto m = cells.front();
    if (m < 1) throw ParseError("degree must be at least 1", line_no);
    if (cells.back() < 1) throw ParseError("dim must be positive", line_no);
    IntVector weight(cells.begin() + 1, cells.end() - 1);
    std::pair<int, IntVector> key{static_cast<int>(m), weight};
    if (!(previous < key)) throw ParseError("rows must be strictly sorted by (m, weight)", line_no);
    previous = key;
    by_degree[static_cast<int>(m)].push_back({std::move(weight), cells.back()});
  }
  if (by_degree.empty()) throw EmptyDegree("weight table has no rows");
  const int m_max = by_degree.rbegin()->first;
  std::vector<std::vector<WeightSpace>> degrees(m_max);
  for (int m = 1; m <= m_max; ++m) {
    auto it = by_degree.find(m);
    if (it == by_degree.end()) throw EmptyDegree("degree " + std::to_string(m) + " has no weight spaces");
    degrees[m - 1] = std::move(it->second);
  }
  return WeightTable::external(dim, std::move(degrees));
}

WeightTable load_weight_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open weight table '" + path + "'");
  return parse_weight_table(in);
}

void write_weight_table(const WeightTable& table, std::ostream& out) {
  out << "m";
  for (int i = 1; i <= table.dim(); ++i) out << ",a" << i;
  out << ",dim\n";
  for (int m = 1; m <= table.m_max(); ++m) {
    for (const auto& w : table.weights(m)) {
      out << m;
      for (auto a : w.weight) out << ',' << a;
      out << ',' << w.multiplicity << '\n';
    }
  }
}

double total_weight(const WeightTable& table, const TorusVector& xi, int m) {
  require_dim(table.dim(), xi);
  const IntVector sums = table.weight_moments(m);
  KahanSum s;
  for (int i = 0; i < table.dim(); ++i) s += static_cast<double>(sums[i]) * xi[i];
  return s.value();
}

AsymptoticFit fit_b0_b1(const WeightTable& table, const TorusVector& xi) {
  const int m_max = table.m_max();
  if (m_max < 8) throw InsufficientDegrees("fit_b0_b1 needs m_max >= 8, table has " + std::to_string(m_max));
  const int n = table.dim();
  const int first = m_max / 2;
  const int rows = m_max - first + 1;
  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd y(rows);
  double scale_y = 0.0;
  for (int r = 0; r < rows; ++r) {
    const int m = first + r;
    const double s = static_cast<double>(m) / m_max;
    A(r, 0) = std::pow(s, n + 1);
    A(r, 1) = std::pow(s, n);
    A(r, 2) = std::pow(s, n - 1);
    y(r) = total_weight(table, xi, m);
    scale_y = std::max(scale_y, std::abs(y(r)));
  }
  AsymptoticFit fit;
  if (scale_y == 0.0) return fit;
  const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(y);
  fit.b0 = beta(0) / std::pow(m_max, n + 1);
  fit.b1 = beta(1) / std::pow(m_max, n);
  const Eigen::VectorXd resid = A * beta - y;
  fit.residual = resid.cwiseAbs().maxCoeff() / scale_y;
  return fit;
}

ExactWeightAsymptotics b0_b1_exact(const LatticePolytope& polytope, const RationalVector& xi) {
  const RationalVector interior = interior_moments(polytope);
  const RationalVector boundary = boundary_moments(polytope);
  return {dot(interior, xi), dot(boundary, xi) / 2};
}

WeightAsymptotics b0_b1_exact(const LatticePolytope& polytope, const TorusVector& xi) {
  require_dim(polytope.dim(), xi);
  const auto interior = to_double(interior_moments(polytope));
  const auto boundary = to_double(boundary_moments(polytope));
  KahanSum b0, b1;
  for (int i = 0; i < polytope.dim(); ++i) {
    b0 += interior[i] * xi[i];
    b1 += 0.5 * boundary[i] * xi[i];
  }
  return {b0.value(), b1.value()};
}

double c0_bruteforce(const WeightTable& table, const TorusVector& xi, int m) {
  const int n = table.dim();
  return factorial(n) * table.exp_sum(xi, m) / std::pow(static_cast<double>(m), n);
}

double c0_exact(const LatticePolytope& polytope, const TorusVector& xi) {
  require_dim(polytope.dim(), xi);
  KahanSum s;
  for (const auto& simplex : simplices_of(polytope)) s += integral_exp_simplex(simplex, xi.span());
  return factorial(polytope.dim()) * s.value();
}

double log_c0_exact(const LatticePolytope& polytope, const TorusVector& xi) {
  require_dim(polytope.dim(), xi);
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& v : polytope.vertices()) {
    double t = 0.0;
    for (int i = 0; i < polytope.dim(); ++i) t -= xi[i] * v[i].get_d();
    shift = std::max(shift, t);
  }
  const std::vector<double> origin(polytope.dim(), 0.0);
  KahanSum s;
  for (const auto& simplex : simplices_of(polytope)) {
    s += exp_moments_simplex(simplex, xi.span(), origin, shift, 0).mass;
  }
  return std::log(factorial(polytope.dim())) + shift + std::log(s.value());
}

double c0_extrapolated(const WeightTable& table, const TorusVector& xi) {
  const int m_max = table.m_max();
  if (m_max < 4) throw InsufficientDegrees("extrapolation needs at least four degrees");
  std::vector<double> h, y;
  for (int m = m_max - 3; m <= m_max; ++m) {
    h.push_back(1.0 / m);
    y.push_back(c0_bruteforce(table, xi, m));
  }
  return extrapolate_to_zero(std::move(h), std::move(y));
}

double volume_extrapolated(const WeightTable& table) {
  const int m_max = table.m_max();
  if (m_max < 4) throw InsufficientDegrees("extrapolation needs at least four degrees");
  const int n = table.dim();
  std::vector<double> h, y;
  for (int m = m_max - 3; m <= m_max; ++m) {
    h.push_back(1.0 / m);
    y.push_back(factorial(n) * static_cast<double>(table.total_dimension(m)) / std::pow(static_cast<double>(m), n));
  }
  return extrapolate_to_zero(std::move(h), std::move(y));
}

LipschitzCheck c0_lipschitz_check(const LatticePolytope& polytope, const TorusVector& xi, const TorusVector& xi_other) {
  require_dim(polytope.dim(), xi);
  require_dim(polytope.dim(), xi_other);
  const double radius = max_vertex_norm(polytope);
  double diff2 = 0.0;
  for (int i = 0; i < xi.dim(); ++i) diff2 += (xi[i] - xi_other[i]) * (xi[i] - xi_other[i]);
  LipschitzCheck check;
  check.bound = factorial(polytope.dim()) * volume(polytope).get_d() * radius *
                std::exp(radius * std::max(xi.norm(), xi_other.norm())) * std::sqrt(diff2);
  check.actual = std::abs(c0_exact(polytope, xi) - c0_exact(polytope, xi_other));
  check.ok = check.actual <= check.bound * (1.0 + 1e-9);
  return check;
}

DHSample dh_measure(const WeightTable& table, const TorusVector& xi, int m) {
  require_dim(table.dim(), xi);
  const auto spaces = table.weights(m);
  std::int64_t total = 0;
  for (const auto& s : spaces) total += s.multiplicity;
  std::vector<std::pair<double, std::int64_t>> raw;
  raw.reserve(spaces.size());
  for (const auto& s : spaces) raw.emplace_back(dot(s.weight, xi.span()) / m, s.multiplicity);
  std::sort(raw.begin(), raw.end());

  DHSample sample;
  sample.level = m;
  const double inv_total = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < raw.size();) {
    std::int64_t mult = 0;
    std::size_t j = i;
    while (j < raw.size() && raw[j].first == raw[i].first) mult += raw[j++].second;
    sample.atoms.push_back({raw[i].first, static_cast<double>(mult) * inv_total});
    i = j;
  }
  return sample;
}

double dh_exp_moment(const DHSample& sample) {
  KahanSum s;
  for (const auto& a : sample.atoms) s += std::exp(-a.lambda) * a.mass;
  return s.value();
}

double weight_character(const WeightTable& table, const TorusVector& xi, double t, int m_cut) {
  if (!(t > 0.0)) throw std::invalid_argument("weight character needs t > 0");
  if (m_cut < 1 || m_cut > table.m_max()) {
    throw DegreeOutOfRange("cutoff " + std::to_string(m_cut) + " outside 1.." + std::to_string(table.m_max()));
  }
  KahanSum s;
  for (int m = 1; m <= m_cut; ++m) s += std::exp(-t * m) * total_weight(table, xi, m);
  return s.value();
}

int laurent_required_m_max(int dim) {
  const auto& ts = laurent_sample_points();
  const double t_min = *std::min_element(ts.begin(), ts.end());
  int m = 1;
  while (relative_character_tail(dim, m, t_min) >= kLaurentTruncationTolerance) ++m;
  return m;
}

LaurentFit laurent_fit(const WeightTable& table, const TorusVector& xi) {
  const int n = table.dim();
  const int required = laurent_required_m_max(n);
  if (table.m_max() < required) {
    throw TruncationTooCoarse("weight character truncated at m_max=" + std::to_string(table.m_max()) +
                                  " is too coarse; need m_max >= " + std::to_string(required),
                              required);
  }
  LaurentFit fit;
  fit.ts = laurent_sample_points();
  const int k = static_cast<int>(fit.ts.size());
  Eigen::MatrixXd A(k, 3);
  Eigen::VectorXd y(k);
  for (int r = 0; r < k; ++r) {
    const double t = fit.ts[r];
    const double c = weight_character(table, xi, t, table.m_max());
    fit.values.push_back(c);
    A(r, 0) = 1.0;
    A(r, 1) = t;
    A(r, 2) = t * t;
    y(r) = std::pow(t, n + 2) * c;
  }
  if (y.cwiseAbs().maxCoeff() == 0.0) return fit;
  const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(y);
  fit.b0_hat = beta(0) / factorial(n + 1);
  // The t^{-(n+1)} coefficient of Σ e^{-tm}(b0 m^{n+1} + b1 m^n + ...) is b1·n!.
  fit.b1_hat = beta(1) / factorial(n);
  return fit;
}

}  // namespace toricdeg
