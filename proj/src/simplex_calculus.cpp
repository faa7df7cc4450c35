#include "toricdeg/simplex_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toricdeg/errors.hpp"

namespace toricdeg {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Σ_{j>=skip} h_j(d)/(j+k)!, truncated once the a-priori bound
// max|d|^j/(j!k!) on the remaining terms drops below 1e-17 of the sum.
double symmetric_series(std::span<const double> d, int skip) {
  const int k = static_cast<int>(d.size()) - 1;
  double magnitude = 0.0;
  for (double x : d) magnitude = std::max(magnitude, std::abs(x));

  std::vector<double> h(d.size(), 1.0);
  double inv_fact = 1.0 / factorial(k);
  double sum = (skip == 0) ? inv_fact : 0.0;
  double bound = inv_fact;
  for (int j = 1; j < 400; ++j) {
    double run = 0.0;
    for (std::size_t r = 0; r < d.size(); ++r) {
      run += d[r] * h[r];
      h[r] = run;
    }
    inv_fact /= static_cast<double>(j + k);
    bound *= magnitude / j;
    if (j >= skip) sum += h[k] * inv_fact;
    if (j >= skip && (bound < 1e-17 * std::abs(sum) || bound < 1e-300)) break;
  }
  return sum;
}

double centered_series(std::span<const double> nodes) {
  const double c = std::accumulate(nodes.begin(), nodes.end(), 0.0) / static_cast<double>(nodes.size());
  std::vector<double> d(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) d[i] = nodes[i] - c;
  return std::exp(c) * symmetric_series(d, 0);
}

// Divided difference over ascending nodes.
double divided_difference_sorted(std::span<const double> x) {
  const std::size_t count = x.size();
  if (count == 1) return std::exp(x[0]);
  if (x.back() - x.front() < kDividedDifferenceSwitch) return centered_series(x);
  std::vector<double> table(count);
  for (std::size_t i = 0; i < count; ++i) table[i] = std::exp(x[i]);
  for (std::size_t level = 1; level < count; ++level) {
    for (std::size_t i = 0; i + level < count; ++i) {
      const double gap = x[i + level] - x[i];
      if (gap < kDividedDifferenceSwitch) {
        table[i] = centered_series(x.subspan(i, level + 1));
      } else {
        table[i] = (table[i + 1] - table[i]) / gap;
      }
    }
  }
  return table[0];
}

double dd(std::vector<double> nodes) {
  std::sort(nodes.begin(), nodes.end());
  return divided_difference_sorted(nodes);
}

}  // namespace

Simplex::Simplex(std::vector<RationalVector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw DegenerateSimplex("simplex has no vertices");
  const std::size_t n = vertices_.front().size();
  if (vertices_.size() != n + 1) throw DegenerateSimplex("simplex needs n+1 vertices");
  for (const auto& v : vertices_) {
    if (v.size() != n) throw DegenerateSimplex("simplex vertices have mixed dimensions");
  }
  volume_ = simplex_volume(vertices_);
  if (volume_ == 0) throw DegenerateSimplex("simplex has zero volume");
  for (const auto& v : vertices_) vertices_double_.push_back(to_double(v));
}

double exp_divided_difference(std::span<const double> nodes) { return dd({nodes.begin(), nodes.end()}); }

double exp_divided_difference_tail(std::span<const double> nodes, int skip) {
  double magnitude = 0.0;
  for (double x : nodes) magnitude = std::max(magnitude, std::abs(x));
  if (magnitude <= 2.0) return symmetric_series(nodes, skip);
  // Far from the origin the tail is a sizeable part of the whole, so
  // subtracting the leading terms loses little.
  const int k = static_cast<int>(nodes.size()) - 1;
  double head = 0.0;
  std::vector<double> h(nodes.size(), 1.0);
  double inv_fact = 1.0 / factorial(k);
  if (skip > 0) head += inv_fact;
  for (int j = 1; j < skip; ++j) {
    double run = 0.0;
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      run += nodes[r] * h[r];
      h[r] = run;
    }
    inv_fact /= static_cast<double>(j + k);
    head += h[k] * inv_fact;
  }
  return exp_divided_difference(nodes) - head;
}

Rational integral_linear_simplex(const Simplex& simplex, const AffineForm& form) {
  Rational mean = 0;
  for (const auto& v : simplex.vertices()) mean += form(v);
  mean /= static_cast<long>(simplex.vertices().size());
  return simplex.volume() * mean;
}

double integral_exp_simplex(const Simplex& simplex, std::span<const double> a) {
  std::vector<double> nodes;
  for (const auto& v : simplex.vertices_double()) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) t -= a[i] * v[i];
    nodes.push_back(t);
  }
  const int n = simplex.dim();
  return factorial(n) * simplex.volume().get_d() * dd(std::move(nodes));
}

ExpMoments exp_moments_simplex(const Simplex& simplex, std::span<const double> a, std::span<const double> center,
                               double log_shift, int order) {
  const int n = simplex.dim();
  const auto& verts = simplex.vertices_double();
  std::vector<double> nodes;
  for (const auto& v : verts) {
    double t = -log_shift;
    for (int i = 0; i < n; ++i) t -= a[i] * v[i];
    nodes.push_back(t);
  }
  // d/dt_k f[T] = f[T, t_k] (node multiplicity raised by one), which turns
  // derivatives in `a` into polynomial moments.
  const double weight = factorial(n) * simplex.volume().get_d();
  ExpMoments out;
  out.mass = weight * dd(nodes);
  if (order < 1) return out;

  std::vector<std::vector<double>> rel(verts.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < verts.size(); ++k) {
    for (int i = 0; i < n; ++i) rel[k][i] = verts[k][i] - center[i];
  }
  out.first.assign(n, 0.0);
  std::vector<double> ext = nodes;
  ext.push_back(0.0);
  for (std::size_t k = 0; k < verts.size(); ++k) {
    ext.back() = nodes[k];
    const double f = dd(ext);
    for (int i = 0; i < n; ++i) out.first[i] += weight * rel[k][i] * f;
  }
  if (order < 2) return out;

  out.second.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> ext2 = nodes;
  ext2.push_back(0.0);
  ext2.push_back(0.0);
  for (std::size_t k = 0; k < verts.size(); ++k) {
    for (std::size_t l = k; l < verts.size(); ++l) {
      ext2[ext2.size() - 2] = nodes[k];
      ext2.back() = nodes[l];
      // The (k,l) and (l,k) terms are merged; a doubled node carries factor 2.
      const double f = weight * (k == l ? 2.0 : 1.0) * dd(ext2);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double c = (k == l) ? rel[k][i] * rel[k][j] : rel[k][i] * rel[l][j] + rel[l][i] * rel[k][j];
          out.second[static_cast<std::size_t>(i) * n + j] += c * f;
        }
      }
    }
  }
  return out;
}

std::vector<Simplex> simplices_of(const LatticePolytope& polytope, TriangulationApex apex) {
  std::vector<Simplex> out;
  for (auto& s : triangulate(polytope, apex).simplices) out.emplace_back(std::move(s));
  return out;
}

Rational integral_linear_polytope(const LatticePolytope& polytope, const AffineForm& form) {
  Rational total = 0;
  for (const auto& s : simplices_of(polytope)) total += integral_linear_simplex(s, form);
  return total;
}

RationalVector interior_moments(const LatticePolytope& polytope) {
  const int n = polytope.dim();
  RationalVector out(n, Rational(0));
  for (const auto& s : simplices_of(polytope)) {
    for (int i = 0; i < n; ++i) out[i] += integral_linear_simplex(s, AffineForm::coordinate(n, i));
  }
  return out;
}

RationalVector boundary_moments(const LatticePolytope& polytope) {
  const int n = polytope.dim();
  RationalVector out(n, Rational(0));
  const auto decomposition = triangulate(polytope);
  for (std::size_t f = 0; f < polytope.facets().size(); ++f) {
    for (const auto& s : decomposition.facet_simplices[f]) {
      const Rational measure = facet_simplex_measure(s, polytope.facets()[f].normal);
      for (int i = 0; i < n; ++i) {
        Rational mean = 0;
        for (const auto& v : s) mean += v[i];
        mean /= static_cast<long>(s.size());
        out[i] += measure * mean;
      }
    }
  }
  return out;
}

RationalVector barycenter(const LatticePolytope& polytope) {
  RationalVector m = interior_moments(polytope);
  const Rational vol = volume(polytope);
  for (auto& x : m) x /= vol;
  return m;
}

}  // namespace toricdeg
