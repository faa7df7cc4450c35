#include "toricdeg/lattice_geom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "toricdeg/errors.hpp"
#include "toricdeg/lattice_kernels.hpp"

namespace toricdeg {

namespace {

RationalVector sub(const RationalVector& a, const RationalVector& b) {
  RationalVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

Rational factorial(int k) {
  Rational f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Normal of the hyperplane spanned by n points in R^n, via signed cofactors of
// the (n-1)×n matrix of edge vectors. Zero when the points are affinely
// dependent.
RationalVector hyperplane_normal(const std::vector<const RationalVector*>& pts) {
  const std::size_t n = pts.front()->size();
  std::vector<RationalVector> edges;
  for (std::size_t k = 1; k < pts.size(); ++k) edges.push_back(sub(*pts[k], *pts[0]));
  RationalVector normal(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<RationalVector> minor;
    for (const auto& e : edges) {
      RationalVector row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(e[c]);
      }
      minor.push_back(std::move(row));
    }
    Rational d = minor.empty() ? Rational(1) : determinant(minor);
    normal[j] = (j % 2 == 0) ? d : Rational(-d);
  }
  return normal;
}

int affine_dimension(const std::vector<RationalVector>& vertices, const std::vector<int>& subset) {
  if (subset.empty()) return -1;
  std::vector<RationalVector> diffs;
  for (std::size_t k = 1; k < subset.size(); ++k) diffs.push_back(sub(vertices[subset[k]], vertices[subset[0]]));
  return rank(diffs);
}

// Facets of the face `face` (vertex indices, affine dimension d): the maximal
// proper intersections with facets of the polytope that have dimension d-1.
std::vector<std::vector<int>> subfaces(const LatticePolytope& P, const std::vector<int>& face, int d) {
  std::set<std::vector<int>> found;
  for (const auto& f : P.facets()) {
    std::vector<int> meet;
    std::set_intersection(face.begin(), face.end(), f.vertex_indices.begin(), f.vertex_indices.end(),
                          std::back_inserter(meet));
    if (static_cast<int>(meet.size()) < d || meet.size() == face.size()) continue;
    if (affine_dimension(P.vertices(), meet) == d - 1) found.insert(std::move(meet));
  }
  return {found.begin(), found.end()};
}

// Pulling triangulation of a face from its smallest vertex index (vertices are
// stored sorted, so this is the lexicographically smallest vertex).
std::vector<std::vector<int>> triangulate_face(const LatticePolytope& P, const std::vector<int>& face, int d) {
  if (d == 0) return {{face.front()}};
  const int apex = face.front();
  std::vector<std::vector<int>> out;
  for (const auto& sub_face : subfaces(P, face, d)) {
    if (std::binary_search(sub_face.begin(), sub_face.end(), apex)) continue;
    for (auto simplex : triangulate_face(P, sub_face, d - 1)) {
      simplex.push_back(apex);
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

std::vector<RationalVector> gather(const LatticePolytope& P, const std::vector<int>& idx) {
  std::vector<RationalVector> pts;
  pts.reserve(idx.size());
  for (int i : idx) pts.push_back(P.vertices()[i]);
  return pts;
}

}  // namespace

LatticePolytope build_polytope(std::vector<RationalVector> points, std::string name) {
  if (points.empty()) throw DegeneratePolytope("no points given");
  const std::size_t n = points.front().size();
  if (n == 0) throw DegeneratePolytope("dimension must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) {
      throw DegeneratePolytope("point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                               " coordinates, expected " + std::to_string(n));
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < n + 1) throw DegeneratePolytope("fewer than n+1 distinct points");
  {
    std::vector<RationalVector> diffs;
    for (std::size_t k = 1; k < points.size(); ++k) diffs.push_back(sub(points[k], points[0]));
    if (rank(diffs) < static_cast<int>(n)) throw DegeneratePolytope("convex hull is not full-dimensional");
  }

  // Every facet hyperplane passes through n affinely independent input
  // points; test each n-subset's hyperplane for being supporting.
  std::set<std::pair<IntVector, Rational>> facet_set;
  const std::size_t count = points.size();
  std::vector<std::size_t> comb(n);
  for (std::size_t i = 0; i < n; ++i) comb[i] = i;
  std::vector<const RationalVector*> chosen(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) chosen[i] = &points[comb[i]];
    RationalVector w = hyperplane_normal(chosen);
    if (std::any_of(w.begin(), w.end(), [](const Rational& q) { return q != 0; })) {
      const Rational c = dot(w, *chosen[0]);
      bool any_above = false, any_below = false;
      for (const auto& p : points) {
        const int s = sgn(Rational(dot(w, p) - c));
        any_above |= s > 0;
        any_below |= s < 0;
        if (any_above && any_below) break;
      }
      if (!(any_above && any_below)) {
        if (any_above) {
          for (auto& q : w) q = -q;
        }
        IntVector normal = primitive_integer(w);
        Rational offset = dot(normal, *chosen[0]);
        facet_set.emplace(std::move(normal), std::move(offset));
      }
    }
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && comb[i] == count - n + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++comb[i];
    for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }

  LatticePolytope P;
  P.dim_ = static_cast<int>(n);
  P.name_ = std::move(name);

  // A point is a vertex iff the normals of the facets through it span R^n.
  for (const auto& p : points) {
    std::vector<RationalVector> tight;
    for (const auto& [normal, offset] : facet_set) {
      if (dot(normal, p) == offset) {
        RationalVector row;
        for (auto x : normal) row.emplace_back(static_cast<long>(x));
        tight.push_back(std::move(row));
      }
    }
    if (rank(tight) == static_cast<int>(n)) P.vertices_.push_back(p);
  }

  for (const auto& [normal, offset] : facet_set) {
    LatticePolytope::Facet f{normal, offset, {}};
    for (std::size_t v = 0; v < P.vertices_.size(); ++v) {
      if (dot(normal, P.vertices_[v]) == offset) f.vertex_indices.push_back(static_cast<int>(v));
    }
    P.facets_.push_back(std::move(f));
  }
  return P;
}

bool is_reflexive(const LatticePolytope& polytope) {
  for (const auto& v : polytope.vertices()) {
    for (const auto& x : v) {
      if (!is_integer(x)) return false;
    }
  }
  for (const auto& f : polytope.facets()) {
    if (f.offset != 1) return false;
  }
  return true;
}

std::vector<IntVector> lattice_points(const LatticePolytope& polytope, std::int64_t m) {
  return kernels::materialize(kernels::enumerate_rows(polytope, m));
}

Rational simplex_volume(const std::vector<RationalVector>& vertices) {
  std::vector<RationalVector> rows;
  for (std::size_t k = 1; k < vertices.size(); ++k) rows.push_back(sub(vertices[k], vertices[0]));
  return abs(determinant(rows)) / factorial(static_cast<int>(rows.size()));
}

Rational facet_simplex_measure(const std::vector<RationalVector>& vertices, const IntVector& normal) {
  const int n = static_cast<int>(normal.size());
  std::vector<RationalVector> rows;
  for (std::size_t k = 1; k < vertices.size(); ++k) rows.push_back(sub(vertices[k], vertices[0]));
  RationalVector nv;
  Rational norm2 = 0;
  for (auto x : normal) {
    nv.emplace_back(static_cast<long>(x));
    norm2 += Rational(static_cast<long>(x * x));
  }
  rows.push_back(std::move(nv));
  // |det[edges, v]| = (n-1)!·vol_{n-1}·|v|, and the lattice measure is vol_{n-1}/|v|.
  return abs(determinant(rows)) / (factorial(n - 1) * norm2);
}

Rational volume(const LatticePolytope& polytope) {
  Rational total = 0;
  for (const auto& s : triangulate(polytope).simplices) total += simplex_volume(s);
  return total;
}

Rational boundary_integral(const LatticePolytope& polytope, const AffineForm& form) {
  const auto decomposition = triangulate(polytope);
  Rational total = 0;
  for (std::size_t f = 0; f < polytope.facets().size(); ++f) {
    const auto& normal = polytope.facets()[f].normal;
    for (const auto& s : decomposition.facet_simplices[f]) {
      Rational mean = 0;
      for (const auto& v : s) mean += form(v);
      mean /= static_cast<long>(s.size());
      total += facet_simplex_measure(s, normal) * mean;
    }
  }
  return total;
}

SimplicialDecomposition triangulate(const LatticePolytope& polytope, TriangulationApex apex) {
  const int n = polytope.dim();
  SimplicialDecomposition out;
  std::vector<std::vector<std::vector<int>>> facet_index_simplices;
  for (const auto& f : polytope.facets()) {
    facet_index_simplices.push_back(triangulate_face(polytope, f.vertex_indices, n - 1));
    std::vector<std::vector<RationalVector>> pieces;
    for (const auto& s : facet_index_simplices.back()) pieces.push_back(gather(polytope, s));
    out.facet_simplices.push_back(std::move(pieces));
  }

  if (apex == TriangulationApex::kInteriorPoint) {
    RationalVector base(n, Rational(0));
    const bool origin_interior = std::all_of(polytope.facets().begin(), polytope.facets().end(),
                                             [](const auto& f) { return f.offset > 0; });
    if (!origin_interior) {
      for (const auto& v : polytope.vertices()) {
        for (int i = 0; i < n; ++i) base[i] += v[i];
      }
      for (auto& x : base) x /= static_cast<long>(polytope.vertices().size());
    }
    for (const auto& pieces : out.facet_simplices) {
      for (auto s : pieces) {
        s.push_back(base);
        out.simplices.push_back(std::move(s));
      }
    }
  } else {
    for (std::size_t f = 0; f < polytope.facets().size(); ++f) {
      const auto& idx = polytope.facets()[f].vertex_indices;
      if (std::binary_search(idx.begin(), idx.end(), 0)) continue;
      for (auto s : out.facet_simplices[f]) {
        s.push_back(polytope.vertices().front());
        out.simplices.push_back(std::move(s));
      }
    }
  }
  return out;
}

LatticePolytope translate(const LatticePolytope& polytope, const IntVector& shift) {
  LatticePolytope P = polytope;
  for (auto& v : P.vertices_) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += Rational(static_cast<long>(shift[i]));
  }
  for (auto& f : P.facets_) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < shift.size(); ++i) s += f.normal[i] * shift[i];
    f.offset += Rational(static_cast<long>(s));
  }
  return P;
}

double max_vertex_norm(const LatticePolytope& polytope) {
  double best = 0.0;
  for (const auto& v : polytope.vertices()) {
    double s = 0.0;
    for (const auto& x : v) s += x.get_d() * x.get_d();
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

}  // namespace toricdeg
