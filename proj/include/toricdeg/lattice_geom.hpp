#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toricdeg/rational.hpp"

namespace toricdeg {

/// A full-dimensional convex polytope with rational vertices, held in both
/// V- and H-representation. Facets are ⟨normal, x⟩ <= offset with primitive
/// integer normals.
///
/// Vertices and facets are sorted lexicographically, so two polytopes built
/// from the same point set compare equal regardless of input order.
class LatticePolytope {
 public:
  struct Facet {
    IntVector normal;
    Rational offset;
    /// Indices into vertices() of the vertices lying on this facet, ascending.
    std::vector<int> vertex_indices;

    bool operator==(const Facet&) const = default;
  };

  int dim() const { return dim_; }
  const std::vector<RationalVector>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::string& name() const { return name_; }

  /// Geometric equality; the name is ignored.
  bool operator==(const LatticePolytope& other) const {
    return dim_ == other.dim_ && vertices_ == other.vertices_ && facets_ == other.facets_;
  }

 private:
  friend LatticePolytope build_polytope(std::vector<RationalVector> points, std::string name);
  friend LatticePolytope translate(const LatticePolytope& polytope, const IntVector& shift);

  int dim_ = 0;
  std::vector<RationalVector> vertices_;
  std::vector<Facet> facets_;
  std::string name_;
};

/// Affine function x ↦ ⟨gradient, x⟩ + constant with rational coefficients.
struct AffineForm {
  RationalVector gradient;
  Rational constant = 0;

  static AffineForm constant_form(int dim, Rational c) { return {RationalVector(dim, Rational(0)), std::move(c)}; }
  static AffineForm coordinate(int dim, int i) {
    AffineForm f{RationalVector(dim, Rational(0)), Rational(0)};
    f.gradient[i] = 1;
    return f;
  }
  Rational operator()(const RationalVector& x) const { return dot(gradient, x) + constant; }
};

/// Simplices covering a polytope (up to measure zero) together with
/// per-facet (n-1)-simplices covering each facet.
struct SimplicialDecomposition {
  std::vector<std::vector<RationalVector>> simplices;
  std::vector<std::vector<std::vector<RationalVector>>> facet_simplices;
};

enum class TriangulationApex {
  /// Cone every facet over the origin when it is interior, otherwise over the
  /// vertex centroid.
  kInteriorPoint,
  /// Pull from the lexicographically smallest vertex: cone over the facets
  /// that miss it. Used as an independent second triangulation.
  kLexMinVertex,
};

/// Convex hull of the given points. Duplicates and non-extreme points are
/// dropped. Throws DegeneratePolytope when the hull is not full-dimensional.
LatticePolytope build_polytope(std::vector<RationalVector> points, std::string name = "");

/// Integer vertices, origin in the interior and every facet offset equal to 1.
bool is_reflexive(const LatticePolytope& polytope);

/// Integer points of m·P in lexicographic order.
std::vector<IntVector> lattice_points(const LatticePolytope& polytope, std::int64_t m);

/// Euclidean volume, exact.
Rational volume(const LatticePolytope& polytope);

/// Integral of an affine form over the boundary against the lattice-normalized
/// measure: Euclidean facet measure divided by |normal|.
Rational boundary_integral(const LatticePolytope& polytope, const AffineForm& form);

SimplicialDecomposition triangulate(const LatticePolytope& polytope,
                                    TriangulationApex apex = TriangulationApex::kInteriorPoint);

/// P + shift; facet offsets become offset + ⟨normal, shift⟩.
LatticePolytope translate(const LatticePolytope& polytope, const IntVector& shift);

/// max over vertices of the Euclidean norm.
double max_vertex_norm(const LatticePolytope& polytope);

/// Lebesgue measure of an n-simplex in R^n, exact.
Rational simplex_volume(const std::vector<RationalVector>& vertices);

/// Lattice-normalized (n-1)-measure of an (n-1)-simplex lying in a hyperplane
/// with primitive normal `normal`.
Rational facet_simplex_measure(const std::vector<RationalVector>& vertices, const IntVector& normal);

}  // namespace toricdeg
