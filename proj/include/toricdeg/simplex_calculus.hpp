#pragma once

#include <span>
#include <vector>

#include "toricdeg/lattice_geom.hpp"
#include "toricdeg/rational.hpp"

namespace toricdeg {

/// Nondegenerate n-simplex in R^n with its exact volume cached.
class Simplex {
 public:
  /// Throws DegenerateSimplex unless there are n+1 affinely independent points.
  explicit Simplex(std::vector<RationalVector> vertices);

  int dim() const { return static_cast<int>(vertices_.size()) - 1; }
  const std::vector<RationalVector>& vertices() const { return vertices_; }
  const std::vector<std::vector<double>>& vertices_double() const { return vertices_double_; }
  const Rational& volume() const { return volume_; }

 private:
  std::vector<RationalVector> vertices_;
  std::vector<std::vector<double>> vertices_double_;
  Rational volume_;
};

/// Switch between the divided-difference recursion and the symmetric
/// polynomial series, on the spread of each node subset. Nested recursion
/// levels compound the |gap|^-1 loss, so any subset narrower than this goes
/// to the series, which still converges in about 20 terms.
inline constexpr double kDividedDifferenceSwitch = 1.0;

/// Divided difference of t ↦ e^t at the given nodes (repeats allowed).
/// Symmetric in the nodes.
double exp_divided_difference(std::span<const double> nodes);

/// Σ_{j >= skip} h_j(nodes)/(j+k)! where k+1 = #nodes and h_j is the
/// complete homogeneous symmetric polynomial: the divided difference of e^t
/// with its first `skip` Taylor contributions removed.
double exp_divided_difference_tail(std::span<const double> nodes, int skip);

/// ∫_S ℓ dx, exact.
Rational integral_linear_simplex(const Simplex& simplex, const AffineForm& form);

/// ∫_S exp(-⟨a, x⟩) dx.
double integral_exp_simplex(const Simplex& simplex, std::span<const double> a);

/// Moments of the weight exp(-⟨a,x⟩) over a simplex, taken about `center`
/// and multiplied by exp(-log_shift):
///   mass   = e^{-s} ∫ e^{-⟨a,x⟩}
///   first  = e^{-s} ∫ (x-c) e^{-⟨a,x⟩}
///   second = e^{-s} ∫ (x-c)(x-c)^T e^{-⟨a,x⟩}   (row-major n×n)
/// `order` selects how many of these are filled (0, 1 or 2).
struct ExpMoments {
  double mass = 0.0;
  std::vector<double> first;
  std::vector<double> second;
};

ExpMoments exp_moments_simplex(const Simplex& simplex, std::span<const double> a, std::span<const double> center,
                               double log_shift, int order);

/// Simplices of the default triangulation of P, in its fixed order.
std::vector<Simplex> simplices_of(const LatticePolytope& polytope,
                                  TriangulationApex apex = TriangulationApex::kInteriorPoint);

/// ∫_P ℓ dx, summed exactly over the triangulation.
Rational integral_linear_polytope(const LatticePolytope& polytope, const AffineForm& form);

/// First moments ∫_P x_i dx.
RationalVector interior_moments(const LatticePolytope& polytope);

/// Boundary first moments ∫_{∂P} x_i dσ.
RationalVector boundary_moments(const LatticePolytope& polytope);

RationalVector barycenter(const LatticePolytope& polytope);

}  // namespace toricdeg
