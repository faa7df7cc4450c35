#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toricdeg/lattice_geom.hpp"
#include "toricdeg/numeric.hpp"
#include "toricdeg/simplex_calculus.hpp"
#include "toricdeg/weight_rings.hpp"

namespace toricdeg {

/// Everything about P that the invariants need and that does not depend on
/// ξ: triangulation, exact volume and first moments. Build once, evaluate
/// many times.
class PolytopeContext {
 public:
  explicit PolytopeContext(LatticePolytope polytope);

  const LatticePolytope& polytope() const { return polytope_; }
  int dim() const { return polytope_.dim(); }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const Rational& volume() const { return volume_; }
  /// V = n!·vol(P).
  const Rational& degree() const { return degree_; }
  /// ∫_P x dx and ∫_{∂P} x dσ.
  const RationalVector& interior_moments() const { return interior_; }
  const RationalVector& boundary_moments() const { return boundary_; }
  /// Per-coordinate coefficients of DF: n!·∫_P x - (n-1)!·∫_{∂P} x.
  const RationalVector& df_coefficients() const { return df_coeff_; }
  const std::vector<double>& barycenter() const { return barycenter_; }
  bool reflexive() const { return reflexive_; }

  double volume_d() const { return volume_d_; }
  double degree_d() const { return degree_d_; }
  const std::vector<double>& interior_moments_d() const { return interior_d_; }
  const std::vector<double>& boundary_moments_d() const { return boundary_d_; }
  const std::vector<double>& df_coefficients_d() const { return df_coeff_d_; }

 private:
  LatticePolytope polytope_;
  std::vector<Simplex> simplices_;
  Rational volume_, degree_;
  RationalVector interior_, boundary_, df_coeff_;
  std::vector<double> barycenter_, interior_d_, boundary_d_, df_coeff_d_;
  double volume_d_ = 0.0, degree_d_ = 0.0;
  bool reflexive_ = false;
};

// The raw formulas, valid for any polytope. The reflexive-gated operations
// below are what callers normally want; these exist so translated copies of
// a reflexive P can be compared against it.
double h_formula(const PolytopeContext& ctx, const TorusVector& xi);
double df_formula(const PolytopeContext& ctx, const TorusVector& xi);
double jensen_gap_formula(const PolytopeContext& ctx, const TorusVector& xi);

/// H = -V·log(c0/V) - 2·(n-1)!·b1. Throws NotReflexive.
double h_invariant(const LatticePolytope& polytope, const TorusVector& xi);
double h_invariant(const PolytopeContext& ctx, const TorusVector& xi);

/// DF = n!·(b0 - (2/n)·b1). Throws NotReflexive.
double df_invariant(const LatticePolytope& polytope, const TorusVector& xi);
double df_invariant(const PolytopeContext& ctx, const TorusVector& xi);
Rational df_invariant(const LatticePolytope& polytope, const RationalVector& xi);

/// DF - H, evaluated as V·log(E[exp(-⟨x - bar, ξ⟩)]) over the uniform
/// measure on P so no first-order cancellation occurs. Throws NotReflexive,
/// and std::logic_error if it disagrees with the literal DF - H beyond 1e-12
/// relative.
double jensen_gap(const LatticePolytope& polytope, const TorusVector& xi);
double jensen_gap(const PolytopeContext& ctx, const TorusVector& xi);

struct ShiftCheck {
  double delta_h = 0.0;
  double delta_df = 0.0;
  bool ok = false;
};

/// Compares H and DF of P and P + u; both must agree (1e-9 and 1e-12).
/// Throws NotReflexive on the base polytope.
ShiftCheck hamiltonian_shift_check(const LatticePolytope& polytope, const TorusVector& xi, const IntVector& shift);

struct InvariantReport {
  std::string polytope_name;
  int dim = 0;
  TorusVector xi;
  /// Exact V and b0, b1 when known (toric input; b0/b1 need rational ξ).
  std::optional<Rational> degree_exact;
  std::optional<Rational> b0_exact;
  std::optional<Rational> b1_exact;
  double degree = 0.0;
  double c0 = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double h = 0.0;
  double df = 0.0;
  double jensen_gap = 0.0;
};

/// Throws NotReflexive. `exact_xi`, when given, must equal xi and enables the
/// exact rational fields.
InvariantReport build_report(const LatticePolytope& polytope, const TorusVector& xi,
                             const std::optional<RationalVector>& exact_xi = std::nullopt);

/// The same invariants estimated from a weight table alone: V and c0 by
/// Richardson extrapolation, b0 and b1 by fit_b0_b1.
InvariantReport build_report(const WeightTable& table, const TorusVector& xi, const std::string& name);

}  // namespace toricdeg
