#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "toricdeg/invariants.hpp"

namespace toricdeg {

/// Normalized moments of the Gibbs density exp(-⟨x,ξ⟩)/Z on P.
struct GibbsMoments {
  double log_partition = 0.0;  // log Z
  std::vector<double> mean;
  Eigen::MatrixXd covariance;  // filled when requested
};

GibbsMoments gibbs_moments(const PolytopeContext& ctx, const TorusVector& xi, bool with_covariance);

/// ∇H(ξ) = V·G(ξ) - (n-1)!·∫_{∂P} x dσ, G the Gibbs mean. Throws NotReflexive.
std::vector<double> h_gradient(const PolytopeContext& ctx, const TorusVector& xi);
std::vector<double> h_gradient(const LatticePolytope& polytope, const TorusVector& xi);

/// ∇²H(ξ) = -V·Cov_ξ(x), symmetric by construction. Throws NotReflexive.
Eigen::MatrixXd h_hessian(const PolytopeContext& ctx, const TorusVector& xi);
Eigen::MatrixXd h_hessian(const LatticePolytope& polytope, const TorusVector& xi);

/// lim_{s→∞} H(sη)/s = V·min_P⟨x,η⟩ - (n-1)!·∫_{∂P} ⟨x,η⟩ dσ for unit η
/// (η is normalized first). Throws NotReflexive.
double recession_slope(const PolytopeContext& ctx, const TorusVector& direction);
double recession_slope(const LatticePolytope& polytope, const TorusVector& direction);

enum class OptimizationStatus { kConverged, kUnboundedDirection, kMaxIterations };

std::string to_string(OptimizationStatus status);

struct IterateRecord {
  int iteration = 0;
  TorusVector xi;
  double h = 0.0;
  double df = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // accepted line-search step length (0 on the last record)
};

struct OptimizerOptions {
  double tol = 1e-9;
  int max_iter = 200;
  bool record_trace = false;
};

struct OptimizationResult {
  TorusVector xi_star;
  double h_star = 0.0;
  double grad_norm = 0.0;
  double hessian_max_eigenvalue = 0.0;
  int iterations = 0;
  OptimizationStatus status = OptimizationStatus::kMaxIterations;
  /// Set when status is kUnboundedDirection: unit direction with
  /// nonnegative recession slope, and that slope.
  std::optional<TorusVector> unbounded_direction;
  double unbounded_slope = 0.0;
  /// Hessian at ξ* has an eigenvalue in (-1e-8, 0].
  bool flat_direction = false;
  /// DF >= H - 1e-9 held at every iterate.
  bool jensen_ok = true;
  /// H never decreased by more than rounding along the iterates.
  bool monotone = true;
  std::vector<IterateRecord> trace;
};

/// Damped Newton ascent of H from ξ = 0 with Armijo backtracking.
/// Throws NotReflexive.
OptimizationResult maximize_h(const PolytopeContext& ctx, const OptimizerOptions& options = {});
OptimizationResult maximize_h(const LatticePolytope& polytope, const OptimizerOptions& options = {});

/// n·V - sup H. Throws Inconclusive unless the optimizer converged.
double mu_supremum(const PolytopeContext& ctx, const OptimizationResult& result);
double mu_supremum(const LatticePolytope& polytope);

struct StabilityVerdict {
  enum class Kind { kHStableProduct, kHUnstable };
  Kind kind = Kind::kHStableProduct;
  /// ξ* and H(ξ*) > 0 for kHUnstable.
  std::optional<TorusVector> witness;
  double witness_h = 0.0;

  /// "Hstable_wrt_product_degenerations" / "Hunstable".
  std::string label() const;
  /// Human-readable verdict stating that only torus-product degenerations
  /// were searched.
  std::string description() const;
};

/// Throws NotReflexive, or Inconclusive when the optimizer did not converge.
StabilityVerdict h_stability_verdict(const PolytopeContext& ctx, const OptimizationResult& result);
StabilityVerdict h_stability_verdict(const LatticePolytope& polytope);

}  // namespace toricdeg
