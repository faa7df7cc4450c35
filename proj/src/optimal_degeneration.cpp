#include "toricdeg/optimal_degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "toricdeg/errors.hpp"

namespace toricdeg {

namespace {

constexpr double kEigenClamp = -1e-8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr double kProbeRadius = 1e3;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void require_reflexive(const PolytopeContext& ctx) {
  if (!ctx.reflexive()) throw NotReflexive("polytope '" + ctx.polytope().name() + "' is not reflexive");
}

void require_dim(const PolytopeContext& ctx, const TorusVector& xi) {
  if (xi.dim() != ctx.dim()) {
    throw std::invalid_argument("torus vector has dimension " + std::to_string(xi.dim()) + ", polytope has " +
                                std::to_string(ctx.dim()));
  }
}

double max_exponent(const PolytopeContext& ctx, const TorusVector& xi) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& v : ctx.polytope().vertices()) {
    double t = 0.0;
    for (int i = 0; i < ctx.dim(); ++i) t -= xi[i] * v[i].get_d();
    shift = std::max(shift, t);
  }
  return shift;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct Evaluation {
  double h = 0.0;
  std::vector<double> grad;
  double grad_norm = 0.0;
};

Evaluation evaluate(const PolytopeContext& ctx, const TorusVector& xi) {
  Evaluation e;
  e.h = h_formula(ctx, xi);
  e.grad = h_gradient(ctx, xi);
  e.grad_norm = norm(e.grad);
  return e;
}

// Slopes along ±e_i and along the current iterate direction. Returns the
// first direction with nonnegative slope, if any.
std::optional<std::pair<TorusVector, double>> probe_recession(const PolytopeContext& ctx, const TorusVector& xi) {
  const int n = ctx.dim();
  std::vector<TorusVector> dirs;
  if (!xi.is_zero()) {
    TorusVector u = xi;
    const double r = xi.norm();
    for (int i = 0; i < n; ++i) u.components[i] /= r;
    dirs.push_back(u);
  }
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      TorusVector u = TorusVector::zero(n);
      u.components[i] = sign;
      dirs.push_back(u);
    }
  }
  for (const auto& u : dirs) {
    const double slope = recession_slope(ctx, u);
    if (slope >= 0.0) return std::make_pair(u, slope);
  }
  return std::nullopt;
}

}  // namespace

GibbsMoments gibbs_moments(const PolytopeContext& ctx, const TorusVector& xi, bool with_covariance) {
  require_dim(ctx, xi);
  const int n = ctx.dim();
  const double shift = max_exponent(ctx, xi);
  const std::vector<double> origin(n, 0.0);

  KahanSum mass;
  std::vector<KahanSum> first(n);
  for (const auto& s : ctx.simplices()) {
    const ExpMoments m = exp_moments_simplex(s, xi.span(), origin, shift, 1);
    mass += m.mass;
    for (int i = 0; i < n; ++i) first[i] += m.first[i];
  }
  GibbsMoments g;
  const double z = mass.value();
  g.log_partition = shift + std::log(z);
  g.mean.resize(n);
  for (int i = 0; i < n; ++i) g.mean[i] = first[i].value() / z;
  if (!with_covariance) return g;

  // Second pass about the mean keeps the covariance free of cancellation.
  std::vector<KahanSum> second(n * n);
  std::vector<KahanSum> residual(n);
  for (const auto& s : ctx.simplices()) {
    const ExpMoments m = exp_moments_simplex(s, xi.span(), g.mean, shift, 2);
    for (int i = 0; i < n; ++i) residual[i] += m.first[i];
    for (int k = 0; k < n * n; ++k) second[k] += m.second[k];
  }
  g.covariance.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double di = residual[i].value() / z;
      const double dj = residual[j].value() / z;
      g.covariance(i, j) = second[i * n + j].value() / z - di * dj;
    }
  }
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose()).eval();
  return g;
}

std::vector<double> h_gradient(const PolytopeContext& ctx, const TorusVector& xi) {
  require_reflexive(ctx);
  const int n = ctx.dim();
  const GibbsMoments g = gibbs_moments(ctx, xi, false);
  const double V = ctx.degree_d();
  const double nf1 = factorial(n - 1);
  std::vector<double> grad(n);
  for (int i = 0; i < n; ++i) grad[i] = V * g.mean[i] - nf1 * ctx.boundary_moments_d()[i];
  return grad;
}

std::vector<double> h_gradient(const LatticePolytope& polytope, const TorusVector& xi) {
  return h_gradient(PolytopeContext(polytope), xi);
}

Eigen::MatrixXd h_hessian(const PolytopeContext& ctx, const TorusVector& xi) {
  require_reflexive(ctx);
  const GibbsMoments g = gibbs_moments(ctx, xi, true);
  return -ctx.degree_d() * g.covariance;
}

Eigen::MatrixXd h_hessian(const LatticePolytope& polytope, const TorusVector& xi) {
  return h_hessian(PolytopeContext(polytope), xi);
}

double recession_slope(const PolytopeContext& ctx, const TorusVector& direction) {
  require_reflexive(ctx);
  require_dim(ctx, direction);
  const double r = direction.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("recession direction must be nonzero and finite");
  const int n = ctx.dim();
  double min_support = std::numeric_limits<double>::infinity();
  for (const auto& v : ctx.polytope().vertices()) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += v[i].get_d() * direction[i] / r;
    min_support = std::min(min_support, t);
  }
  KahanSum boundary;
  for (int i = 0; i < n; ++i) boundary += ctx.boundary_moments_d()[i] * direction[i] / r;
  return ctx.degree_d() * min_support - factorial(n - 1) * boundary.value();
}

double recession_slope(const LatticePolytope& polytope, const TorusVector& direction) {
  return recession_slope(PolytopeContext(polytope), direction);
}

std::string to_string(OptimizationStatus status) {
  switch (status) {
    case OptimizationStatus::kConverged:
      return "converged";
    case OptimizationStatus::kUnboundedDirection:
      return "unbounded_direction";
    case OptimizationStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

OptimizationResult maximize_h(const PolytopeContext& ctx, const OptimizerOptions& options) {
  require_reflexive(ctx);
  const int n = ctx.dim();
  OptimizationResult result;
  result.xi_star = TorusVector::zero(n);

  auto record = [&](int iteration, const TorusVector& xi, const Evaluation& e, double step) {
    const double df = df_formula(ctx, xi);
    if (df - e.h < -1e-9) result.jensen_ok = false;
    if (options.record_trace) result.trace.push_back({iteration, xi, e.h, df, e.grad_norm, step});
  };

  auto mark_unbounded = [&](const std::pair<TorusVector, double>& hit, const TorusVector& xi, const Evaluation& e,
                            int iteration) {
    result.status = OptimizationStatus::kUnboundedDirection;
    result.unbounded_direction = hit.first;
    result.unbounded_slope = hit.second;
    result.xi_star = xi;
    result.h_star = e.h;
    result.grad_norm = e.grad_norm;
    result.iterations = iteration;
    record(iteration, xi, e, 0.0);
  };

  TorusVector xi = TorusVector::zero(n);
  Evaluation cur = evaluate(ctx, xi);

  if (auto hit = probe_recession(ctx, xi)) {
    mark_unbounded(*hit, xi, cur, 0);
    return result;
  }

  int iteration = 0;
  bool converged = false;
  for (; iteration < options.max_iter; ++iteration) {
    if (cur.grad_norm < options.tol) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd hess = h_hessian(ctx, xi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    Eigen::VectorXd lambda = eig.eigenvalues();
    for (int i = 0; i < n; ++i) lambda[i] = std::min(lambda[i], kEigenClamp);
    const Eigen::Map<const Eigen::VectorXd> g(cur.grad.data(), n);
    // Ascent direction d = -(Hess_clamped)^{-1} g.
    const Eigen::VectorXd d = -(eig.eigenvectors() * (eig.eigenvectors().transpose() * g).cwiseQuotient(lambda));
    const double predicted = g.dot(d);

    double step = 1.0;
    bool accepted = false;
    TorusVector trial = xi;
    Evaluation next;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, step *= 0.5) {
      for (int i = 0; i < n; ++i) trial.components[i] = xi[i] + step * d[i];
      const double h_trial = h_formula(ctx, trial);
      if (h_trial >= cur.h + kArmijo * step * predicted) {
        next = evaluate(ctx, trial);
        accepted = true;
        break;
      }
    }
    if (!accepted && predicted < 1e-14 * std::max(1.0, std::abs(cur.h))) {
      // The predicted increase is below the resolution of H: take the full
      // Newton step if it still shrinks the gradient.
      step = 1.0;
      for (int i = 0; i < n; ++i) trial.components[i] = xi[i] + d[i];
      Evaluation full = evaluate(ctx, trial);
      if (full.grad_norm < cur.grad_norm) {
        next = std::move(full);
        accepted = true;
      }
    }
    if (!accepted) {
      if (auto hit = probe_recession(ctx, xi)) {
        mark_unbounded(*hit, xi, cur, iteration);
        return result;
      }
      break;
    }

    record(iteration, xi, cur, step);
    if (next.h < cur.h - 1e-12 * std::max(1.0, std::abs(cur.h))) result.monotone = false;
    xi = trial;
    cur = std::move(next);

    if (xi.norm() > kProbeRadius) {
      if (auto hit = probe_recession(ctx, xi)) {
        mark_unbounded(*hit, xi, cur, iteration + 1);
        return result;
      }
    }
  }

  record(iteration, xi, cur, 0.0);
  result.status = converged ? OptimizationStatus::kConverged : OptimizationStatus::kMaxIterations;
  result.xi_star = xi;
  result.h_star = cur.h;
  result.grad_norm = cur.grad_norm;
  result.iterations = iteration;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> final_eig(h_hessian(ctx, xi), Eigen::EigenvaluesOnly);
  result.hessian_max_eigenvalue = final_eig.eigenvalues().maxCoeff();
  result.flat_direction = result.hessian_max_eigenvalue > kEigenClamp;
  return result;
}

OptimizationResult maximize_h(const LatticePolytope& polytope, const OptimizerOptions& options) {
  return maximize_h(PolytopeContext(polytope), options);
}

double mu_supremum(const PolytopeContext& ctx, const OptimizationResult& result) {
  if (result.status != OptimizationStatus::kConverged) {
    throw Inconclusive("optimizer status " + to_string(result.status) + ", supremum of H not determined");
  }
  return ctx.dim() * ctx.degree_d() - result.h_star;
}

double mu_supremum(const LatticePolytope& polytope) {
  const PolytopeContext ctx(polytope);
  return mu_supremum(ctx, maximize_h(ctx));
}

std::string StabilityVerdict::label() const {
  return kind == Kind::kHStableProduct ? "Hstable_wrt_product_degenerations" : "Hunstable";
}

std::string StabilityVerdict::description() const {
  if (kind == Kind::kHStableProduct) {
    return "H <= 0 on every product test configuration induced by the torus; non-product degenerations were not "
           "searched";
  }
  return "H > 0 on a product test configuration induced by the torus";
}

StabilityVerdict h_stability_verdict(const PolytopeContext& ctx, const OptimizationResult& result) {
  require_reflexive(ctx);
  if (result.status != OptimizationStatus::kConverged) {
    throw Inconclusive("optimizer status " + to_string(result.status) + ", stability not decided");
  }
  StabilityVerdict v;
  if (result.h_star > 0.0 && result.xi_star.norm() > 1e-8) {
    v.kind = StabilityVerdict::Kind::kHUnstable;
    v.witness = result.xi_star;
    v.witness_h = result.h_star;
  }
  return v;
}

StabilityVerdict h_stability_verdict(const LatticePolytope& polytope) {
  const PolytopeContext ctx(polytope);
  return h_stability_verdict(ctx, maximize_h(ctx));
}

}  // namespace toricdeg
