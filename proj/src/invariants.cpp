#include "toricdeg/invariants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "toricdeg/errors.hpp"

namespace toricdeg {

namespace {

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

// log ∫_P exp(-⟨x,ξ⟩) dx with the largest exponent factored out.
double log_partition(const PolytopeContext& ctx, const TorusVector& xi) {
  const int n = ctx.dim();
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& v : ctx.polytope().vertices()) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t -= xi[i] * v[i].get_d();
    shift = std::max(shift, t);
  }
  const std::vector<double> origin(n, 0.0);
  KahanSum s;
  for (const auto& simplex : ctx.simplices()) s += exp_moments_simplex(simplex, xi.span(), origin, shift, 0).mass;
  return shift + std::log(s.value());
}

double boundary_term(const PolytopeContext& ctx, const TorusVector& xi) {
  // 2·(n-1)!·b1 = (n-1)!·∫_{∂P} ⟨x,ξ⟩ dσ
  KahanSum s;
  for (int i = 0; i < ctx.dim(); ++i) s += ctx.boundary_moments_d()[i] * xi[i];
  return factorial(ctx.dim() - 1) * s.value();
}

}  // namespace

PolytopeContext::PolytopeContext(LatticePolytope polytope) : polytope_(std::move(polytope)) {
  const int n = polytope_.dim();
  simplices_ = simplices_of(polytope_);
  volume_ = 0;
  for (const auto& s : simplices_) volume_ += s.volume();
  Rational nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  degree_ = nf * volume_;
  interior_.assign(n, Rational(0));
  for (const auto& s : simplices_) {
    for (int i = 0; i < n; ++i) interior_[i] += integral_linear_simplex(s, AffineForm::coordinate(n, i));
  }
  boundary_ = toricdeg::boundary_moments(polytope_);
  const Rational n1f = nf / n;
  df_coeff_.resize(n);
  for (int i = 0; i < n; ++i) df_coeff_[i] = nf * interior_[i] - n1f * boundary_[i];
  for (int i = 0; i < n; ++i) barycenter_.push_back(Rational(interior_[i] / volume_).get_d());
  interior_d_ = to_double(interior_);
  boundary_d_ = to_double(boundary_);
  df_coeff_d_ = to_double(df_coeff_);
  volume_d_ = volume_.get_d();
  degree_d_ = degree_.get_d();
  reflexive_ = is_reflexive(polytope_);
}

double h_formula(const PolytopeContext& ctx, const TorusVector& xi) {
  require_dim(ctx, xi);
  if (xi.is_zero()) return 0.0;
  const double V = ctx.degree_d();
  const double log_c0_over_v = std::log(factorial(ctx.dim())) + log_partition(ctx, xi) - std::log(V);
  return -V * log_c0_over_v - boundary_term(ctx, xi);
}

double df_formula(const PolytopeContext& ctx, const TorusVector& xi) {
  require_dim(ctx, xi);
  KahanSum s;
  for (int i = 0; i < ctx.dim(); ++i) s += ctx.df_coefficients_d()[i] * xi[i];
  return s.value();
}

double jensen_gap_formula(const PolytopeContext& ctx, const TorusVector& xi) {
  require_dim(ctx, xi);
  if (xi.is_zero()) return 0.0;
  const int n = ctx.dim();
  const auto& bar = ctx.barycenter();
  // E_uniform[exp(-⟨x - bar, ξ⟩)] = 1 + r, where the constant and linear
  // Taylor terms integrate to 1 and 0 exactly and r collects the rest.
  KahanSum r;
  std::vector<double> nodes(n + 1);
  for (const auto& simplex : ctx.simplices()) {
    const auto& verts = simplex.vertices_double();
    for (int k = 0; k <= n; ++k) {
      double t = 0.0;
      for (int i = 0; i < n; ++i) t -= xi[i] * (verts[k][i] - bar[i]);
      nodes[k] = t;
    }
    r += factorial(n) * simplex.volume().get_d() * exp_divided_difference_tail(nodes, 2);
  }
  return ctx.degree_d() * std::log1p(r.value() / ctx.volume_d());
}

double h_invariant(const PolytopeContext& ctx, const TorusVector& xi) {
  require_reflexive(ctx);
  return h_formula(ctx, xi);
}

double h_invariant(const LatticePolytope& polytope, const TorusVector& xi) {
  if (!is_reflexive(polytope)) throw NotReflexive("polytope '" + polytope.name() + "' is not reflexive");
  return h_formula(PolytopeContext(polytope), xi);
}

double df_invariant(const PolytopeContext& ctx, const TorusVector& xi) {
  require_reflexive(ctx);
  return df_formula(ctx, xi);
}

double df_invariant(const LatticePolytope& polytope, const TorusVector& xi) {
  if (!is_reflexive(polytope)) throw NotReflexive("polytope '" + polytope.name() + "' is not reflexive");
  return df_formula(PolytopeContext(polytope), xi);
}

Rational df_invariant(const LatticePolytope& polytope, const RationalVector& xi) {
  if (!is_reflexive(polytope)) throw NotReflexive("polytope '" + polytope.name() + "' is not reflexive");
  const int n = polytope.dim();
  const auto [b0, b1] = b0_b1_exact(polytope, xi);
  Rational nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  return nf * (b0 - (Rational(2) / n) * b1);
}

double jensen_gap(const PolytopeContext& ctx, const TorusVector& xi) {
  require_reflexive(ctx);
  const double gap = jensen_gap_formula(ctx, xi);
  const double h = h_formula(ctx, xi);
  const double df = df_formula(ctx, xi);
  if (std::abs(gap - (df - h)) > 1e-12 * (1.0 + std::abs(df) + std::abs(h))) {
    throw std::logic_error("jensen gap disagrees with DF - H");
  }
  return gap;
}

double jensen_gap(const LatticePolytope& polytope, const TorusVector& xi) {
  if (!is_reflexive(polytope)) throw NotReflexive("polytope '" + polytope.name() + "' is not reflexive");
  return jensen_gap(PolytopeContext(polytope), xi);
}

ShiftCheck hamiltonian_shift_check(const LatticePolytope& polytope, const TorusVector& xi, const IntVector& shift) {
  const PolytopeContext base(polytope);
  require_reflexive(base);
  const PolytopeContext moved(translate(polytope, shift));
  ShiftCheck check;
  check.delta_h = std::abs(h_formula(moved, xi) - h_formula(base, xi));
  check.delta_df = std::abs(df_formula(moved, xi) - df_formula(base, xi));
  check.ok = check.delta_h < 1e-9 && check.delta_df < 1e-12;
  return check;
}

InvariantReport build_report(const LatticePolytope& polytope, const TorusVector& xi,
                             const std::optional<RationalVector>& exact_xi) {
  const PolytopeContext ctx(polytope);
  require_reflexive(ctx);
  require_dim(ctx, xi);
  InvariantReport r;
  r.polytope_name = polytope.name();
  r.dim = polytope.dim();
  r.xi = xi;
  r.degree_exact = ctx.degree();
  r.degree = ctx.degree_d();
  r.c0 = xi.is_zero() ? r.degree : std::exp(std::log(factorial(r.dim)) + log_partition(ctx, xi));
  KahanSum b0, b1;
  for (int i = 0; i < r.dim; ++i) {
    b0 += ctx.interior_moments_d()[i] * xi[i];
    b1 += 0.5 * ctx.boundary_moments_d()[i] * xi[i];
  }
  r.b0 = b0.value();
  r.b1 = b1.value();
  if (exact_xi) {
    r.b0_exact = dot(ctx.interior_moments(), *exact_xi);
    r.b1_exact = dot(ctx.boundary_moments(), *exact_xi) / 2;
  }
  r.h = h_formula(ctx, xi);
  r.df = df_formula(ctx, xi);
  r.jensen_gap = jensen_gap(ctx, xi);
  return r;
}

InvariantReport build_report(const WeightTable& table, const TorusVector& xi, const std::string& name) {
  InvariantReport r;
  r.polytope_name = name;
  r.dim = table.dim();
  r.xi = xi;
  const int n = r.dim;
  r.degree = volume_extrapolated(table);
  r.c0 = c0_extrapolated(table, xi);
  const AsymptoticFit fit = fit_b0_b1(table, xi);
  r.b0 = fit.b0;
  r.b1 = fit.b1;
  r.h = -r.degree * std::log(r.c0 / r.degree) - 2.0 * factorial(n - 1) * r.b1;
  r.df = factorial(n) * (r.b0 - 2.0 / n * r.b1);
  r.jensen_gap = r.df - r.h;
  return r;
}

}  // namespace toricdeg
