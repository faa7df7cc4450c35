#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toricdeg/lattice_geom.hpp"
#include "toricdeg/numeric.hpp"

namespace toricdeg {

/// One weight space R_{m,α}: the weight α and dim R_{m,α}.
struct WeightSpace {
  IntVector weight;
  std::int64_t multiplicity = 0;

  bool operator==(const WeightSpace&) const = default;
};

enum class WeightSource { kToric, kExternal };

/// Weight decomposition of the graded pieces R_1, ..., R_{m_max}.
///
/// Toric tables are generated on demand from the dilations m·P (each lattice
/// point is a one-dimensional weight space); external tables are held in
/// memory as loaded. Either way the table is immutable.
class WeightTable {
 public:
  /// Throws NotReflexive unless P is reflexive.
  static WeightTable toric(const LatticePolytope& polytope, int m_max);
  /// `degrees[m-1]` lists the weight spaces of degree m. Weights are sorted
  /// and duplicates merged. Throws EmptyDegree if a degree has none, and
  /// std::invalid_argument on non-positive multiplicities or ragged weights.
  static WeightTable external(int dim, std::vector<std::vector<WeightSpace>> degrees);

  int dim() const { return dim_; }
  int m_max() const { return m_max_; }
  /// C with |α| <= C·m for every stored weight.
  double weight_bound() const { return weight_bound_; }
  WeightSource source() const { return source_; }
  /// The generating polytope for toric tables, otherwise null.
  const LatticePolytope* polytope() const { return polytope_ ? &*polytope_ : nullptr; }

  /// N_m = Σ_α dim R_{m,α}.
  std::int64_t total_dimension(int m) const;
  /// Exact Σ_α α·dim R_{m,α}.
  IntVector weight_moments(int m) const;
  /// Σ_α exp(-α(ξ)/m)·dim R_{m,α}.
  double exp_sum(const TorusVector& xi, int m) const;
  /// Weight spaces of degree m, lexicographic in α.
  std::vector<WeightSpace> weights(int m) const;

 private:
  void check_degree(int m) const;

  int dim_ = 0;
  int m_max_ = 0;
  double weight_bound_ = 0.0;
  WeightSource source_ = WeightSource::kExternal;
  std::optional<LatticePolytope> polytope_;
  std::vector<std::vector<WeightSpace>> degrees_;
};

WeightTable weight_table_toric(const LatticePolytope& polytope, int m_max);

/// CSV with header "m,a1,...,an,dim", one weight space per row.
WeightTable load_weight_table(const std::string& path);
WeightTable parse_weight_table(std::istream& in);
void write_weight_table(const WeightTable& table, std::ostream& out);

/// Σ_α α(ξ)·dim R_{m,α}.
double total_weight(const WeightTable& table, const TorusVector& xi, int m);

struct AsymptoticFit {
  double b0 = 0.0;
  double b1 = 0.0;
  /// max_m |fit(m) - data(m)| / max_m |data(m)|.
  double residual = 0.0;
};

/// Least-squares fit of the total weight on {m^{n+1}, m^n, m^{n-1}} over
/// m_max/2 <= m <= m_max. Throws InsufficientDegrees when m_max < 8.
AsymptoticFit fit_b0_b1(const WeightTable& table, const TorusVector& xi);

struct WeightAsymptotics {
  double b0 = 0.0;
  double b1 = 0.0;
};

/// b0 = ∫_P ⟨x,ξ⟩ dx and b1 = ½∫_{∂P} ⟨x,ξ⟩ dσ.
WeightAsymptotics b0_b1_exact(const LatticePolytope& polytope, const TorusVector& xi);

struct ExactWeightAsymptotics {
  Rational b0;
  Rational b1;
};
ExactWeightAsymptotics b0_b1_exact(const LatticePolytope& polytope, const RationalVector& xi);

/// n!·m^{-n}·Σ_α exp(-α(ξ)/m)·dim R_{m,α}.
double c0_bruteforce(const WeightTable& table, const TorusVector& xi, int m);

/// n!·∫_P exp(-⟨x,ξ⟩) dx.
double c0_exact(const LatticePolytope& polytope, const TorusVector& xi);
/// log of c0_exact, evaluated without overflow for large ξ.
double log_c0_exact(const LatticePolytope& polytope, const TorusVector& xi);

/// Richardson extrapolation in 1/m of c0_bruteforce over the top four degrees.
double c0_extrapolated(const WeightTable& table, const TorusVector& xi);
/// Richardson extrapolation in 1/m of n!·N_m/m^n, an estimate of V.
double volume_extrapolated(const WeightTable& table);

struct LipschitzCheck {
  double bound = 0.0;
  double actual = 0.0;
  bool ok = false;
};

/// Compares |c0(ξ) - c0(ξ')| with n!·vol(P)·R·e^{R·max(|ξ|,|ξ'|)}·|ξ-ξ'|,
/// R the largest vertex norm.
LipschitzCheck c0_lipschitz_check(const LatticePolytope& polytope, const TorusVector& xi, const TorusVector& xi_other);

struct DHAtom {
  double lambda = 0.0;
  double mass = 0.0;
};

/// Normalized weight distribution at level m: atoms at α(ξ)/m with mass
/// dim R_{m,α}/N_m, sorted by λ, equal λ merged.
struct DHSample {
  int level = 0;
  std::vector<DHAtom> atoms;
};

DHSample dh_measure(const WeightTable& table, const TorusVector& xi, int m);

/// Σ exp(-λ)·mass.
double dh_exp_moment(const DHSample& sample);

/// Σ_{m <= m_cut} e^{-tm}·total_weight(m).
double weight_character(const WeightTable& table, const TorusVector& xi, double t, int m_cut);

/// Sample points for the Laurent fit of the weight character.
inline const std::vector<double>& laurent_sample_points() {
  static const std::vector<double> ts{0.5, 0.4, 0.3, 0.25, 0.2};
  return ts;
}

/// Relative truncation tolerance for the weight character at the smallest
/// sample point.
inline constexpr double kLaurentTruncationTolerance = 1e-6;

/// Smallest m_max for which the truncated character of an n-dimensional
/// table meets kLaurentTruncationTolerance at every sample point.
int laurent_required_m_max(int dim);

struct LaurentFit {
  double b0_hat = 0.0;
  double b1_hat = 0.0;
  std::vector<double> ts;
  std::vector<double> values;  // C(ξ, t) at ts
};

/// Fits t^{n+2}·C(ξ,t) on {1, t, t²}. Throws TruncationTooCoarse when the
/// table does not reach laurent_required_m_max.
LaurentFit laurent_fit(const WeightTable& table, const TorusVector& xi);

}  // namespace toricdeg
