#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace toricdeg {

/// Neumaier-compensated accumulator. Reductions that must be reproducible
/// feed values through one of these in a fixed order.
class KahanSum {
 public:
  KahanSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// An element of the Lie algebra of the compact torus, in the basis dual to
/// the character lattice. Components may be irrational.
struct TorusVector {
  std::vector<double> components;

  TorusVector() = default;
  explicit TorusVector(std::vector<double> c) : components(std::move(c)) {}
  TorusVector(std::initializer_list<double> c) : components(c) {}

  static TorusVector zero(int dim) { return TorusVector(std::vector<double>(dim, 0.0)); }

  int dim() const { return static_cast<int>(components.size()); }
  double operator[](std::size_t i) const { return components[i]; }
  double& operator[](std::size_t i) { return components[i]; }
  std::span<const double> span() const { return components; }

  double norm() const {
    double s = 0.0;
    for (double c : components) s += c * c;
    return std::sqrt(s);
  }
  bool is_zero() const {
    for (double c : components) {
      if (c != 0.0) return false;
    }
    return true;
  }
  bool is_finite() const {
    for (double c : components) {
      if (!std::isfinite(c)) return false;
    }
    return true;
  }
};

}  // namespace toricdeg
