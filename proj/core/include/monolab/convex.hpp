#pragma once

#include "monolab/types.hpp"

#include <variant>

namespace monolab {

namespace set {
struct Singleton {
  Vector point;
};
/// Axis-aligned box; bounds may be infinite.
struct Box {
  Vector lo;
  Vector hi;
};
/// { x : <a, x> <= b }
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};
/// Graph { (y, A y) } of a linear map A : R^dY -> R^dX, living in R^(dY+dX).
struct AffineGraph {
  Matrix map;
};
}  // namespace set

/// Nonempty closed convex set with an exact Euclidean projection.
class ConvexSet {
 public:
  using Variant = std::variant<set::Singleton, set::Box, set::Halfspace, set::AffineGraph>;

  static ConvexSet singleton(Vector p);
  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet halfspace(Vector a, double b);
  static ConvexSet affine_graph(Matrix a);

  int dim() const;
  const Variant& variant() const { return v_; }

  bool contains(const Vector& x, double tol = 1e-12) const;
  Vector project(const Vector& x) const;
  /// Jacobian of the projection at x (an element of the Clarke Jacobian at kinks).
  Matrix project_jacobian(const Vector& x) const;
  std::string describe() const;

 private:
  explicit ConvexSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

namespace fn {
/// f(x) = sum_i |x_i|
struct AbsValueSum {
  int dim = 1;
};
/// f(x) = x'Qx/2 + b'x, Q symmetric psd
struct Quadratic {
  Matrix q;
  Vector b;
};
struct Indicator {
  ConvexSet set;
};
/// f(x) = scale * ||x - center||^p / p, p in {1, 2}
struct ShiftedPower {
  Vector center;
  int power = 2;
  double scale = 1.0;
};
}  // namespace fn

/// Proper lsc convex function admitting a closed-form proximal map.
class ConvexFn {
 public:
  using Variant = std::variant<fn::AbsValueSum, fn::Quadratic, fn::Indicator, fn::ShiftedPower>;

  static ConvexFn abs_value_sum(int dim);
  static ConvexFn quadratic(Matrix q, Vector b);
  static ConvexFn indicator(ConvexSet c);
  static ConvexFn shifted_power(Vector center, int power, double scale = 1.0);

  int dim() const;
  const Variant& variant() const { return v_; }

  double value(const Vector& x) const;
  /// argmin_z f(z) + ||z - w||^2 / (2 lambda)
  Vector prox(double lambda, const Vector& w) const;
  Matrix prox_jacobian(double lambda, const Vector& w) const;
  /// True when the subdifferential is single-valued and Lipschitz everywhere.
  bool is_smooth() const;
  std::string describe() const;

 private:
  explicit ConvexFn(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace monolab
