#pragma once

#include "monolab/operator_spec.hpp"
#include "monolab/types.hpp"

namespace testutil {

using monolab::ConvexFn;
using monolab::ConvexSet;
using monolab::DualPair;
using monolab::Matrix;
using monolab::OperatorSpec;
using monolab::Vector;

inline Vector v1(double a) { return Vector::Constant(1, a); }
inline Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
inline Matrix m1(double a) { return Matrix::Constant(1, 1, a); }
inline DualPair pair1(double x, double xs) { return DualPair(v1(x), v1(xs)); }

inline OperatorSpec identity(int d) { return OperatorSpec::linear(Matrix::Identity(d, d)); }
inline OperatorSpec abs_subdiff(int d = 1) { return OperatorSpec::subdifferential(ConvexFn::abs_value_sum(d)); }
inline OperatorSpec cone_at(double p) { return OperatorSpec::normal_cone(ConvexSet::singleton(v1(p))); }
/// N of [lo, hi] in R.
inline OperatorSpec cone_interval(double lo, double hi) {
  return OperatorSpec::normal_cone(ConvexSet::box(v1(lo), v1(hi)));
}

}  // namespace testutil
