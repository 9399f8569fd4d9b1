#pragma once

#include "monolab/convex.hpp"
#include "monolab/types.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace monolab {

namespace op {
struct Zero;
struct Linear;
struct Subdifferential;
struct NormalCone;
struct FiniteGraph;
struct Yosida;
struct SumOf;
struct AdjointComposition;
struct ProductLift;
struct GraphNormalCone;
}  // namespace op

/// Immutable description of a (set-valued) operator R^d => R^d.
///
/// Copies share the underlying node, so specs are cheap to pass by value and
/// safe to use from several threads.
class OperatorSpec {
 public:
  using Variant = std::variant<op::Zero, op::Linear, op::Subdifferential, op::NormalCone,
                               op::FiniteGraph, op::Yosida, op::SumOf, op::AdjointComposition,
                               op::ProductLift, op::GraphNormalCone>;

  static OperatorSpec zero(int dim);
  /// Rejects M unless the smallest eigenvalue of (M + M')/2 is >= -gap_tol.
  static OperatorSpec linear(Matrix m, double gap_tol = 1e-9);
  static OperatorSpec subdifferential(ConvexFn f);
  static OperatorSpec normal_cone(ConvexSet c);
  static OperatorSpec finite_graph(SampledGraph g);
  static OperatorSpec yosida(OperatorSpec inner, double lambda);
  static OperatorSpec sum(std::vector<OperatorSpec> terms);
  /// y |-> A' T (A y) for A : R^dY -> R^dX and T on R^dX.
  static OperatorSpec adjoint_composition(Matrix a, OperatorSpec inner);
  /// (y, x) |-> {0} x T x on R^(outer_dim + dim T).
  static OperatorSpec product_lift(int outer_dim, OperatorSpec inner);
  /// Normal cone of the graph {(y, A y)}.
  static OperatorSpec graph_normal_cone(Matrix a);

  int dim() const { return dim_; }
  const Variant& variant() const;

  template <class T>
  const T* get_if() const;

  std::string describe() const;

 private:
  OperatorSpec(std::shared_ptr<const Variant> node, int dim) : node_(std::move(node)), dim_(dim) {}

  std::shared_ptr<const Variant> node_;
  int dim_ = 0;
};

namespace op {
struct Zero {
  int dim = 1;
};
struct Linear {
  Matrix m;
};
struct Subdifferential {
  ConvexFn f;
};
struct NormalCone {
  ConvexSet set;
};
struct FiniteGraph {
  SampledGraph graph;
};
struct Yosida {
  OperatorSpec inner;
  double lambda;
};
struct SumOf {
  std::vector<OperatorSpec> terms;
};
struct AdjointComposition {
  Matrix a;
  OperatorSpec inner;
};
struct ProductLift {
  int outer_dim;
  OperatorSpec inner;
};
struct GraphNormalCone {
  Matrix a;
};
}  // namespace op

inline const OperatorSpec::Variant& OperatorSpec::variant() const { return *node_; }

template <class T>
const T* OperatorSpec::get_if() const {
  return std::get_if<T>(node_.get());
}

}  // namespace monolab
