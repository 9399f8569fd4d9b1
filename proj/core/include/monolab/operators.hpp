#pragma once

#include "monolab/operator_spec.hpp"
#include "monolab/set_description.hpp"
#include "monolab/types.hpp"

#include <limits>
#include <optional>
#include <utility>

namespace monolab {

/// Duality mapping of Euclidean R^d: the identity.
inline Vector duality_map(const Vector& x) { return x; }

/// Exact value set T(x) where a closed form exists.
SetDescription op_eval(const OperatorSpec& spec, const Vector& x);

/// Pointwise Minkowski sum T1(x) + T2(x).
SetDescription minkowski_sum_eval(const OperatorSpec& t1, const OperatorSpec& t2, const Vector& x);

/// <y* - x*, y - x>
double monotone_gap(const DualPair& p, const DualPair& q);

struct MonotoneCheck {
  bool is_monotone = true;
  std::optional<std::pair<DualPair, DualPair>> worst_pair;
  double worst_gap = std::numeric_limits<double>::infinity();
};

/// Minimum monotone gap over all unordered pairs; monotone iff it is >= -eps_gap.
MonotoneCheck graph_monotone_check(const SampledGraph& g, const ToleranceConfig& tol = {});

/// min over g of <y* - x*, y - x>; +inf for an empty graph.
double polar_gap(const DualPair& p, const SampledGraph& g);

/// Membership of p in the monotone polar of g.
bool polar_member(const DualPair& p, const SampledGraph& g, const ToleranceConfig& tol = {});

}  // namespace monolab
