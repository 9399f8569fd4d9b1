#pragma once

#include "monolab/operator_spec.hpp"
#include "monolab/types.hpp"

#include <functional>

namespace monolab {

/// Resolvent z = (I + lambda T)^{-1} w.
///
/// Closed forms are used for linear maps, proximal maps and projections, and
/// for Yosida regularizations of those (via J^{T_mu}_lambda = I + lambda/(lambda+mu) (J^T_{lambda+mu} - I)).
/// Sums with at most one set-valued summand, adjoint compositions of
/// single-valued operators and other single-valued operators are solved by a
/// damped semismooth Newton iteration on the fixed-point form, falling back to
/// forward-backward iterations if Newton stalls.
///
/// The reported residual is ||e|| / s, where e is the input perturbation for
/// which the returned z is exact (so ||e|| bounds the error in z, the
/// resolvent being nonexpansive) and s = 1 + ||w|| + the summed norms of the
/// terms lambda F_i(z) entering the equation, which sets the roundoff floor.
SolveReport resolvent(const OperatorSpec& spec, double lambda, const Vector& w,
                      const ToleranceConfig& tol = {});

/// Yosida regularization T_lambda x = (x - x_lambda) / lambda.
Vector yosida_eval(const OperatorSpec& spec, double lambda, const Vector& x,
                   const ToleranceConfig& tol = {});

/// Solves x* in (x_n - x) + T_n(x_n), i.e. x_n = (I + T_n)^{-1}(x + x*).
/// The pair (x_n, x* - (x_n - x)) lies on the graph of T_n.
SolveReport solve_probe_equation(const OperatorSpec& tn, const DualPair& p,
                                 const ToleranceConfig& tol = {});

using VectorField = std::function<Vector(const Vector&)>;

/// Root of an m-strongly monotone, L-Lipschitz field by the damped Picard
/// iteration z <- z - (m / L^2) F(z).
SolveReport strongly_monotone_solve(const VectorField& field, double m, double lipschitz,
                                    const Vector& w0, const ToleranceConfig& tol = {},
                                    long max_iterations = 1'000'000);

/// Whether `resolvent` accepts the spec.
bool is_resolvable(const OperatorSpec& spec);

/// Whether the operator is single-valued with full domain and Lipschitz.
bool is_single_valued(const OperatorSpec& spec);

/// Lipschitz bound of a single-valued operator.
double lipschitz_bound(const OperatorSpec& spec);

/// Value of a single-valued operator.
Vector single_valued_apply(const OperatorSpec& spec, const Vector& x);

/// Element of the generalized Jacobian of a single-valued operator.
Matrix single_valued_jacobian(const OperatorSpec& spec, const Vector& x);

/// Element of the generalized Jacobian of w |-> (I + lambda T)^{-1} w.
Matrix resolvent_jacobian(const OperatorSpec& spec, double lambda, const Vector& w,
                          const ToleranceConfig& tol = {});

}  // namespace monolab
