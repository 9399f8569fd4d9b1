#include "monolab/resolvent.hpp"

#include "overloaded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace monolab {

using detail::overloaded;

namespace {

constexpr int kNewtonIterations = 100;
constexpr long kFallbackIterations = 1'000'000;

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

/// Cheap upper bound on the spectral norm: sqrt(||M||_1 ||M||_inf).
double spectral_bound(const Matrix& m) {
  const double n1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = m.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * ninf);
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidSpec("resolvent: lambda must be finite and > 0");
  }
}

/// Resolvent problem 0 in z - w + lambda (F(z) + B(z)) with F single-valued
/// (sum of `forward`) and B set-valued with an exact resolvent (optional).
struct SplitProblem {
  std::optional<OperatorSpec> backward;
  std::vector<OperatorSpec> forward;
};

/// Resolvent available without iteration.
bool has_direct_resolvent(const OperatorSpec& spec) {
  if (const auto* y = spec.get_if<op::Yosida>()) return has_direct_resolvent(y->inner);
  if (const auto* p = spec.get_if<op::ProductLift>()) return has_direct_resolvent(p->inner);
  return !spec.get_if<op::SumOf>() && !spec.get_if<op::AdjointComposition>() &&
         !spec.get_if<op::FiniteGraph>();
}

SplitProblem split_terms(const std::vector<OperatorSpec>& terms) {
  SplitProblem prob;
  for (const auto& t : terms) {
    if (is_single_valued(t)) {
      prob.forward.push_back(t);
    } else if (is_resolvable(t)) {
      if (prob.backward) {
        throw NotResolvable("sum with two set-valued summands (" + prob.backward->describe() +
                            ", " + t.describe() + ")");
      }
      prob.backward = t;
    } else {
      throw NotResolvable("summand is not resolvable: " + t.describe());
    }
  }
  if (!prob.backward && prob.forward.size() > 1) {
    // Take the steepest directly resolvable summand implicitly; Newton on
    // the remainder is then far better conditioned.
    std::size_t pick = prob.forward.size();
    double steepest = -1.0;
    for (std::size_t i = 0; i < prob.forward.size(); ++i) {
      if (!has_direct_resolvent(prob.forward[i])) continue;
      const double l = lipschitz_bound(prob.forward[i]);
      if (l > steepest) {
        steepest = l;
        pick = i;
      }
    }
    if (pick < prob.forward.size()) {
      prob.backward = prob.forward[pick];
      prob.forward.erase(prob.forward.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return prob;
}

Vector forward_apply(const SplitProblem& prob, const Vector& z, double* magnitude = nullptr) {
  Vector out = Vector::Zero(z.size());
  double mag = 0.0;
  for (const auto& t : prob.forward) {
    const Vector f = single_valued_apply(t, z);
    mag += f.norm();
    out += f;
  }
  if (magnitude) *magnitude = mag;
  return out;
}

Matrix forward_jacobian(const SplitProblem& prob, const Vector& z) {
  Matrix out = Matrix::Zero(z.size(), z.size());
  for (const auto& t : prob.forward) out += single_valued_jacobian(t, z);
  return out;
}

double forward_lipschitz(const SplitProblem& prob) {
  double l = 0.0;
  for (const auto& t : prob.forward) l += lipschitz_bound(t);
  return l;
}

Vector backward_resolvent(const SplitProblem& prob, double lambda, const Vector& v,
                          const ToleranceConfig& tol) {
  if (!prob.backward) return v;
  return resolvent(*prob.backward, lambda, v, tol).solution;
}

/// Forward-backward iteration with step 1/(1 + (lambda L)^2), which contracts
/// for any monotone Lipschitz forward part.
SolveReport forward_backward(const SplitProblem& prob, double lambda, const Vector& w,
                             const Vector& z0, const ToleranceConfig& tol, long start_iterations) {
  const double lf = lambda * forward_lipschitz(prob);
  const double gamma = 1.0 / (1.0 + lf * lf);
  SolveReport best{z0, std::numeric_limits<double>::infinity(), start_iterations, false};
  Vector z = z0;
  for (long k = 1; k <= kFallbackIterations; ++k) {
    const Vector g = z - w + lambda * forward_apply(prob, z);
    const Vector u = z - gamma * g;
    const Vector zn = backward_resolvent(prob, gamma * lambda, u, tol);
    double mag = 0.0;
    const Vector fz = forward_apply(prob, zn, &mag);
    const Vector b = (u - zn) / gamma;
    const Vector e = zn - w + lambda * fz + b;
    const double res = e.norm() / (1.0 + w.norm() + lambda * mag + b.norm());
    if (!zn.allFinite()) break;
    if (res < best.residual) best = SolveReport{zn, res, start_iterations + k, false};
    if (res <= tol.eps_res) {
      best.converged = true;
      return best;
    }
    z = zn;
  }
  throw NoConvergence("forward-backward iteration cap reached", best);
}

SolveReport solve_split(const SplitProblem& prob, double lambda, const Vector& w,
                        const ToleranceConfig& tol) {
  const auto d = w.size();
  // H(v) = e means z is exact for the input w + e. The defect is measured
  // relative to the size of the summands, which sets its roundoff floor.
  double scale = 1.0;
  auto residual_map = [&](const Vector& v, Vector& z, double& sc) {
    z = backward_resolvent(prob, lambda, v, tol);
    double mag = 0.0;
    const Vector f = forward_apply(prob, z, &mag);
    sc = 1.0 + w.norm() + lambda * mag + (v - z).norm();
    return Vector(v - w + lambda * f);
  };

  Vector v = w;
  Vector z;
  Vector h = residual_map(v, z, scale);
  SolveReport best{z, h.norm() / scale, 0, false};
  int it = 0;
  for (; it < kNewtonIterations; ++it) {
    const double hn = h.norm();
    const double res = hn / scale;
    if (res < best.residual) best = SolveReport{z, res, it, false};
    if (res <= tol.eps_res) {
      best = SolveReport{z, res, it, true};
      return best;
    }
    const Matrix p = prob.backward ? resolvent_jacobian(*prob.backward, lambda, v, tol) : identity(d);
    const Matrix jac = identity(d) + lambda * forward_jacobian(prob, z) * p;
    const Vector dv = jac.fullPivLu().solve(-h);
    if (!dv.allFinite()) break;

    double t = 1.0;
    bool accepted = false;
    Vector zt;
    double st = 1.0;
    while (t > 1e-10) {
      const Vector vt = v + t * dv;
      const Vector ht = residual_map(vt, zt, st);
      if (ht.allFinite() && ht.norm() <= (1.0 - 1e-4 * t) * hn) {
        v = vt;
        h = ht;
        z = zt;
        scale = st;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  const double res = h.norm() / scale;
  if (res < best.residual) best = SolveReport{z, res, it, false};
  if (best.residual <= tol.eps_res) {
    best.converged = true;
    return best;
  }
  return forward_backward(prob, lambda, w, best.solution, tol, it);
}

Vector project_graph(const Matrix& a, const Vector& w) {
  return ConvexSet::affine_graph(a).project(w);
}

Matrix graph_projector(const Matrix& a) {
  return ConvexSet::affine_graph(a).project_jacobian(Vector::Zero(a.rows() + a.cols()));
}

}  // namespace

bool is_single_valued(const OperatorSpec& spec) {
  return std::visit(overloaded{
                        [](const op::Zero&) { return true; },
                        [](const op::Linear&) { return true; },
                        [](const op::Subdifferential& s) { return s.f.is_smooth(); },
                        [](const op::NormalCone&) { return false; },
                        [](const op::FiniteGraph&) { return false; },
                        [](const op::Yosida& y) { return is_resolvable(y.inner); },
                        [](const op::SumOf& s) {
                          for (const auto& t : s.terms) {
                            if (!is_single_valued(t)) return false;
                          }
                          return true;
                        },
                        [](const op::AdjointComposition& c) { return is_single_valued(c.inner); },
                        [](const op::ProductLift& p) { return is_single_valued(p.inner); },
                        [](const op::GraphNormalCone&) { return false; },
                    },
                    spec.variant());
}

bool is_resolvable(const OperatorSpec& spec) {
  return std::visit(overloaded{
                        [](const op::Zero&) { return true; },
                        [](const op::Linear&) { return true; },
                        [](const op::Subdifferential&) { return true; },
                        [](const op::NormalCone&) { return true; },
                        [](const op::FiniteGraph&) { return false; },
                        [](const op::Yosida& y) { return is_resolvable(y.inner); },
                        [](const op::SumOf& s) {
                          int set_valued = 0;
                          for (const auto& t : s.terms) {
                            if (is_single_valued(t)) continue;
                            if (!is_resolvable(t)) return false;
                            ++set_valued;
                          }
                          return set_valued <= 1;
                        },
                        [](const op::AdjointComposition& c) { return is_single_valued(c.inner); },
                        [](const op::ProductLift& p) { return is_resolvable(p.inner); },
                        [](const op::GraphNormalCone&) { return true; },
                    },
                    spec.variant());
}

double lipschitz_bound(const OperatorSpec& spec) {
  return std::visit(
      overloaded{
          [](const op::Zero&) { return 0.0; },
          [](const op::Linear& l) { return spectral_bound(l.m); },
          [&](const op::Subdifferential& s) {
            if (const auto* q = std::get_if<fn::Quadratic>(&s.f.variant())) return spectral_bound(q->q);
            if (const auto* p = std::get_if<fn::ShiftedPower>(&s.f.variant()); p && p->power == 2) {
              return p->scale;
            }
            throw Unsupported("lipschitz_bound: set-valued " + spec.describe());
          },
          [&](const op::NormalCone&) -> double {
            throw Unsupported("lipschitz_bound: set-valued " + spec.describe());
          },
          [&](const op::FiniteGraph&) -> double {
            throw Unsupported("lipschitz_bound: set-valued " + spec.describe());
          },
          [](const op::Yosida& y) {
            // T_lambda is 1/lambda-Lipschitz, and never steeper than a Lipschitz T.
            if (is_single_valued(y.inner)) return std::min(1.0 / y.lambda, lipschitz_bound(y.inner));
            return 1.0 / y.lambda;
          },
          [](const op::SumOf& s) {
            double l = 0.0;
            for (const auto& t : s.terms) l += lipschitz_bound(t);
            return l;
          },
          [](const op::AdjointComposition& c) {
            const double na = spectral_bound(c.a);
            return na * na * lipschitz_bound(c.inner);
          },
          [](const op::ProductLift& p) { return lipschitz_bound(p.inner); },
          [&](const op::GraphNormalCone&) -> double {
            throw Unsupported("lipschitz_bound: set-valued " + spec.describe());
          },
      },
      spec.variant());
}

Vector single_valued_apply(const OperatorSpec& spec, const Vector& x) {
  require_dim(x, spec.dim(), "single_valued_apply");
  auto set_valued = [&]() -> Vector {
    throw Unsupported("single_valued_apply: not single-valued: " + spec.describe());
  };
  return std::visit(
      overloaded{
          [&](const op::Zero&) -> Vector { return Vector::Zero(x.size()); },
          [&](const op::Linear& l) -> Vector { return l.m * x; },
          [&](const op::Subdifferential& s) -> Vector {
            if (const auto* q = std::get_if<fn::Quadratic>(&s.f.variant())) return q->q * x + q->b;
            if (const auto* p = std::get_if<fn::ShiftedPower>(&s.f.variant()); p && p->power == 2) {
              return p->scale * (x - p->center);
            }
            return set_valued();
          },
          [&](const op::NormalCone&) -> Vector { return set_valued(); },
          [&](const op::FiniteGraph&) -> Vector { return set_valued(); },
          [&](const op::Yosida& y) -> Vector {
            // Forms that avoid the cancellation in (x - J x) / lambda for small lambda.
            if (const auto* inner = y.inner.get_if<op::Yosida>()) {
              return single_valued_apply(OperatorSpec::yosida(inner->inner, inner->lambda + y.lambda), x);
            }
            if (const auto* pl = y.inner.get_if<op::ProductLift>()) {
              return single_valued_apply(
                  OperatorSpec::product_lift(pl->outer_dim, OperatorSpec::yosida(pl->inner, y.lambda)), x);
            }
            if (const auto* l = y.inner.get_if<op::Linear>()) {
              const Matrix m = identity(x.size()) + y.lambda * l->m;
              return l->m * m.partialPivLu().solve(x);
            }
            if (const auto* s = y.inner.get_if<op::Subdifferential>()) {
              if (std::holds_alternative<fn::AbsValueSum>(s->f.variant())) {
                return (x / y.lambda).cwiseMax(-1.0).cwiseMin(1.0);
              }
            }
            if (const auto* n = y.inner.get_if<op::NormalCone>()) {
              if (const auto* pt = std::get_if<set::Singleton>(&n->set.variant())) {
                return (x - pt->point) / y.lambda;
              }
            }
            return (x - resolvent(y.inner, y.lambda, x).solution) / y.lambda;
          },
          [&](const op::SumOf& s) -> Vector {
            Vector out = Vector::Zero(x.size());
            for (const auto& t : s.terms) out += single_valued_apply(t, x);
            return out;
          },
          [&](const op::AdjointComposition& c) -> Vector {
            return c.a.transpose() * single_valued_apply(c.inner, c.a * x);
          },
          [&](const op::ProductLift& p) -> Vector {
            Vector out = Vector::Zero(x.size());
            out.tail(p.inner.dim()) = single_valued_apply(p.inner, x.tail(p.inner.dim()));
            return out;
          },
          [&](const op::GraphNormalCone&) -> Vector { return set_valued(); },
      },
      spec.variant());
}

Matrix single_valued_jacobian(const OperatorSpec& spec, const Vector& x) {
  require_dim(x, spec.dim(), "single_valued_jacobian");
  const auto d = x.size();
  auto set_valued = [&]() -> Matrix {
    throw Unsupported("single_valued_jacobian: not single-valued: " + spec.describe());
  };
  return std::visit(
      overloaded{
          [&](const op::Zero&) -> Matrix { return Matrix::Zero(d, d); },
          [&](const op::Linear& l) -> Matrix { return l.m; },
          [&](const op::Subdifferential& s) -> Matrix {
            if (const auto* q = std::get_if<fn::Quadratic>(&s.f.variant())) return q->q;
            if (const auto* p = std::get_if<fn::ShiftedPower>(&s.f.variant()); p && p->power == 2) {
              return p->scale * identity(d);
            }
            return set_valued();
          },
          [&](const op::NormalCone&) -> Matrix { return set_valued(); },
          [&](const op::FiniteGraph&) -> Matrix { return set_valued(); },
          [&](const op::Yosida& y) -> Matrix {
            if (const auto* inner = y.inner.get_if<op::Yosida>()) {
              return single_valued_jacobian(
                  OperatorSpec::yosida(inner->inner, inner->lambda + y.lambda), x);
            }
            if (const auto* pl = y.inner.get_if<op::ProductLift>()) {
              return single_valued_jacobian(
                  OperatorSpec::product_lift(pl->outer_dim, OperatorSpec::yosida(pl->inner, y.lambda)), x);
            }
            if (const auto* l = y.inner.get_if<op::Linear>()) {
              const Matrix m = identity(d) + y.lambda * l->m;
              return l->m * m.inverse();
            }
            if (const auto* s = y.inner.get_if<op::Subdifferential>()) {
              if (std::holds_alternative<fn::AbsValueSum>(s->f.variant())) {
                Matrix j = Matrix::Zero(d, d);
                for (Eigen::Index i = 0; i < d; ++i) {
                  if (std::abs(x[i]) < y.lambda) j(i, i) = 1.0 / y.lambda;
                }
                return j;
              }
            }
            return (identity(d) - resolvent_jacobian(y.inner, y.lambda, x)) / y.lambda;
          },
          [&](const op::SumOf& s) -> Matrix {
            Matrix out = Matrix::Zero(d, d);
            for (const auto& t : s.terms) out += single_valued_jacobian(t, x);
            return out;
          },
          [&](const op::AdjointComposition& c) -> Matrix {
            return c.a.transpose() * single_valued_jacobian(c.inner, c.a * x) * c.a;
          },
          [&](const op::ProductLift& p) -> Matrix {
            Matrix out = Matrix::Zero(d, d);
            const auto k = p.inner.dim();
            out.bottomRightCorner(k, k) = single_valued_jacobian(p.inner, x.tail(k));
            return out;
          },
          [&](const op::GraphNormalCone&) -> Matrix { return set_valued(); },
      },
      spec.variant());
}

SolveReport resolvent(const OperatorSpec& spec, double lambda, const Vector& w,
                      const ToleranceConfig& tol) {
  check_lambda(lambda);
  require_dim(w, spec.dim(), "resolvent");
  if (!w.allFinite()) throw InvalidSpec("resolvent: input must be finite");
  return std::visit(
      overloaded{
          [&](const op::Zero&) { return SolveReport{w, 0.0, 0, true}; },
          [&](const op::Linear& l) {
            const Matrix m = identity(w.size()) + lambda * l.m;
            const Vector z = m.partialPivLu().solve(w);
            const double res = (m * z - w).norm() / (1.0 + w.norm());
            return SolveReport{z, res, 0, res <= tol.eps_res};
          },
          [&](const op::Subdifferential& s) { return SolveReport{s.f.prox(lambda, w), 0.0, 0, true}; },
          [&](const op::NormalCone& n) { return SolveReport{n.set.project(w), 0.0, 0, true}; },
          [&](const op::FiniteGraph&) -> SolveReport {
            throw NotResolvable("finite graphs have no resolvent: " + spec.describe());
          },
          [&](const op::Yosida& y) {
            // J^{T_mu}_lambda = I + lambda / (lambda + mu) (J^T_{lambda + mu} - I)
            SolveReport inner = resolvent(y.inner, lambda + y.lambda, w, tol);
            inner.solution = w + (lambda / (lambda + y.lambda)) * (inner.solution - w);
            return inner;
          },
          [&](const op::SumOf& s) {
            if (s.terms.size() == 1) return resolvent(s.terms.front(), lambda, w, tol);
            return solve_split(split_terms(s.terms), lambda, w, tol);
          },
          [&](const op::AdjointComposition& c) {
            if (!is_single_valued(c.inner)) {
              throw NotResolvable("adjoint composition with set-valued inner operator: " +
                                  spec.describe());
            }
            return solve_split(SplitProblem{std::nullopt, {spec}}, lambda, w, tol);
          },
          [&](const op::ProductLift& p) {
            const auto k = p.inner.dim();
            SolveReport inner = resolvent(p.inner, lambda, w.tail(k), tol);
            Vector z(w.size());
            z.head(p.outer_dim) = w.head(p.outer_dim);
            z.tail(k) = inner.solution;
            inner.solution = std::move(z);
            return inner;
          },
          [&](const op::GraphNormalCone& g) { return SolveReport{project_graph(g.a, w), 0.0, 0, true}; },
      },
      spec.variant());
}

Matrix resolvent_jacobian(const OperatorSpec& spec, double lambda, const Vector& w,
                          const ToleranceConfig& tol) {
  check_lambda(lambda);
  require_dim(w, spec.dim(), "resolvent_jacobian");
  const auto d = w.size();
  return std::visit(
      overloaded{
          [&](const op::Zero&) -> Matrix { return identity(d); },
          [&](const op::Linear& l) -> Matrix { return (identity(d) + lambda * l.m).inverse(); },
          [&](const op::Subdifferential& s) -> Matrix { return s.f.prox_jacobian(lambda, w); },
          [&](const op::NormalCone& n) -> Matrix { return n.set.project_jacobian(w); },
          [&](const op::FiniteGraph&) -> Matrix {
            throw NotResolvable("finite graphs have no resolvent: " + spec.describe());
          },
          [&](const op::Yosida& y) -> Matrix {
            const double t = lambda / (lambda + y.lambda);
            return identity(d) + t * (resolvent_jacobian(y.inner, lambda + y.lambda, w, tol) - identity(d));
          },
          [&](const op::SumOf& s) -> Matrix {
            if (s.terms.size() == 1) return resolvent_jacobian(s.terms.front(), lambda, w, tol);
            const SplitProblem prob = split_terms(s.terms);
            const Vector z = solve_split(prob, lambda, w, tol).solution;
            const Vector v = w - lambda * forward_apply(prob, z);
            const Matrix p =
                prob.backward ? resolvent_jacobian(*prob.backward, lambda, v, tol) : identity(d);
            const Matrix m = identity(d) + lambda * p * forward_jacobian(prob, z);
            return m.fullPivLu().solve(p);
          },
          [&](const op::AdjointComposition& c) -> Matrix {
            if (!is_single_valued(c.inner)) {
              throw NotResolvable("adjoint composition with set-valued inner operator");
            }
            const Vector z = resolvent(spec, lambda, w, tol).solution;
            return (identity(d) + lambda * single_valued_jacobian(spec, z)).inverse();
          },
          [&](const op::ProductLift& p) -> Matrix {
            Matrix j = identity(d);
            const auto k = p.inner.dim();
            j.bottomRightCorner(k, k) = resolvent_jacobian(p.inner, lambda, w.tail(k), tol);
            return j;
          },
          [&](const op::GraphNormalCone& g) -> Matrix { return graph_projector(g.a); },
      },
      spec.variant());
}

Vector yosida_eval(const OperatorSpec& spec, double lambda, const Vector& x,
                   const ToleranceConfig& tol) {
  const SolveReport r = resolvent(spec, lambda, x, tol);
  return (x - r.solution) / lambda;
}

SolveReport solve_probe_equation(const OperatorSpec& tn, const DualPair& p,
                                 const ToleranceConfig& tol) {
  require_dim(p.x, tn.dim(), "solve_probe_equation");
  return resolvent(tn, 1.0, p.x + p.xstar, tol);
}

SolveReport strongly_monotone_solve(const VectorField& field, double m, double lipschitz,
                                    const Vector& w0, const ToleranceConfig& tol,
                                    long max_iterations) {
  if (!(m > 0.0) || !(lipschitz >= m)) {
    throw InvalidSpec("strongly_monotone_solve: need 0 < m <= L");
  }
  const double alpha = m / (lipschitz * lipschitz);
  Vector z = w0;
  SolveReport best{z, std::numeric_limits<double>::infinity(), 0, false};
  for (long k = 0; k <= max_iterations; ++k) {
    const Vector f = field(z);
    const double res = f.norm();
    if (!std::isfinite(res)) break;
    if (res < best.residual) best = SolveReport{z, res, k, false};
    if (res <= tol.eps_res) {
      best.converged = true;
      return best;
    }
    z -= alpha * f;
  }
  throw NoConvergence("strongly_monotone_solve: iteration cap reached", best);
}

}  // namespace monolab
