#include "monolab/operators.hpp"

#include "monolab/resolvent.hpp"
#include "overloaded.hpp"

#include <cmath>
#include <limits>

namespace monolab {

using detail::overloaded;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSetTol = 1e-12;

bool near(double a, double b) { return std::isfinite(b) && std::abs(a - b) <= kSetTol * (1.0 + std::abs(b)); }

SetDescription graph_normal_cone_at(const Matrix& a, const Vector& z) {
  const auto dy = a.cols();
  const auto dx = a.rows();
  const int d = static_cast<int>(dy + dx);
  const Vector y = z.head(dy);
  const Vector x = z.tail(dx);
  if ((x - a * y).norm() > kSetTol * (1.0 + x.norm())) return SetDescription::empty(d);
  // {(A' t, -t) : t in R^dX}
  Matrix g(d, dx);
  g.topRows(dy) = a.transpose();
  g.bottomRows(dx) = -Matrix::Identity(dx, dx);
  return SetDescription::generated(Vector::Zero(d), std::move(g), Vector::Constant(dx, -kInf),
                                   Vector::Constant(dx, kInf));
}

SetDescription normal_cone_at(const ConvexSet& c, const Vector& x) {
  const int d = c.dim();
  return std::visit(
      overloaded{
          [&](const set::Singleton& s) {
            if ((x - s.point).norm() <= kSetTol * (1.0 + s.point.norm())) {
              return SetDescription::whole_space(d);
            }
            return SetDescription::empty(d);
          },
          [&](const set::Box& s) {
            Vector lo = Vector::Zero(d), hi = Vector::Zero(d);
            for (int i = 0; i < d; ++i) {
              const bool at_lo = near(x[i], s.lo[i]);
              const bool at_hi = near(x[i], s.hi[i]);
              if (!at_lo && !at_hi && (x[i] < s.lo[i] || x[i] > s.hi[i])) {
                return SetDescription::empty(d);
              }
              if (at_lo) lo[i] = -kInf;
              if (at_hi) hi[i] = kInf;
            }
            return SetDescription::box(lo, hi);
          },
          [&](const set::Halfspace& s) {
            const double v = s.normal.dot(x);
            if (near(v, s.offset)) {
              return SetDescription::generated(Vector::Zero(d), Matrix(s.normal), Vector::Zero(1),
                                               Vector::Constant(1, kInf));
            }
            if (v < s.offset) return SetDescription::point(Vector::Zero(d));
            return SetDescription::empty(d);
          },
          [&](const set::AffineGraph& s) { return graph_normal_cone_at(s.map, x); },
      },
      c.variant());
}

SetDescription subdifferential_at(const ConvexFn& f, const Vector& x) {
  const int d = f.dim();
  return std::visit(
      overloaded{
          [&](const fn::AbsValueSum&) {
            Vector off = Vector::Zero(d), lo = Vector::Zero(d), hi = Vector::Zero(d);
            for (int i = 0; i < d; ++i) {
              if (x[i] > 0) {
                off[i] = 1.0;
              } else if (x[i] < 0) {
                off[i] = -1.0;
              } else {
                lo[i] = -1.0;
                hi[i] = 1.0;
              }
            }
            return SetDescription::generated(off, Matrix::Identity(d, d), lo, hi);
          },
          [&](const fn::Quadratic& q) { return SetDescription::point(q.q * x + q.b); },
          [&](const fn::Indicator& ind) { return normal_cone_at(ind.set, x); },
          [&](const fn::ShiftedPower& p) {
            const Vector u = x - p.center;
            if (p.power == 2) return SetDescription::point(p.scale * u);
            const double r = u.norm();
            if (r > 0) return SetDescription::point(p.scale * u / r);
            if (d == 1) {
              return SetDescription::box(Vector::Constant(1, -p.scale), Vector::Constant(1, p.scale));
            }
            return SetDescription::unsupported(d, "ball-valued subdifferential");
          },
      },
      f.variant());
}

}  // namespace

SetDescription op_eval(const OperatorSpec& spec, const Vector& x) {
  require_dim(x, spec.dim(), "op_eval");
  const int d = spec.dim();
  return std::visit(
      overloaded{
          [&](const op::Zero&) { return SetDescription::point(Vector::Zero(d)); },
          [&](const op::Linear& l) { return SetDescription::point(l.m * x); },
          [&](const op::Subdifferential& s) { return subdifferential_at(s.f, x); },
          [&](const op::NormalCone& n) { return normal_cone_at(n.set, x); },
          [&](const op::FiniteGraph& g) {
            std::vector<Vector> values;
            for (const auto& p : g.graph.pairs) {
              if ((p.x - x).norm() <= kSetTol * (1.0 + x.norm())) values.push_back(p.xstar);
            }
            if (values.empty()) return SetDescription::empty(d);
            for (const auto& v : values) {
              if ((v - values.front()).norm() > kSetTol * (1.0 + v.norm())) {
                return SetDescription::unsupported(d, "finite non-convex value set");
              }
            }
            return SetDescription::point(values.front());
          },
          [&](const op::Yosida& y) {
            return SetDescription::point(yosida_eval(y.inner, y.lambda, x));
          },
          [&](const op::SumOf& s) {
            SetDescription acc = op_eval(s.terms.front(), x);
            for (std::size_t i = 1; i < s.terms.size(); ++i) {
              acc = acc.minkowski_sum(op_eval(s.terms[i], x));
            }
            return acc;
          },
          [&](const op::AdjointComposition& c) {
            return op_eval(c.inner, c.a * x).image(c.a.transpose());
          },
          [&](const op::ProductLift& p) {
            const SetDescription inner = op_eval(p.inner, x.tail(p.inner.dim()));
            return SetDescription::point(Vector::Zero(p.outer_dim)).product(inner);
          },
          [&](const op::GraphNormalCone& g) { return graph_normal_cone_at(g.a, x); },
      },
      spec.variant());
}

SetDescription minkowski_sum_eval(const OperatorSpec& t1, const OperatorSpec& t2, const Vector& x) {
  if (t1.dim() != t2.dim()) throw DimensionMismatch("minkowski_sum_eval: operator dimensions differ");
  return op_eval(t1, x).minkowski_sum(op_eval(t2, x));
}

double monotone_gap(const DualPair& p, const DualPair& q) {
  return (q.xstar - p.xstar).dot(q.x - p.x);
}

MonotoneCheck graph_monotone_check(const SampledGraph& g, const ToleranceConfig& tol) {
  MonotoneCheck out;
  const auto& pairs = g.pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const double gap = monotone_gap(pairs[i], pairs[j]);
      if (gap < out.worst_gap) {
        out.worst_gap = gap;
        out.worst_pair = std::make_pair(pairs[i], pairs[j]);
      }
    }
  }
  out.is_monotone = out.worst_gap >= -tol.eps_gap;
  return out;
}

double polar_gap(const DualPair& p, const SampledGraph& g) {
  double worst = kInf;
  for (const auto& q : g.pairs) {
    if (q.dim() != p.dim()) throw DimensionMismatch("polar_gap: pair and graph dimensions differ");
    worst = std::min(worst, monotone_gap(p, q));
  }
  return worst;
}

bool polar_member(const DualPair& p, const SampledGraph& g, const ToleranceConfig& tol) {
  if (p.dim() != g.dim) throw DimensionMismatch("polar_member: pair and graph dimensions differ");
  return polar_gap(p, g) >= -tol.eps_gap;
}

}  // namespace monolab
