#include "monolab/convex.hpp"

#include "overloaded.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace monolab {

namespace {

using detail::overloaded;

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix graph_projector(const Matrix& a) {
  // Projection onto {(y, Ay)}: y = (I + A'A)^{-1}(u + A'v), x = A y.
  const auto dy = a.cols();
  const auto dx = a.rows();
  Matrix lift(dy + dx, dy);
  lift.topRows(dy).setIdentity();
  lift.bottomRows(dx) = a;
  const Matrix gram = Matrix::Identity(dy, dy) + a.transpose() * a;
  return lift * gram.ldlt().solve(lift.transpose());
}

std::string vec_str(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

ConvexSet ConvexSet::singleton(Vector p) {
  if (p.size() < 1 || !p.allFinite()) throw InvalidSpec("singleton: point must be finite, dim >= 1");
  return ConvexSet(set::Singleton{std::move(p)});
}

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() < 1) throw InvalidSpec("box: bounds must share dim >= 1");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i] || lo[i] == kInf || hi[i] == -kInf) {
      throw InvalidSpec("box: need lo <= hi with lo < +inf and hi > -inf");
    }
  }
  return ConvexSet(set::Box{std::move(lo), std::move(hi)});
}

ConvexSet ConvexSet::halfspace(Vector a, double b) {
  if (a.size() < 1 || !a.allFinite() || a.norm() == 0.0 || !std::isfinite(b)) {
    throw InvalidSpec("halfspace: normal must be finite and nonzero");
  }
  return ConvexSet(set::Halfspace{std::move(a), b});
}

ConvexSet ConvexSet::affine_graph(Matrix a) {
  if (a.size() < 1 || !a.allFinite()) throw InvalidSpec("affine graph: map must be finite");
  return ConvexSet(set::AffineGraph{std::move(a)});
}

int ConvexSet::dim() const {
  return std::visit(overloaded{
                        [](const set::Singleton& s) { return int(s.point.size()); },
                        [](const set::Box& s) { return int(s.lo.size()); },
                        [](const set::Halfspace& s) { return int(s.normal.size()); },
                        [](const set::AffineGraph& s) { return int(s.map.rows() + s.map.cols()); },
                    },
                    v_);
}

bool ConvexSet::contains(const Vector& x, double tol) const {
  require_dim(x, dim(), "ConvexSet::contains");
  return std::visit(
      overloaded{
          [&](const set::Singleton& s) { return (x - s.point).norm() <= tol * (1.0 + s.point.norm()); },
          [&](const set::Box& s) {
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              if (x[i] < s.lo[i] - tol || x[i] > s.hi[i] + tol) return false;
            }
            return true;
          },
          [&](const set::Halfspace& s) { return s.normal.dot(x) <= s.offset + tol * s.normal.norm(); },
          [&](const set::AffineGraph& s) {
            const auto dy = s.map.cols();
            const Vector y = x.head(dy);
            const Vector xx = x.tail(s.map.rows());
            return (xx - s.map * y).norm() <= tol * (1.0 + xx.norm());
          },
      },
      v_);
}

Vector ConvexSet::project(const Vector& x) const {
  require_dim(x, dim(), "ConvexSet::project");
  return std::visit(overloaded{
                        [&](const set::Singleton& s) -> Vector { return s.point; },
                        [&](const set::Box& s) -> Vector { return x.cwiseMax(s.lo).cwiseMin(s.hi); },
                        [&](const set::Halfspace& s) -> Vector {
                          const double excess = s.normal.dot(x) - s.offset;
                          if (excess <= 0.0) return x;
                          return x - (excess / s.normal.squaredNorm()) * s.normal;
                        },
                        [&](const set::AffineGraph& s) -> Vector {
                          const auto dy = s.map.cols();
                          const Matrix gram =
                              Matrix::Identity(dy, dy) + s.map.transpose() * s.map;
                          const Vector y =
                              gram.ldlt().solve(x.head(dy) + s.map.transpose() * x.tail(s.map.rows()));
                          Vector out(x.size());
                          out.head(dy) = y;
                          out.tail(s.map.rows()) = s.map * y;
                          return out;
                        },
                    },
                    v_);
}

Matrix ConvexSet::project_jacobian(const Vector& x) const {
  require_dim(x, dim(), "ConvexSet::project_jacobian");
  const int d = dim();
  return std::visit(overloaded{
                        [&](const set::Singleton&) -> Matrix { return Matrix::Zero(d, d); },
                        [&](const set::Box& s) -> Matrix {
                          Matrix j = Matrix::Zero(d, d);
                          for (int i = 0; i < d; ++i) {
                            if (x[i] > s.lo[i] && x[i] < s.hi[i]) j(i, i) = 1.0;
                          }
                          return j;
                        },
                        [&](const set::Halfspace& s) -> Matrix {
                          Matrix j = Matrix::Identity(d, d);
                          if (s.normal.dot(x) > s.offset) {
                            j -= s.normal * s.normal.transpose() / s.normal.squaredNorm();
                          }
                          return j;
                        },
                        [&](const set::AffineGraph& s) -> Matrix { return graph_projector(s.map); },
                    },
                    v_);
}

std::string ConvexSet::describe() const {
  return std::visit(
      overloaded{
          [](const set::Singleton& s) { return "{" + vec_str(s.point) + "}"; },
          [](const set::Box& s) { return "box[" + vec_str(s.lo) + ", " + vec_str(s.hi) + "]"; },
          [](const set::Halfspace& s) {
            std::ostringstream os;
            os << "halfspace{<" << vec_str(s.normal) << ", x> <= " << s.offset << "}";
            return os.str();
          },
          [](const set::AffineGraph& s) {
            std::ostringstream os;
            os << "graph(A " << s.map.rows() << "x" << s.map.cols() << ")";
            return os.str();
          },
      },
      v_);
}

ConvexFn ConvexFn::abs_value_sum(int dim) {
  if (dim < 1) throw InvalidSpec("abs_value_sum: dim must be >= 1");
  return ConvexFn(fn::AbsValueSum{dim});
}

ConvexFn ConvexFn::quadratic(Matrix q, Vector b) {
  if (q.rows() != q.cols() || q.rows() != b.size() || q.rows() < 1) {
    throw InvalidSpec("quadratic: Q must be square and match b");
  }
  if ((q - q.transpose()).norm() > 1e-12 * (1.0 + q.norm())) throw InvalidSpec("quadratic: Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9) throw InvalidSpec("quadratic: Q must be psd");
  return ConvexFn(fn::Quadratic{std::move(q), std::move(b)});
}

ConvexFn ConvexFn::indicator(ConvexSet c) { return ConvexFn(fn::Indicator{std::move(c)}); }

ConvexFn ConvexFn::shifted_power(Vector center, int power, double scale) {
  if (power != 1 && power != 2) throw InvalidSpec("shifted_power: power must be 1 or 2");
  if (!(scale > 0) || !std::isfinite(scale)) throw InvalidSpec("shifted_power: scale must be > 0");
  if (center.size() < 1 || !center.allFinite()) throw InvalidSpec("shifted_power: bad center");
  return ConvexFn(fn::ShiftedPower{std::move(center), power, scale});
}

int ConvexFn::dim() const {
  return std::visit(overloaded{
                        [](const fn::AbsValueSum& f) { return f.dim; },
                        [](const fn::Quadratic& f) { return int(f.b.size()); },
                        [](const fn::Indicator& f) { return f.set.dim(); },
                        [](const fn::ShiftedPower& f) { return int(f.center.size()); },
                    },
                    v_);
}

double ConvexFn::value(const Vector& x) const {
  require_dim(x, dim(), "ConvexFn::value");
  return std::visit(overloaded{
                        [&](const fn::AbsValueSum&) { return x.lpNorm<1>(); },
                        [&](const fn::Quadratic& f) { return 0.5 * x.dot(f.q * x) + f.b.dot(x); },
                        [&](const fn::Indicator& f) { return f.set.contains(x) ? 0.0 : kInf; },
                        [&](const fn::ShiftedPower& f) {
                          const double r = (x - f.center).norm();
                          return f.power == 1 ? f.scale * r : 0.5 * f.scale * r * r;
                        },
                    },
                    v_);
}

Vector ConvexFn::prox(double lambda, const Vector& w) const {
  require_dim(w, dim(), "ConvexFn::prox");
  return std::visit(overloaded{
                        [&](const fn::AbsValueSum&) -> Vector {
                          Vector z(w.size());
                          for (Eigen::Index i = 0; i < w.size(); ++i) {
                            const double a = std::abs(w[i]) - lambda;
                            z[i] = a > 0.0 ? std::copysign(a, w[i]) : 0.0;
                          }
                          return z;
                        },
                        [&](const fn::Quadratic& f) -> Vector {
                          const Matrix m = Matrix::Identity(w.size(), w.size()) + lambda * f.q;
                          return m.ldlt().solve(w - lambda * f.b);
                        },
                        [&](const fn::Indicator& f) -> Vector { return f.set.project(w); },
                        [&](const fn::ShiftedPower& f) -> Vector {
                          const Vector u = w - f.center;
                          if (f.power == 2) return f.center + u / (1.0 + lambda * f.scale);
                          const double r = u.norm();
                          const double t = lambda * f.scale;
                          if (r <= t) return f.center;
                          return f.center + (1.0 - t / r) * u;
                        },
                    },
                    v_);
}

Matrix ConvexFn::prox_jacobian(double lambda, const Vector& w) const {
  require_dim(w, dim(), "ConvexFn::prox_jacobian");
  const auto d = w.size();
  return std::visit(overloaded{
                        [&](const fn::AbsValueSum&) -> Matrix {
                          Matrix j = Matrix::Zero(d, d);
                          for (Eigen::Index i = 0; i < d; ++i) {
                            if (std::abs(w[i]) > lambda) j(i, i) = 1.0;
                          }
                          return j;
                        },
                        [&](const fn::Quadratic& f) -> Matrix {
                          const Matrix m = Matrix::Identity(d, d) + lambda * f.q;
                          return m.inverse();
                        },
                        [&](const fn::Indicator& f) -> Matrix { return f.set.project_jacobian(w); },
                        [&](const fn::ShiftedPower& f) -> Matrix {
                          const Vector u = w - f.center;
                          if (f.power == 2) return Matrix::Identity(d, d) / (1.0 + lambda * f.scale);
                          const double r = u.norm();
                          const double t = lambda * f.scale;
                          if (r <= t) return Matrix::Zero(d, d);
                          return (1.0 - t / r) * Matrix::Identity(d, d) +
                                 (t / (r * r * r)) * u * u.transpose();
                        },
                    },
                    v_);
}

bool ConvexFn::is_smooth() const {
  return std::visit(overloaded{
                        [](const fn::AbsValueSum&) { return false; },
                        [](const fn::Quadratic&) { return true; },
                        [](const fn::Indicator&) { return false; },
                        [](const fn::ShiftedPower& f) { return f.power == 2; },
                    },
                    v_);
}

std::string ConvexFn::describe() const {
  return std::visit(overloaded{
                        [](const fn::AbsValueSum&) { return std::string("sum|x_i|"); },
                        [](const fn::Quadratic&) { return std::string("quadratic"); },
                        [](const fn::Indicator& f) { return "indicator" + f.set.describe(); },
                        [](const fn::ShiftedPower& f) {
                          std::ostringstream os;
                          os << f.scale << "*|x-" << vec_str(f.center) << "|^" << f.power << "/"
                             << f.power;
                          return os.str();
                        },
                    },
                    v_);
}

}  // namespace monolab
