#include "monolab/set_description.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace monolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + ")";
}

}  // namespace

SetDescription SetDescription::empty(int dim) {
  SetDescription s;
  s.kind_ = Kind::Empty;
  s.dim_ = dim;
  return s;
}

SetDescription SetDescription::unsupported(int dim, std::string reason) {
  SetDescription s;
  s.kind_ = Kind::Unsupported;
  s.dim_ = dim;
  s.reason_ = std::move(reason);
  return s;
}

SetDescription SetDescription::point(Vector p) {
  const auto d = p.size();
  return generated(std::move(p), Matrix(d, 0), Vector(0), Vector(0));
}

SetDescription SetDescription::box(const Vector& lo, const Vector& hi) {
  const auto d = lo.size();
  if (hi.size() != d) throw DimensionMismatch("SetDescription::box: bound sizes differ");
  return generated(Vector::Zero(d), Matrix::Identity(d, d), lo, hi);
}

SetDescription SetDescription::whole_space(int dim) {
  return box(Vector::Constant(dim, -kInf), Vector::Constant(dim, kInf));
}

SetDescription SetDescription::generated(Vector offset, Matrix generators, Vector lo, Vector hi) {
  if (generators.rows() != offset.size() || generators.cols() != lo.size() ||
      lo.size() != hi.size()) {
    throw DimensionMismatch("SetDescription::generated: inconsistent shapes");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i]) || lo[i] == kInf || hi[i] == -kInf) {
      throw InvalidSpec("SetDescription::generated: need lo <= hi per generator");
    }
  }
  SetDescription s;
  s.kind_ = Kind::Set;
  s.dim_ = static_cast<int>(offset.size());
  s.offset_ = std::move(offset);
  s.gens_ = std::move(generators);
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  s.normalize();
  return s;
}

void SetDescription::normalize() {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    if (gens_.col(j).norm() == 0.0) continue;
    if (lo_[j] == hi_[j]) {
      offset_ += lo_[j] * gens_.col(j);
      continue;
    }
    keep.push_back(j);
  }
  Matrix g(dim_, static_cast<Eigen::Index>(keep.size()));
  Vector lo(keep.size()), hi(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    g.col(k) = gens_.col(keep[k]);
    lo[k] = lo_[keep[k]];
    hi[k] = hi_[keep[k]];
  }
  gens_ = std::move(g);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
}

bool SetDescription::is_singleton() const { return kind_ == Kind::Set && gens_.cols() == 0; }

bool SetDescription::is_whole_space() const {
  if (kind_ != Kind::Set) return false;
  std::vector<Eigen::Index> lines;
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    if (lo_[j] == -kInf && hi_[j] == kInf) lines.push_back(j);
  }
  if (static_cast<int>(lines.size()) < dim_) return false;
  Matrix g(dim_, static_cast<Eigen::Index>(lines.size()));
  for (std::size_t k = 0; k < lines.size(); ++k) g.col(k) = gens_.col(lines[k]);
  return Eigen::FullPivLU<Matrix>(g).rank() == dim_;
}

std::optional<std::pair<Vector, Vector>> SetDescription::as_box() const {
  if (kind_ != Kind::Set) return std::nullopt;
  Vector lo = offset_, hi = offset_;
  std::vector<bool> used(dim_, false);
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    Eigen::Index k = 0;
    const double big = gens_.col(j).cwiseAbs().maxCoeff(&k);
    if (gens_.col(j).norm() != big || used[k]) return std::nullopt;
    used[k] = true;
    const double s = gens_(k, j);
    const double a = s > 0 ? s * lo_[j] : s * hi_[j];
    const double b = s > 0 ? s * hi_[j] : s * lo_[j];
    lo[k] += a;
    hi[k] += b;
  }
  return std::make_pair(lo, hi);
}

bool SetDescription::contains(const Vector& y, double tol) const {
  require_dim(y, dim_, "SetDescription::contains");
  if (kind_ == Kind::Empty) return false;
  if (kind_ == Kind::Unsupported) throw Unsupported("membership in unsupported set: " + reason_);

  const Vector r = y - offset_;
  // Merge parallel generators so that the coefficient solve is unique.
  std::vector<Vector> cols;
  std::vector<double> lo, hi;
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    const Vector g = gens_.col(j);
    bool merged = false;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double k = cols[i].dot(g) / cols[i].squaredNorm();
      if ((g - k * cols[i]).norm() <= 1e-12 * g.norm()) {
        const double a = k > 0 ? k * lo_[j] : k * hi_[j];
        const double b = k > 0 ? k * hi_[j] : k * lo_[j];
        lo[i] += a;
        hi[i] += b;
        merged = true;
        break;
      }
    }
    if (!merged) {
      cols.push_back(g);
      lo.push_back(lo_[j]);
      hi.push_back(hi_[j]);
    }
  }
  const double scale = 1.0 + y.norm() + offset_.norm();
  if (cols.empty()) return r.norm() <= tol * scale;

  Matrix g(dim_, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) g.col(i) = cols[i];
  Eigen::ColPivHouseholderQR<Matrix> qr(g);
  if (qr.rank() < g.cols()) {
    throw Unsupported("membership test needs linearly independent generators");
  }
  const Vector c = qr.solve(r);
  if ((g * c - r).norm() > tol * scale) return false;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const double t = tol * (1.0 + std::abs(c[i]));
    if (c[i] < lo[i] - t || c[i] > hi[i] + t) return false;
  }
  return true;
}

SetDescription SetDescription::minkowski_sum(const SetDescription& other) const {
  if (other.dim_ != dim_) throw DimensionMismatch("minkowski_sum: dimensions differ");
  if (is_empty() || other.is_empty()) return empty(dim_);
  if (is_unsupported()) return *this;
  if (other.is_unsupported()) return other;
  Matrix g(dim_, gens_.cols() + other.gens_.cols());
  g << gens_, other.gens_;
  Vector lo(lo_.size() + other.lo_.size()), hi(hi_.size() + other.hi_.size());
  lo << lo_, other.lo_;
  hi << hi_, other.hi_;
  return generated(offset_ + other.offset_, std::move(g), std::move(lo), std::move(hi));
}

SetDescription SetDescription::image(const Matrix& m) const {
  if (m.cols() != dim_) throw DimensionMismatch("image: matrix columns differ from set dimension");
  const int out = static_cast<int>(m.rows());
  if (is_empty()) return empty(out);
  if (is_unsupported()) return unsupported(out, reason_);
  return generated(m * offset_, m * gens_, lo_, hi_);
}

SetDescription SetDescription::product(const SetDescription& other) const {
  const int d = dim_ + other.dim_;
  if (is_empty() || other.is_empty()) return empty(d);
  if (is_unsupported()) return unsupported(d, reason_);
  if (other.is_unsupported()) return unsupported(d, other.reason_);
  Vector off(d);
  off << offset_, other.offset_;
  Matrix g = Matrix::Zero(d, gens_.cols() + other.gens_.cols());
  g.topLeftCorner(dim_, gens_.cols()) = gens_;
  g.bottomRightCorner(other.dim_, other.gens_.cols()) = other.gens_;
  Vector lo(lo_.size() + other.lo_.size()), hi(hi_.size() + other.hi_.size());
  lo << lo_, other.lo_;
  hi << hi_, other.hi_;
  return generated(std::move(off), std::move(g), std::move(lo), std::move(hi));
}

std::string SetDescription::describe() const {
  switch (kind_) {
    case Kind::Empty:
      return "empty";
    case Kind::Unsupported:
      return "unsupported (" + reason_ + ")";
    case Kind::Set:
      break;
  }
  if (is_singleton()) return "{" + vec_str(offset_) + "}";
  if (is_whole_space()) return "R^" + std::to_string(dim_);
  if (auto b = as_box()) {
    if (dim_ == 1) return "[" + num(b->first[0]) + ", " + num(b->second[0]) + "]";
    return "box[" + vec_str(b->first) + ", " + vec_str(b->second) + "]";
  }
  std::string s = vec_str(offset_);
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    s += " + [" + num(lo_[j]) + ", " + num(hi_[j]) + "]*" + vec_str(gens_.col(j));
  }
  return s;
}

}  // namespace monolab
