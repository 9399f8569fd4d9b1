#pragma once

#include "monolab/types.hpp"

#include <optional>
#include <string>

namespace monolab {

/// Value set T(x) of an operator at a point.
///
/// Nonempty sets are stored as `offset + sum_i c_i g_i` with each coefficient
/// c_i in [lo_i, hi_i]; bounds may be infinite. This covers points, boxes,
/// half-lines, lines, subspaces and their Minkowski sums and linear images.
class SetDescription {
 public:
  enum class Kind { Empty, Set, Unsupported };

  static SetDescription empty(int dim);
  static SetDescription unsupported(int dim, std::string reason);
  static SetDescription point(Vector p);
  static SetDescription box(const Vector& lo, const Vector& hi);
  static SetDescription whole_space(int dim);
  static SetDescription generated(Vector offset, Matrix generators, Vector lo, Vector hi);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_empty() const { return kind_ == Kind::Empty; }
  bool is_unsupported() const { return kind_ == Kind::Unsupported; }
  bool is_singleton() const;
  bool is_whole_space() const;

  const Vector& offset() const { return offset_; }
  const Matrix& generators() const { return gens_; }
  const Vector& lower() const { return lo_; }
  const Vector& upper() const { return hi_; }
  const std::string& reason() const { return reason_; }

  /// Coordinate bounds when the set is an axis-aligned box (generators are
  /// distinct unit vectors); std::nullopt otherwise.
  std::optional<std::pair<Vector, Vector>> as_box() const;

  /// Throws Unsupported when membership cannot be decided exactly (degenerate
  /// generator configuration or unsupported set).
  bool contains(const Vector& y, double tol = 1e-9) const;

  SetDescription minkowski_sum(const SetDescription& other) const;
  /// { M s : s in this }
  SetDescription image(const Matrix& m) const;
  /// this x other in the product space.
  SetDescription product(const SetDescription& other) const;

  std::string describe() const;

 private:
  SetDescription() = default;
  void normalize();

  Kind kind_ = Kind::Empty;
  int dim_ = 0;
  Vector offset_;
  Matrix gens_;
  Vector lo_;
  Vector hi_;
  std::string reason_;
};

}  // namespace monolab
