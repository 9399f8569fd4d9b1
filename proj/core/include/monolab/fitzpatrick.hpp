#pragma once

#include "monolab/types.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace monolab {

/// Rectangular grid over X x X* = R^d x R^d.
///
/// Axes 0..d-1 discretize x, axes d..2d-1 discretize x*. Node index is
/// row-major with the last axis fastest.
class GridSpec {
 public:
  struct Axis {
    double lo;
    double hi;
    int count;
  };

  GridSpec() = default;
  explicit GridSpec(std::vector<Axis> axes);

  /// Same axis for every x coordinate and another for every x* coordinate.
  static GridSpec uniform(int dim, Axis x_axis, Axis xstar_axis);
  /// [-bound, bound] with the given step on all 2d axes.
  static GridSpec symmetric(int dim, double bound, double step);

  int dim() const { return static_cast<int>(axes_.size()) / 2; }
  int axis_count() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int k) const { return axes_[k]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t node_count() const;
  double step(int k) const;
  double max_step() const;
  double coord(int k, int i) const;

  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<int>& idx) const;
  DualPair node(std::size_t flat) const;
  bool contains(const DualPair& p, double tol = 1e-9) const;
  /// Grid with each axis refined by `factor` (count -> (count-1)*factor+1).
  GridSpec refined(int factor) const;

 private:
  std::vector<Axis> axes_;
};

/// Real values on grid nodes; +inf allowed, -inf never.
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  double at(std::size_t flat) const { return values[flat]; }
};

struct FClassCheck {
  bool ok = true;
  DualPair worst_node;
  double worst_gap = std::numeric_limits<double>::infinity();  // min f - <x*, x>
};

struct Classification {
  bool is_monotone = false;
  bool is_representable = false;
  bool is_maximal = false;

  double monotone_gap = 0.0;         // worst pairwise gap of the graph
  FClassCheck conjugate_in_f;        // phi_T* >= pairing
  FClassCheck fitzpatrick_in_f;      // phi_T >= pairing
  double hausdorff = std::numeric_limits<double>::infinity();  // d_H(T, L(phi_T*))
  double hausdorff_limit = 0.0;      // 2 * grid step
  std::size_t l_set_size = 0;

  std::optional<ScalarField> phi;
  std::optional<ScalarField> phi_star;
};

/// phi_T(x, x*) = max over (y, y*) in g of <y*, x> - <y*, y> + <x*, y>.
double fitzpatrick_eval(const SampledGraph& g, const DualPair& p);

ScalarField fitzpatrick_field(const SampledGraph& g, const GridSpec& grid);

/// Exact discrete conjugate under the pairing <(y,y*),(x,x*)> = <x*, y> + <y*, x>,
/// restricted to grid nodes, computed by one max-plus sweep per axis.
ScalarField conjugate_field(const ScalarField& f);

FClassCheck in_f_class(const ScalarField& f, const ToleranceConfig& tol = {});

/// Grid nodes where f <= <x*, x> + eps_rep.
SampledGraph l_set(const ScalarField& f, const ToleranceConfig& tol = {});

/// Two-sided Hausdorff distance in the Euclidean norm of R^d x R^d.
double hausdorff_distance(const SampledGraph& a, const SampledGraph& b);

/// Grid-resolution classification: monotone, representable (phi* in F and
/// d_H(T, L(phi*)) <= 2 step), maximal (additionally phi in F). phi* is
/// conjugated over the grid padded by half its span per side, then restricted.
Classification classify(const SampledGraph& g, const GridSpec& grid,
                        const ToleranceConfig& tol = {});

}  // namespace monolab
