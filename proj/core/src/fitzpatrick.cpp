#include "monolab/fitzpatrick.hpp"

#include "monolab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pairing(const DualPair& p) { return p.xstar.dot(p.x); }

}  // namespace

GridSpec::GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() % 2 != 0) {
    throw InvalidSpec("GridSpec: need 2d axes (x block then x* block)");
  }
  for (const auto& a : axes_) {
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw InvalidSpec("GridSpec: need finite lo < hi on every axis");
    }
    if (a.count < 3) throw InvalidSpec("GridSpec: need at least 3 points per axis");
    if (a.lo < 0.0 && a.hi > 0.0) {
      const double i0 = -a.lo * (a.count - 1) / (a.hi - a.lo);
      if (std::abs(i0 - std::round(i0)) > 1e-9 * (a.count - 1)) {
        throw InvalidSpec("GridSpec: axis straddles 0 but 0 is not a grid node");
      }
    }
  }
}

GridSpec GridSpec::uniform(int dim, Axis x_axis, Axis xstar_axis) {
  if (dim < 1) throw InvalidSpec("GridSpec::uniform: dim must be >= 1");
  std::vector<Axis> axes(static_cast<std::size_t>(dim), x_axis);
  axes.insert(axes.end(), static_cast<std::size_t>(dim), xstar_axis);
  return GridSpec(std::move(axes));
}

GridSpec GridSpec::symmetric(int dim, double bound, double step) {
  if (!(bound > 0.0) || !(step > 0.0)) throw InvalidSpec("GridSpec::symmetric: bound and step must be > 0");
  const double intervals = 2.0 * bound / step;
  const double rounded = std::round(intervals);
  if (std::abs(intervals - rounded) > 1e-9 * rounded) {
    throw InvalidSpec("GridSpec::symmetric: 2 * bound must be a multiple of step");
  }
  const Axis a{-bound, bound, static_cast<int>(rounded) + 1};
  return uniform(dim, a, a);
}

std::size_t GridSpec::node_count() const {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= static_cast<std::size_t>(a.count);
  return n;
}

double GridSpec::step(int k) const { return (axes_[k].hi - axes_[k].lo) / (axes_[k].count - 1); }

double GridSpec::max_step() const {
  double s = 0.0;
  for (int k = 0; k < axis_count(); ++k) s = std::max(s, step(k));
  return s;
}

double GridSpec::coord(int k, int i) const {
  const Axis& a = axes_[k];
  const double v = a.lo + ((a.hi - a.lo) * i) / (a.count - 1);
  if (std::abs(v) <= 1e-12 * (std::abs(a.lo) + std::abs(a.hi))) return 0.0;
  return v;
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
  std::vector<int> idx(axes_.size());
  for (int k = axis_count() - 1; k >= 0; --k) {
    const auto c = static_cast<std::size_t>(axes_[k].count);
    idx[k] = static_cast<int>(flat % c);
    flat /= c;
  }
  return idx;
}

std::size_t GridSpec::flatten(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < axis_count(); ++k) {
    flat = flat * static_cast<std::size_t>(axes_[k].count) + static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

DualPair GridSpec::node(std::size_t flat) const {
  const auto idx = unflatten(flat);
  const int d = dim();
  Vector x(d), xs(d);
  for (int k = 0; k < d; ++k) {
    x[k] = coord(k, idx[k]);
    xs[k] = coord(k + d, idx[k + d]);
  }
  return DualPair(std::move(x), std::move(xs));
}

bool GridSpec::contains(const DualPair& p, double tol) const {
  if (p.dim() != dim()) return false;
  const int d = dim();
  for (int k = 0; k < 2 * d; ++k) {
    const double v = k < d ? p.x[k] : p.xstar[k - d];
    const double slack = tol * (1.0 + std::abs(axes_[k].lo) + std::abs(axes_[k].hi));
    if (v < axes_[k].lo - slack || v > axes_[k].hi + slack) return false;
  }
  return true;
}

GridSpec GridSpec::refined(int factor) const {
  if (factor < 1) throw InvalidSpec("GridSpec::refined: factor must be >= 1");
  std::vector<Axis> axes = axes_;
  for (auto& a : axes) a.count = (a.count - 1) * factor + 1;
  return GridSpec(std::move(axes));
}

double fitzpatrick_eval(const SampledGraph& g, const DualPair& p) {
  if (g.empty()) throw EmptyGraph("fitzpatrick_eval: empty graph");
  if (p.dim() != g.dim) throw DimensionMismatch("fitzpatrick_eval: pair and graph dimensions differ");
  double best = -kInf;
  for (const auto& q : g.pairs) {
    best = std::max(best, q.xstar.dot(p.x) - q.xstar.dot(q.x) + p.xstar.dot(q.x));
  }
  return best;
}

ScalarField fitzpatrick_field(const SampledGraph& g, const GridSpec& grid) {
  if (g.empty()) throw EmptyGraph("fitzpatrick_field: empty graph");
  if (g.dim != grid.dim()) throw DimensionMismatch("fitzpatrick_field: graph and grid dimensions differ");
  ScalarField f{grid, std::vector<double>(grid.node_count())};
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fitzpatrick_eval(g, grid.node(i));
  return f;
}

// The pairing <x*, y> + <y*, x> is a sum of per-axis products, node axis k
// against query axis (k + d) mod 2d. Maximizing one node axis at a time turns
// the 2d-dimensional max into 2d one-dimensional max-plus transforms.
ScalarField conjugate_field(const ScalarField& f) {
  const GridSpec& grid = f.grid;
  if (f.values.size() != grid.node_count()) throw InvalidSpec("conjugate_field: value count mismatch");
  if (std::none_of(f.values.begin(), f.values.end(), [](double v) { return v < kInf; })) {
    throw AllInfinite("conjugate_field: field is +inf everywhere");
  }
  const int m = grid.axis_count();
  const int d = grid.dim();
  auto partner = [&](int k) { return (k + d) % m; };

  // Working array: position k currently indexes node axis k (before its sweep)
  // or query axis partner(k) (after).
  std::vector<int> shape(m);
  for (int k = 0; k < m; ++k) shape[k] = grid.axis(k).count;
  std::vector<double> cur(f.values.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = -f.values[i];  // +inf becomes -inf

  for (int k = 0; k < m; ++k) {
    const int q = partner(k);
    const int n_in = shape[k];
    const int n_out = grid.axis(q).count;
    std::size_t outer = 1, inner = 1;
    for (int j = 0; j < k; ++j) outer *= static_cast<std::size_t>(shape[j]);
    for (int j = k + 1; j < m; ++j) inner *= static_cast<std::size_t>(shape[j]);

    std::vector<double> u(n_in), s(n_out);
    for (int i = 0; i < n_in; ++i) u[i] = grid.coord(k, i);
    for (int i = 0; i < n_out; ++i) s[i] = grid.coord(q, i);

    std::vector<double> next(outer * static_cast<std::size_t>(n_out) * inner, -kInf);
    for (std::size_t o = 0; o < outer; ++o) {
      for (int i = 0; i < n_in; ++i) {
        const double* src = &cur[(o * n_in + i) * inner];
        for (int j = 0; j < n_out; ++j) {
          double* dst = &next[(o * n_out + j) * inner];
          const double lin = s[j] * u[i];
          for (std::size_t t = 0; t < inner; ++t) {
            if (src[t] == -kInf) continue;
            dst[t] = std::max(dst[t], src[t] + lin);
          }
        }
      }
    }
    cur = std::move(next);
    shape[k] = n_out;
  }

  // Position k now holds the query index of axis partner(k).
  ScalarField out{grid, std::vector<double>(grid.node_count())};
  std::vector<int> pos(m);
  for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    for (int k = 0; k < m; ++k) pos[k] = idx[partner(k)];
    std::size_t w = 0;
    for (int k = 0; k < m; ++k) w = w * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(pos[k]);
    out.values[flat] = cur[w];
  }
  return out;
}

FClassCheck in_f_class(const ScalarField& f, const ToleranceConfig& tol) {
  FClassCheck out;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] == kInf) continue;
    const DualPair p = f.grid.node(i);
    const double gap = f.values[i] - pairing(p);
    if (gap < out.worst_gap) {
      out.worst_gap = gap;
      out.worst_node = p;
    }
  }
  out.ok = out.worst_gap >= -tol.eps_rep;
  return out;
}

SampledGraph l_set(const ScalarField& f, const ToleranceConfig& tol) {
  SampledGraph out(f.grid.dim());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] == kInf) continue;
    DualPair p = f.grid.node(i);
    if (f.values[i] <= pairing(p) + tol.eps_rep) out.add(std::move(p));
  }
  return out;
}

namespace {

double directed_hausdorff(const SampledGraph& a, const SampledGraph& b) {
  double worst = 0.0;
  for (const auto& p : a.pairs) {
    double best = kInf;
    for (const auto& q : b.pairs) {
      const double d2 = (p.x - q.x).squaredNorm() + (p.xstar - q.xstar).squaredNorm();
      best = std::min(best, d2);
      if (best <= worst) break;  // cannot raise the running max
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const SampledGraph& a, const SampledGraph& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  if (a.dim != b.dim) throw DimensionMismatch("hausdorff_distance: dimensions differ");
  return std::sqrt(std::max(directed_hausdorff(a, b), directed_hausdorff(b, a)));
}

Classification classify(const SampledGraph& g, const GridSpec& grid, const ToleranceConfig& tol) {
  if (g.dim != grid.dim()) throw DimensionMismatch("classify: graph and grid dimensions differ");
  for (const auto& p : g.pairs) {
    if (!grid.contains(p)) throw OutOfGrid("classify: graph point outside grid bounds");
  }
  Classification c;
  c.hausdorff_limit = 2.0 * grid.max_step();
  const MonotoneCheck mono = graph_monotone_check(g, tol);
  c.is_monotone = mono.is_monotone;
  c.monotone_gap = g.size() < 2 ? 0.0 : mono.worst_gap;
  if (!c.is_monotone) return c;
  if (g.empty()) {
    // The empty operator is representable (L of the constant +inf) and not maximal.
    c.is_representable = true;
    c.hausdorff = 0.0;
    return c;
  }

  // The conjugate runs over a grid padded by half a span per side (same
  // step), then is restricted. On the bare grid the sup over a truncated dual
  // box makes its boundary rows spurious L-set points for steep operators.
  std::vector<GridSpec::Axis> padded_axes;
  std::vector<int> offset;
  for (int k = 0; k < grid.axis_count(); ++k) {
    const auto& a = grid.axis(k);
    const int m = a.count / 2;
    const double h = grid.step(k);
    padded_axes.push_back({a.lo - m * h, a.hi + m * h, a.count + 2 * m});
    offset.push_back(m);
  }
  const GridSpec padded(std::move(padded_axes));
  const ScalarField phi_star_padded = conjugate_field(fitzpatrick_field(g, padded));
  ScalarField phi = fitzpatrick_field(g, grid);
  ScalarField phi_star{grid, std::vector<double>(grid.node_count())};
  for (std::size_t i = 0; i < phi_star.values.size(); ++i) {
    auto idx = grid.unflatten(i);
    for (int k = 0; k < grid.axis_count(); ++k) idx[k] += offset[k];
    phi_star.values[i] = phi_star_padded.values[padded.flatten(idx)];
  }
  c.fitzpatrick_in_f = in_f_class(phi, tol);
  c.conjugate_in_f = in_f_class(phi_star, tol);
  const SampledGraph l = l_set(phi_star, tol);
  c.l_set_size = l.size();
  c.hausdorff = hausdorff_distance(g, l);
  c.is_representable = c.conjugate_in_f.ok && c.hausdorff <= c.hausdorff_limit;
  c.is_maximal = c.is_representable && c.fitzpatrick_in_f.ok;
  c.phi = std::move(phi);
  c.phi_star = std::move(phi_star);
  return c;
}

}  // namespace monolab
