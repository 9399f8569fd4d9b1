#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace monolab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point (x, x*) of X x X*. Both blocks live in R^d.
struct DualPair {
  Vector x;
  Vector xstar;

  DualPair() = default;
  DualPair(Vector x_, Vector xstar_);

  int dim() const { return static_cast<int>(x.size()); }
};

/// Finite sample of an operator graph. An empty pair list is the empty operator.
struct SampledGraph {
  int dim = 1;
  std::vector<DualPair> pairs;

  SampledGraph() = default;
  explicit SampledGraph(int d) : dim(d) {}
  SampledGraph(int d, std::vector<DualPair> p);

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  void add(DualPair p);
};

struct ToleranceConfig {
  double eps_res = 1e-10;     // solver residual
  double eps_gap = 1e-9;      // monotone-gap slack
  double eps_member = 1e-4;   // limit-membership distance
  double eps_rep = 1e-6;      // L-set slack
  double slice_radius = 5.0;  // bound on ||x*|| for closedness slices

  void validate() const;
};

/// Outcome of a single resolvent evaluation.
struct SolveReport {
  Vector solution;
  double residual = 0.0;
  long iterations = 0;
  bool converged = true;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid construction arguments (non-monotone matrix, lambda <= 0, bad grid, ...).
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class NotResolvable : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, SolveReport best)
      : Error(what), best_(std::move(best)) {}
  const SolveReport& best() const { return best_; }

 private:
  SolveReport best_;
};

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class AllInfinite : public Error {
 public:
  using Error::Error;
};

class OutOfGrid : public Error {
 public:
  using Error::Error;
};

class NoClusterPoint : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

void require_dim(const Vector& v, int dim, const char* what);
bool all_finite(const Vector& v);

}  // namespace monolab
