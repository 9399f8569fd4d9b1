#include "monolab/types.hpp"

#include <string>

namespace monolab {

DualPair::DualPair(Vector x_, Vector xstar_) : x(std::move(x_)), xstar(std::move(xstar_)) {
  if (x.size() != xstar.size()) {
    throw DimensionMismatch("DualPair: x has dimension " + std::to_string(x.size()) +
                            " but x* has dimension " + std::to_string(xstar.size()));
  }
}

SampledGraph::SampledGraph(int d, std::vector<DualPair> p) : dim(d), pairs(std::move(p)) {
  for (const auto& q : pairs) {
    if (q.dim() != dim) throw DimensionMismatch("SampledGraph: pair dimension differs from graph");
  }
}

void SampledGraph::add(DualPair p) {
  if (p.dim() != dim) throw DimensionMismatch("SampledGraph::add: pair dimension differs from graph");
  pairs.push_back(std::move(p));
}

void ToleranceConfig::validate() const {
  if (!(eps_res > 0 && eps_gap > 0 && eps_member > 0 && eps_rep > 0 && slice_radius > 0)) {
    throw InvalidSpec("tolerances must be strictly positive");
  }
}

void require_dim(const Vector& v, int dim, const char* what) {
  if (v.size() != dim) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim) +
                            ", got " + std::to_string(v.size()));
  }
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace monolab
