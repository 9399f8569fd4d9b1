#include "monolab_app/scenario.hpp"

#include "monolab/convex.hpp"
#include "monolab/resolvent.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <set>

namespace monolab::app {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

std::string at(const std::string& where, const std::string& key) {
  if (where.empty()) return key;
  if (where.back() == '\'') return where + " field " + key;  // probe 'id'
  return where + "." + key;
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at(where, key), "missing");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(at(where, it.key()), "unknown field");
  }
}

double read_number(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(where, "expected a number");
}

double read_finite(const Json& j, const std::string& where) {
  const double v = read_number(j, where);
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

long read_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

std::string read_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Vector read_vector(const Json& j, const std::string& where, bool allow_inf = false) {
  if (j.is_number()) return Vector::Constant(1, read_finite(j, where));
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    v[static_cast<Eigen::Index>(i)] = allow_inf ? read_number(j[i], w) : read_finite(j[i], w);
  }
  return v;
}

Matrix read_matrix(const Json& j, const std::string& where) {
  if (j.is_number()) return Matrix::Constant(1, 1, read_finite(j, where));
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty()) fail(where + "[" + std::to_string(r) + "]", "expected a row");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail(where + "[" + std::to_string(r) + "]", "ragged matrix");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          read_finite(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

DualPair read_point(const Json& j, const std::string& where) {
  only_keys(j, {"x", "xstar"}, where);
  Vector x = read_vector(require(j, "x", where), at(where, "x"));
  Vector xs = read_vector(require(j, "xstar", where), at(where, "xstar"));
  if (x.size() != xs.size()) fail(where, "x and xstar differ in length");
  return DualPair(std::move(x), std::move(xs));
}

Json point_to_json(const DualPair& p) { return Json{{"x", vector_to_json(p.x)}, {"xstar", vector_to_json(p.xstar)}}; }

SampledGraph read_pairs(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of points");
  SampledGraph g;
  for (std::size_t i = 0; i < j.size(); ++i) {
    DualPair p = read_point(j[i], where + "[" + std::to_string(i) + "]");
    if (i == 0) g.dim = p.dim();
    if (p.dim() != g.dim) fail(where + "[" + std::to_string(i) + "]", "dimension differs from the first point");
    g.add(std::move(p));
  }
  return g;
}

Json pairs_to_json(const SampledGraph& g) {
  Json arr = Json::array();
  for (const auto& p : g.pairs) arr.push_back(point_to_json(p));
  return arr;
}

Json graph_to_json(const SampledGraph& g) { return Json{{"dim", g.dim}, {"pairs", pairs_to_json(g)}}; }

SampledGraph read_graph(const Json& j, const std::string& where) {
  only_keys(j, {"dim", "pairs"}, where);
  SampledGraph g = read_pairs(require(j, "pairs", where), at(where, "pairs"));
  const long d = read_integer(require(j, "dim", where), at(where, "dim"));
  if (d < 1) fail(at(where, "dim"), "must be >= 1");
  if (!g.empty() && g.dim != d) fail(at(where, "dim"), "does not match the pairs");
  g.dim = static_cast<int>(d);
  return g;
}

// ---------------------------------------------------------------------------
// Convex sets and functions

Json set_to_json(const ConvexSet& c) {
  return std::visit(
      overloaded{
          [](const set::Singleton& s) { return Json{{"kind", "singleton"}, {"point", vector_to_json(s.point)}}; },
          [](const set::Box& b) {
            return Json{{"kind", "box"}, {"lo", vector_to_json(b.lo)}, {"hi", vector_to_json(b.hi)}};
          },
          [](const set::Halfspace& h) {
            return Json{{"kind", "halfspace"}, {"normal", vector_to_json(h.normal)}, {"offset", number(h.offset)}};
          },
          [](const set::AffineGraph& a) { return Json{{"kind", "affine_graph"}, {"matrix", matrix_to_json(a.map)}}; },
      },
      c.variant());
}

ConvexSet set_from_json(const Json& j, const std::string& where) {
  const std::string kind = read_string(require(j, "kind", where), at(where, "kind"));
  if (kind == "singleton") {
    only_keys(j, {"kind", "point"}, where);
    return ConvexSet::singleton(read_vector(require(j, "point", where), at(where, "point")));
  }
  if (kind == "box") {
    only_keys(j, {"kind", "lo", "hi"}, where);
    return ConvexSet::box(read_vector(require(j, "lo", where), at(where, "lo"), true),
                          read_vector(require(j, "hi", where), at(where, "hi"), true));
  }
  if (kind == "halfspace") {
    only_keys(j, {"kind", "normal", "offset"}, where);
    return ConvexSet::halfspace(read_vector(require(j, "normal", where), at(where, "normal")),
                                read_finite(require(j, "offset", where), at(where, "offset")));
  }
  if (kind == "affine_graph") {
    only_keys(j, {"kind", "matrix"}, where);
    return ConvexSet::affine_graph(read_matrix(require(j, "matrix", where), at(where, "matrix")));
  }
  fail(at(where, "kind"), "unknown set kind '" + kind + "'");
}

Json function_to_json(const ConvexFn& f) {
  return std::visit(
      overloaded{
          [](const fn::AbsValueSum& a) { return Json{{"kind", "abs_value_sum"}, {"dim", a.dim}}; },
          [](const fn::Quadratic& q) {
            return Json{{"kind", "quadratic"}, {"q", matrix_to_json(q.q)}, {"b", vector_to_json(q.b)}};
          },
          [](const fn::Indicator& i) { return Json{{"kind", "indicator"}, {"set", set_to_json(i.set)}}; },
          [](const fn::ShiftedPower& s) {
            return Json{{"kind", "shifted_power"},
                        {"center", vector_to_json(s.center)},
                        {"power", s.power},
                        {"scale", number(s.scale)}};
          },
      },
      f.variant());
}

ConvexFn function_from_json(const Json& j, const std::string& where) {
  const std::string kind = read_string(require(j, "kind", where), at(where, "kind"));
  if (kind == "abs_value_sum") {
    only_keys(j, {"kind", "dim"}, where);
    return ConvexFn::abs_value_sum(static_cast<int>(read_integer(require(j, "dim", where), at(where, "dim"))));
  }
  if (kind == "quadratic") {
    only_keys(j, {"kind", "q", "b"}, where);
    Matrix q = read_matrix(require(j, "q", where), at(where, "q"));
    Vector b = j.contains("b") ? read_vector(j["b"], at(where, "b")) : Vector::Zero(q.rows());
    return ConvexFn::quadratic(std::move(q), std::move(b));
  }
  if (kind == "indicator") {
    only_keys(j, {"kind", "set"}, where);
    return ConvexFn::indicator(set_from_json(require(j, "set", where), at(where, "set")));
  }
  if (kind == "shifted_power") {
    only_keys(j, {"kind", "center", "power", "scale"}, where);
    const int power = j.contains("power") ? static_cast<int>(read_integer(j["power"], at(where, "power"))) : 2;
    const double scale = j.contains("scale") ? read_finite(j["scale"], at(where, "scale")) : 1.0;
    return ConvexFn::shifted_power(read_vector(require(j, "center", where), at(where, "center")), power, scale);
  }
  fail(at(where, "kind"), "unknown function kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

using OperatorTable = std::vector<std::pair<std::string, OperatorSpec>>;

const OperatorSpec* find_op(const OperatorTable& t, const std::string& name) {
  for (const auto& [n, s] : t) {
    if (n == name) return &s;
  }
  return nullptr;
}

OperatorSpec operator_from_json_in(const Json& j, const std::string& where, const OperatorTable* table) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    const OperatorSpec* s = table ? find_op(*table, name) : nullptr;
    if (!s) fail(where, "unknown operator '" + name + "'");
    return *s;
  }
  const std::string kind = read_string(require(j, "kind", where), at(where, "kind"));
  auto inner = [&](const char* key) {
    return operator_from_json_in(require(j, key, where), at(where, key), table);
  };
  if (kind == "ref") {
    only_keys(j, {"kind", "name"}, where);
    return operator_from_json_in(require(j, "name", where), at(where, "name"), table);
  }
  if (kind == "zero") {
    only_keys(j, {"kind", "dim"}, where);
    return OperatorSpec::zero(static_cast<int>(read_integer(require(j, "dim", where), at(where, "dim"))));
  }
  if (kind == "linear") {
    only_keys(j, {"kind", "matrix"}, where);
    return OperatorSpec::linear(read_matrix(require(j, "matrix", where), at(where, "matrix")));
  }
  if (kind == "scaled_rotation") {
    only_keys(j, {"kind", "k"}, where);
    return OperatorSpec::linear(scaled_rotation(static_cast<int>(read_integer(require(j, "k", where), at(where, "k")))));
  }
  if (kind == "subdifferential") {
    only_keys(j, {"kind", "function"}, where);
    return OperatorSpec::subdifferential(function_from_json(require(j, "function", where), at(where, "function")));
  }
  if (kind == "normal_cone") {
    only_keys(j, {"kind", "set"}, where);
    return OperatorSpec::normal_cone(set_from_json(require(j, "set", where), at(where, "set")));
  }
  if (kind == "finite_graph") {
    only_keys(j, {"kind", "graph"}, where);
    return OperatorSpec::finite_graph(read_graph(require(j, "graph", where), at(where, "graph")));
  }
  if (kind == "yosida") {
    only_keys(j, {"kind", "inner", "lambda"}, where);
    return OperatorSpec::yosida(inner("inner"), read_finite(require(j, "lambda", where), at(where, "lambda")));
  }
  if (kind == "sum") {
    only_keys(j, {"kind", "terms"}, where);
    const Json& terms = require(j, "terms", where);
    if (!terms.is_array() || terms.empty()) fail(at(where, "terms"), "expected a nonempty array");
    std::vector<OperatorSpec> ops;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      ops.push_back(operator_from_json_in(terms[i], at(where, "terms") + "[" + std::to_string(i) + "]", table));
    }
    return OperatorSpec::sum(std::move(ops));
  }
  if (kind == "adjoint_composition") {
    only_keys(j, {"kind", "matrix", "inner"}, where);
    return OperatorSpec::adjoint_composition(read_matrix(require(j, "matrix", where), at(where, "matrix")),
                                             inner("inner"));
  }
  if (kind == "product_lift") {
    only_keys(j, {"kind", "outer_dim", "inner"}, where);
    return OperatorSpec::product_lift(
        static_cast<int>(read_integer(require(j, "outer_dim", where), at(where, "outer_dim"))), inner("inner"));
  }
  if (kind == "graph_normal_cone") {
    only_keys(j, {"kind", "matrix"}, where);
    return OperatorSpec::graph_normal_cone(read_matrix(require(j, "matrix", where), at(where, "matrix")));
  }
  fail(at(where, "kind"), "unknown operator kind '" + kind + "'");
}

// Library constructors validate their arguments; surface that as a schema error at `where`.
template <class F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

// ---------------------------------------------------------------------------
// Grid

GridSpec::Axis read_axis(const Json& j, const std::string& where) {
  only_keys(j, {"lo", "hi", "count"}, where);
  return GridSpec::Axis{read_finite(require(j, "lo", where), at(where, "lo")),
                        read_finite(require(j, "hi", where), at(where, "hi")),
                        static_cast<int>(read_integer(require(j, "count", where), at(where, "count")))};
}

GridSpec read_grid(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  return guarded(where, [&] {
    if (j.contains("axes")) {
      only_keys(j, {"axes"}, where);
      const Json& axes = j["axes"];
      if (!axes.is_array()) fail(at(where, "axes"), "expected an array");
      std::vector<GridSpec::Axis> out;
      for (std::size_t i = 0; i < axes.size(); ++i) {
        out.push_back(read_axis(axes[i], at(where, "axes") + "[" + std::to_string(i) + "]"));
      }
      return GridSpec(std::move(out));
    }
    if (j.contains("bound")) {
      only_keys(j, {"dim", "bound", "step"}, where);
      return GridSpec::symmetric(static_cast<int>(read_integer(require(j, "dim", where), at(where, "dim"))),
                                 read_finite(require(j, "bound", where), at(where, "bound")),
                                 read_finite(require(j, "step", where), at(where, "step")));
    }
    only_keys(j, {"dim", "x", "xstar"}, where);
    return GridSpec::uniform(static_cast<int>(read_integer(require(j, "dim", where), at(where, "dim"))),
                             read_axis(require(j, "x", where), at(where, "x")),
                             read_axis(require(j, "xstar", where), at(where, "xstar")));
  });
}

Json grid_to_json(const GridSpec& g) {
  Json axes = Json::array();
  for (const auto& a : g.axes()) axes.push_back(Json{{"lo", number(a.lo)}, {"hi", number(a.hi)}, {"count", a.count}});
  return Json{{"axes", axes}};
}

// ---------------------------------------------------------------------------
// Tolerances

ToleranceConfig read_tolerances(const Json& j, const std::string& where) {
  only_keys(j, {"eps_res", "eps_gap", "eps_member", "eps_rep", "slice_radius"}, where);
  ToleranceConfig t;
  auto get = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = read_finite(j[key], at(where, key));
  };
  get("eps_res", t.eps_res);
  get("eps_gap", t.eps_gap);
  get("eps_member", t.eps_member);
  get("eps_rep", t.eps_rep);
  get("slice_radius", t.slice_radius);
  guarded(where, [&] {
    t.validate();
    return 0;
  });
  return t;
}

Json tolerances_to_json(const ToleranceConfig& t) {
  return Json{{"eps_res", number(t.eps_res)},
              {"eps_gap", number(t.eps_gap)},
              {"eps_member", number(t.eps_member)},
              {"eps_rep", number(t.eps_rep)},
              {"slice_radius", number(t.slice_radius)}};
}

// ---------------------------------------------------------------------------
// Sequences

const char* sequence_kind_name(SequenceDesc::Kind k) {
  switch (k) {
    case SequenceDesc::Kind::Constant: return "constant";
    case SequenceDesc::Kind::Periodic: return "periodic";
    case SequenceDesc::Kind::RegularizedSum: return "regularized_sum";
    case SequenceDesc::Kind::Yosida: return "yosida";
    case SequenceDesc::Kind::ShiftedPower: return "shifted_power";
  }
  return "?";
}

std::string read_op_name(const Json& j, const std::string& where, const OperatorTable& table) {
  const std::string name = read_string(j, where);
  if (!find_op(table, name)) fail(where, "unknown operator '" + name + "'");
  return name;
}

SequenceDesc read_sequence(const Json& j, const std::string& where, const OperatorTable& table) {
  SequenceDesc s;
  const std::string kind = read_string(require(j, "kind", where), at(where, "kind"));
  auto name_of = [&](const char* key) { return read_op_name(require(j, key, where), at(where, key), table); };
  if (kind == "constant") {
    only_keys(j, {"kind", "operator"}, where);
    s.kind = SequenceDesc::Kind::Constant;
    s.operators = {name_of("operator")};
  } else if (kind == "periodic") {
    only_keys(j, {"kind", "operators"}, where);
    s.kind = SequenceDesc::Kind::Periodic;
    const Json& ops = require(j, "operators", where);
    if (!ops.is_array() || ops.empty()) fail(at(where, "operators"), "expected a nonempty array");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      s.operators.push_back(read_op_name(ops[i], at(where, "operators") + "[" + std::to_string(i) + "]", table));
    }
  } else if (kind == "regularized_sum") {
    only_keys(j, {"kind", "t1", "t2", "lambda", "mu"}, where);
    s.kind = SequenceDesc::Kind::RegularizedSum;
    s.operators = {name_of("t1"), name_of("t2")};
    s.lambda = param_from_json(require(j, "lambda", where), at(where, "lambda"));
    s.mu = param_from_json(require(j, "mu", where), at(where, "mu"));
  } else if (kind == "yosida") {
    only_keys(j, {"kind", "operator", "lambda"}, where);
    s.kind = SequenceDesc::Kind::Yosida;
    s.operators = {name_of("operator")};
    s.lambda = param_from_json(require(j, "lambda", where), at(where, "lambda"));
    if (s.lambda.kind == ParamDesc::Kind::Zero) fail(at(where, "lambda"), "must be positive");
  } else if (kind == "shifted_power") {
    only_keys(j, {"kind", "direction", "shift", "scale"}, where);
    s.kind = SequenceDesc::Kind::ShiftedPower;
    s.direction = read_vector(require(j, "direction", where), at(where, "direction"));
    s.lambda = param_from_json(require(j, "shift", where), at(where, "shift"));
    s.scale = j.contains("scale") ? read_finite(j["scale"], at(where, "scale")) : 1.0;
    if (!(s.scale > 0.0)) fail(at(where, "scale"), "must be > 0");
  } else {
    fail(at(where, "kind"), "unknown sequence kind '" + kind + "'");
  }
  return s;
}

Json sequence_to_json(const SequenceDesc& s) {
  Json j{{"kind", sequence_kind_name(s.kind)}};
  switch (s.kind) {
    case SequenceDesc::Kind::Constant: j["operator"] = s.operators.at(0); break;
    case SequenceDesc::Kind::Periodic: j["operators"] = s.operators; break;
    case SequenceDesc::Kind::RegularizedSum:
      j["t1"] = s.operators.at(0);
      j["t2"] = s.operators.at(1);
      j["lambda"] = param_to_json(s.lambda);
      j["mu"] = param_to_json(s.mu);
      break;
    case SequenceDesc::Kind::Yosida:
      j["operator"] = s.operators.at(0);
      j["lambda"] = param_to_json(s.lambda);
      break;
    case SequenceDesc::Kind::ShiftedPower:
      j["direction"] = vector_to_json(s.direction);
      j["shift"] = param_to_json(s.lambda);
      j["scale"] = number(s.scale);
      break;
  }
  return j;
}

ParamSequencePair make_pair(const ParamDesc& l, const ParamDesc& m, std::string name) {
  using Tag = ParamSequencePair::Tag;
  const Tag tag = m.kind == ParamDesc::Kind::Zero ? Tag::Left : (l == m ? Tag::Symmetric : Tag::Custom);
  if (name.empty()) name = "(" + param_name(l) + ", " + param_name(m) + ")";
  return ParamSequencePair{l.build(), m.build(), tag, std::move(name)};
}

// ---------------------------------------------------------------------------
// Probes

ProbeKind probe_kind_from(const std::string& s, const std::string& where) {
  static const std::pair<const char*, ProbeKind> kinds[] = {
      {"classify", ProbeKind::Classify}, {"liminf", ProbeKind::Liminf},
      {"limsup", ProbeKind::Limsup},     {"varsum", ProbeKind::Varsum},
      {"left_varsum", ProbeKind::LeftVarsum}, {"varcomp", ProbeKind::Varcomp},
      {"prop4", ProbeKind::Prop4},       {"lemma1", ProbeKind::Lemma1},
  };
  for (const auto& [n, k] : kinds) {
    if (s == n) return k;
  }
  fail(where, "unknown probe kind '" + s + "'");
}

GraphSource read_graph_source(const Json& j, const std::string& where) {
  GraphSource g;
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("liminf")) {
    only_keys(j, {"liminf"}, where);
    g.kind = GraphSource::Kind::Liminf;
    g.ref = read_string(j["liminf"], at(where, "liminf"));
  } else if (j.contains("operator")) {
    only_keys(j, {"operator"}, where);
    g.kind = GraphSource::Kind::Operator;
    g.ref = read_string(j["operator"], at(where, "operator"));
  } else {
    g.kind = GraphSource::Kind::Pairs;
    g.pairs = read_graph(j, where);
  }
  return g;
}

Json graph_source_to_json(const GraphSource& g) {
  switch (g.kind) {
    case GraphSource::Kind::Liminf: return Json{{"liminf", g.ref}};
    case GraphSource::Kind::Operator: return Json{{"operator", g.ref}};
    case GraphSource::Kind::Pairs: break;
  }
  return graph_to_json(g.pairs);
}

ProbeDesc read_probe(const Json& j, const std::string& where) {
  ProbeDesc p;
  if (!j.is_object()) fail(where, "expected an object");
  p.id = read_string(require(j, "id", where), at(where, "id"));
  if (p.id.empty()) fail(at(where, "id"), "must be nonempty");
  const std::string w = "probe '" + p.id + "'";
  p.kind = probe_kind_from(read_string(require(j, "kind", w), at(w, "kind")), at(w, "kind"));
  auto str = [&](const char* key) { return read_string(require(j, key, w), at(w, key)); };
  auto point = [&] { p.point = read_point(require(j, "point", w), at(w, "point")); };
  auto lambdas = [&] {
    if (!j.contains("lambdas")) return;
    const Json& ls = j["lambdas"];
    if (!ls.is_array() || ls.empty()) fail(at(w, "lambdas"), "expected a nonempty array");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      p.lambdas.push_back(param_from_json(ls[i], at(w, "lambdas") + "[" + std::to_string(i) + "]"));
    }
  };
  switch (p.kind) {
    case ProbeKind::Classify:
      only_keys(j, {"id", "kind", "graph"}, w);
      p.graph = read_graph_source(require(j, "graph", w), at(w, "graph"));
      break;
    case ProbeKind::Liminf:
    case ProbeKind::Limsup:
      only_keys(j, {"id", "kind", "sequence", "point"}, w);
      p.sequence = str("sequence");
      point();
      break;
    case ProbeKind::Lemma1:
      only_keys(j, {"id", "kind", "sequence", "point", "graph"}, w);
      p.sequence = str("sequence");
      point();
      if (j.contains("graph")) p.graph = read_graph_source(j["graph"], at(w, "graph"));
      break;
    case ProbeKind::Varsum:
      only_keys(j, {"id", "kind", "t1", "t2", "point"}, w);
      p.t1 = str("t1");
      p.t2 = str("t2");
      point();
      break;
    case ProbeKind::LeftVarsum:
      only_keys(j, {"id", "kind", "t1", "t2", "point", "lambdas"}, w);
      p.t1 = str("t1");
      p.t2 = str("t2");
      point();
      lambdas();
      break;
    case ProbeKind::Varcomp:
    case ProbeKind::Prop4:
      only_keys(j, {"id", "kind", "operator", "matrix", "point", "lambdas"}, w);
      p.op = str("operator");
      p.matrix = read_matrix(require(j, "matrix", w), at(w, "matrix"));
      point();
      lambdas();
      break;
  }
  return p;
}

Json probe_to_json(const ProbeDesc& p) {
  Json j{{"id", p.id}, {"kind", to_string(p.kind)}};
  if (!p.sequence.empty()) j["sequence"] = p.sequence;
  if (!p.t1.empty()) j["t1"] = p.t1;
  if (!p.t2.empty()) j["t2"] = p.t2;
  if (!p.op.empty()) j["operator"] = p.op;
  if (p.matrix) j["matrix"] = matrix_to_json(*p.matrix);
  if (p.point) j["point"] = point_to_json(*p.point);
  if (p.graph) j["graph"] = graph_source_to_json(*p.graph);
  if (!p.lambdas.empty()) {
    Json ls = Json::array();
    for (const auto& l : p.lambdas) ls.push_back(param_to_json(l));
    j["lambdas"] = ls;
  }
  return j;
}

int sequence_dim(const Scenario& s, const SequenceDesc& d) {
  if (d.kind == SequenceDesc::Kind::ShiftedPower) return static_cast<int>(d.direction.size());
  return s.op(d.operators.front()).dim();
}

// Cross-reference and dimension checks once every table is read.
void check_probe(const Scenario& s, const ProbeDesc& p) {
  const std::string w = "probe '" + p.id + "'";
  auto op_named = [&](const std::string& name, const char* field) -> const OperatorSpec& {
    if (!find_op(s.operators, name)) fail(at(w, field), "unknown operator '" + name + "'");
    return s.op(name);
  };
  auto seq_dim = [&](const std::string& name, const std::string& field) {
    for (const auto& [n, d] : s.sequences) {
      if (n == name) return sequence_dim(s, d);
    }
    fail(at(w, field), "unknown sequence '" + name + "'");
  };
  auto point_dim = [&](int d) {
    if (p.point && p.point->dim() != d) {
      fail(at(w, "point"), "dimension " + std::to_string(p.point->dim()) + ", expected " + std::to_string(d));
    }
  };
  auto graph_dim = [&](const GraphSource& g, const std::string& field) {
    switch (g.kind) {
      case GraphSource::Kind::Pairs: return g.pairs.dim;
      case GraphSource::Kind::Liminf: return seq_dim(g.ref, field + ".liminf");
      case GraphSource::Kind::Operator: {
        const OperatorSpec& t = op_named(g.ref, "graph.operator");
        if (!is_single_valued(t)) fail(at(w, field + ".operator"), "operator must be single-valued to sample");
        return t.dim();
      }
    }
    return 0;
  };
  auto need_grid = [&](int d, const std::string& field) {
    if (!s.grid) fail(at(w, field), "needs the scenario grid");
    if (s.grid->dim() != d) fail("grid", "dimension differs from " + at(w, field));
  };
  switch (p.kind) {
    case ProbeKind::Classify: {
      const int d = graph_dim(*p.graph, "graph");
      need_grid(d, "graph");
      if (p.graph->kind == GraphSource::Kind::Pairs) {
        for (const auto& q : p.graph->pairs.pairs) {
          if (!s.grid->contains(q)) fail(at(w, "graph"), "point outside the grid");
        }
      }
      break;
    }
    case ProbeKind::Liminf:
    case ProbeKind::Limsup:
      point_dim(seq_dim(p.sequence, "sequence"));
      break;
    case ProbeKind::Lemma1: {
      const int d = seq_dim(p.sequence, "sequence");
      point_dim(d);
      if (p.graph) {
        if (graph_dim(*p.graph, "graph") != d) fail(at(w, "graph"), "dimension differs from the sequence");
        if (p.graph->kind != GraphSource::Kind::Pairs) need_grid(d, "graph");
      } else {
        need_grid(d, "sequence");
      }
      break;
    }
    case ProbeKind::Varsum:
    case ProbeKind::LeftVarsum: {
      const int d = op_named(p.t1, "t1").dim();
      if (op_named(p.t2, "t2").dim() != d) fail(at(w, "t2"), "dimension differs from t1");
      point_dim(d);
      if (p.kind == ProbeKind::LeftVarsum && !is_resolvable(s.op(p.t2))) {
        fail(at(w, "t2"), "needs a resolvent");
      }
      break;
    }
    case ProbeKind::Varcomp:
    case ProbeKind::Prop4: {
      const OperatorSpec& t = op_named(p.op, "operator");
      if (p.matrix->rows() != t.dim()) fail(at(w, "matrix"), "row count differs from the operator dimension");
      point_dim(static_cast<int>(p.matrix->cols()));
      break;
    }
  }
  if (p.kind == ProbeKind::Varsum) {
    for (const auto& m : s.family) {
      if (m.mu.kind == ParamDesc::Kind::Zero) fail("probe_family", "mu = 0 is reserved for left sums");
    }
  }
  for (const auto& l : p.lambdas) {
    if (l.kind == ParamDesc::Kind::Zero) fail(at(w, "lambdas"), "lambda must be positive");
  }
}

void validate(const Scenario& s) {
  if (s.horizon < 1) fail("horizon", "must be >= 1");
  guarded("tolerances", [&] {
    s.tolerances.validate();
    return 0;
  });
  for (const auto& [name, d] : s.sequences) {
    const std::string w = "sequences." + name;
    const int dim = sequence_dim(s, d);
    for (const auto& o : d.operators) {
      if (s.op(o).dim() != dim) fail(w, "operators differ in dimension");
    }
    if (d.kind == SequenceDesc::Kind::RegularizedSum) {
      guarded(w, [&] {
        make_pair(d.lambda, d.mu, "").validate(s.horizon);
        return 0;
      });
      if (d.mu.kind == ParamDesc::Kind::Zero && !is_resolvable(s.op(d.operators[1]))) {
        fail(at(w, "t2"), "needs a resolvent when mu = 0");
      }
    }
  }
  for (const auto& m : s.family) {
    guarded("probe_family." + m.name, [&] {
      make_pair(m.lambda, m.mu, m.name).validate(s.horizon);
      return 0;
    });
  }
  std::set<std::string> ids;
  for (const auto& p : s.probes) {
    if (!ids.insert(p.id).second) fail("probes", "duplicate probe id '" + p.id + "'");
    check_probe(s, p);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
  return arr;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

const char* to_string(ProbeKind k) {
  switch (k) {
    case ProbeKind::Classify: return "classify";
    case ProbeKind::Liminf: return "liminf";
    case ProbeKind::Limsup: return "limsup";
    case ProbeKind::Varsum: return "varsum";
    case ProbeKind::LeftVarsum: return "left_varsum";
    case ProbeKind::Varcomp: return "varcomp";
    case ProbeKind::Prop4: return "prop4";
    case ProbeKind::Lemma1: return "lemma1";
  }
  return "?";
}

ParamSequence ParamDesc::build() const {
  switch (kind) {
    case Kind::Power: return ParamSequence::power(scale, exponent);
    case Kind::Dyadic: return ParamSequence::dyadic(floor_exponent);
    case Kind::Zero: return ParamSequence::zero();
  }
  return ParamSequence::zero();
}

std::string param_name(const ParamDesc& p) { return p.build().name; }

Json param_to_json(const ParamDesc& p) {
  switch (p.kind) {
    case ParamDesc::Kind::Power:
      return Json{{"kind", "power"}, {"scale", number(p.scale)}, {"exponent", number(p.exponent)}};
    case ParamDesc::Kind::Dyadic: return Json{{"kind", "dyadic"}, {"floor", p.floor_exponent}};
    case ParamDesc::Kind::Zero: return Json{{"kind", "zero"}};
  }
  return Json();
}

ParamDesc param_from_json(const Json& j, const std::string& where) {
  ParamDesc p;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    static const std::regex power(R"(^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*/\s*n\s*(?:\^\s*([0-9]*\.?[0-9]+))?\s*$)");
    std::smatch m;
    if (s == "0") {
      p.kind = ParamDesc::Kind::Zero;
    } else if (s == "2^-n") {
      p.kind = ParamDesc::Kind::Dyadic;
    } else if (std::regex_match(s, m, power)) {
      p.scale = std::stod(m[1].str());
      p.exponent = m[2].matched ? std::stod(m[2].str()) : 1.0;
    } else {
      fail(where, "unrecognized parameter sequence '" + s + "' (try \"1/n\", \"1/n^2\", \"2^-n\", \"0\")");
    }
  } else {
    const std::string kind = read_string(require(j, "kind", where), at(where, "kind"));
    if (kind == "power") {
      only_keys(j, {"kind", "scale", "exponent"}, where);
      p.scale = j.contains("scale") ? read_finite(j["scale"], at(where, "scale")) : 1.0;
      p.exponent = j.contains("exponent") ? read_finite(j["exponent"], at(where, "exponent")) : 1.0;
    } else if (kind == "dyadic") {
      only_keys(j, {"kind", "floor"}, where);
      p.kind = ParamDesc::Kind::Dyadic;
      if (j.contains("floor")) p.floor_exponent = static_cast<int>(read_integer(j["floor"], at(where, "floor")));
    } else if (kind == "zero") {
      only_keys(j, {"kind"}, where);
      p.kind = ParamDesc::Kind::Zero;
    } else {
      fail(at(where, "kind"), "unknown parameter sequence kind '" + kind + "'");
    }
  }
  guarded(where, [&] { return p.build(); });
  return p;
}

Json operator_to_json(const OperatorSpec& spec) {
  return std::visit(
      overloaded{
          [&](const op::Zero& z) { return Json{{"kind", "zero"}, {"dim", z.dim}}; },
          [](const op::Linear& l) { return Json{{"kind", "linear"}, {"matrix", matrix_to_json(l.m)}}; },
          [](const op::Subdifferential& s) {
            return Json{{"kind", "subdifferential"}, {"function", function_to_json(s.f)}};
          },
          [](const op::NormalCone& n) { return Json{{"kind", "normal_cone"}, {"set", set_to_json(n.set)}}; },
          [](const op::FiniteGraph& g) { return Json{{"kind", "finite_graph"}, {"graph", graph_to_json(g.graph)}}; },
          [](const op::Yosida& y) {
            return Json{{"kind", "yosida"}, {"inner", operator_to_json(y.inner)}, {"lambda", number(y.lambda)}};
          },
          [](const op::SumOf& s) {
            Json terms = Json::array();
            for (const auto& t : s.terms) terms.push_back(operator_to_json(t));
            return Json{{"kind", "sum"}, {"terms", terms}};
          },
          [](const op::AdjointComposition& c) {
            return Json{{"kind", "adjoint_composition"},
                        {"matrix", matrix_to_json(c.a)},
                        {"inner", operator_to_json(c.inner)}};
          },
          [](const op::ProductLift& p) {
            return Json{{"kind", "product_lift"}, {"outer_dim", p.outer_dim}, {"inner", operator_to_json(p.inner)}};
          },
          [](const op::GraphNormalCone& g) {
            return Json{{"kind", "graph_normal_cone"}, {"matrix", matrix_to_json(g.a)}};
          },
      },
      spec.variant());
}

OperatorSpec operator_from_json(const Json& j, const std::string& where) {
  return guarded(where, [&] { return operator_from_json_in(j, where, nullptr); });
}

const OperatorSpec& Scenario::op(const std::string& name) const {
  const OperatorSpec* s = find_op(operators, name);
  if (!s) throw SchemaError("unknown operator '" + name + "'");
  return *s;
}

const SequenceDesc& Scenario::seq(const std::string& name) const {
  for (const auto& [n, d] : sequences) {
    if (n == name) return d;
  }
  throw SchemaError("unknown sequence '" + name + "'");
}

OperatorSequence Scenario::build_sequence(const std::string& name) const {
  const SequenceDesc& d = seq(name);
  switch (d.kind) {
    case SequenceDesc::Kind::Constant: {
      OperatorSequence s = OperatorSequence::constant(op(d.operators[0]));
      s.description = name;
      return s;
    }
    case SequenceDesc::Kind::Periodic: {
      std::vector<OperatorSpec> ops;
      for (const auto& o : d.operators) ops.push_back(op(o));
      return OperatorSequence::periodic(std::move(ops), name);
    }
    case SequenceDesc::Kind::RegularizedSum: {
      OperatorSequence s = regularized_sum_sequence(op(d.operators[0]), op(d.operators[1]),
                                                    make_pair(d.lambda, d.mu, ""));
      s.description = name;
      return s;
    }
    case SequenceDesc::Kind::Yosida: {
      const OperatorSpec t = op(d.operators[0]);
      const ParamSequence l = d.lambda.build();
      return OperatorSequence{[t, l](long n) { return OperatorSpec::yosida(t, l(n)); }, name};
    }
    case SequenceDesc::Kind::ShiftedPower: {
      const Vector dir = d.direction;
      const ParamSequence p = d.lambda.build();
      const double scale = d.scale;
      return OperatorSequence{
          [dir, p, scale](long n) {
            return OperatorSpec::subdifferential(ConvexFn::shifted_power(p(n) * dir, 2, scale));
          },
          name};
    }
  }
  throw SchemaError("unknown sequence kind");
}

ProbeFamily Scenario::build_family() const {
  if (family.empty()) return ProbeFamily::default_family();
  ProbeFamily f;
  for (const auto& m : family) f.sequences.push_back(make_pair(m.lambda, m.mu, m.name));
  return f;
}

Scenario parse_scenario(const Json& doc) {
  only_keys(doc, {"name", "horizon", "tolerances", "grid", "operators", "sequences", "probe_family", "probes"},
            "scenario");
  Scenario s;
  if (doc.contains("name")) s.name = read_string(doc["name"], "name");
  if (doc.contains("horizon")) s.horizon = read_integer(doc["horizon"], "horizon");
  if (doc.contains("tolerances")) s.tolerances = read_tolerances(doc["tolerances"], "tolerances");
  if (doc.contains("grid")) s.grid = read_grid(doc["grid"], "grid");

  if (doc.contains("operators")) {
    const Json& ops = doc["operators"];
    if (!ops.is_object()) fail("operators", "expected an object of named operators");
    for (auto it = ops.begin(); it != ops.end(); ++it) {
      const std::string w = "operators." + it.key();
      if (find_op(s.operators, it.key())) fail(w, "duplicate name");
      OperatorSpec spec = guarded(w, [&] { return operator_from_json_in(it.value(), w, &s.operators); });
      s.operators.emplace_back(it.key(), std::move(spec));
    }
  }
  if (doc.contains("sequences")) {
    const Json& seqs = doc["sequences"];
    if (!seqs.is_object()) fail("sequences", "expected an object of named sequences");
    for (auto it = seqs.begin(); it != seqs.end(); ++it) {
      s.sequences.emplace_back(it.key(), read_sequence(it.value(), "sequences." + it.key(), s.operators));
    }
  }
  if (doc.contains("probe_family")) {
    const Json& fam = doc["probe_family"];
    if (fam.is_string() && fam.get<std::string>() == "default") {
      // default family
    } else if (fam.is_array() && !fam.empty()) {
      for (std::size_t i = 0; i < fam.size(); ++i) {
        const std::string w = "probe_family[" + std::to_string(i) + "]";
        only_keys(fam[i], {"lambda", "mu", "name"}, w);
        FamilyMember m{param_from_json(require(fam[i], "lambda", w), at(w, "lambda")),
                       param_from_json(require(fam[i], "mu", w), at(w, "mu")),
                       fam[i].contains("name") ? read_string(fam[i]["name"], at(w, "name")) : ""};
        if (m.name.empty()) m.name = "(" + param_name(m.lambda) + ", " + param_name(m.mu) + ")";
        s.family.push_back(std::move(m));
      }
    } else {
      fail("probe_family", "expected \"default\" or a nonempty array");
    }
  }
  const Json& probes = require(doc, "probes", "scenario");
  if (!probes.is_array()) fail("probes", "expected an array");
  for (std::size_t i = 0; i < probes.size(); ++i) {
    s.probes.push_back(read_probe(probes[i], "probes[" + std::to_string(i) + "]"));
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot read file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": invalid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

Json to_json(const Scenario& s) {
  Json doc;
  doc["name"] = s.name;
  doc["horizon"] = s.horizon;
  doc["tolerances"] = tolerances_to_json(s.tolerances);
  if (s.grid) doc["grid"] = grid_to_json(*s.grid);
  Json ops = Json::object();
  for (const auto& [n, spec] : s.operators) ops[n] = operator_to_json(spec);
  doc["operators"] = ops;
  Json seqs = Json::object();
  for (const auto& [n, d] : s.sequences) seqs[n] = sequence_to_json(d);
  doc["sequences"] = seqs;
  if (s.family.empty()) {
    doc["probe_family"] = "default";
  } else {
    Json fam = Json::array();
    for (const auto& m : s.family) {
      fam.push_back(Json{{"lambda", param_to_json(m.lambda)}, {"mu", param_to_json(m.mu)}, {"name", m.name}});
    }
    doc["probe_family"] = fam;
  }
  Json probes = Json::array();
  for (const auto& p : s.probes) probes.push_back(probe_to_json(p));
  doc["probes"] = probes;
  return doc;
}

void validate_scenario(const Scenario& s) { validate(s); }

}  // namespace monolab::app
