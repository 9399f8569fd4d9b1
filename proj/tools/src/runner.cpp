#include "monolab_app/runner.hpp"

#include "monolab/operators.hpp"
#include "monolab/resolvent.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#ifndef MONOLAB_VERSION
#define MONOLAB_VERSION "0.0.0"
#endif

namespace monolab::app {

namespace {

// Larger sampled graphs are reported by size only.
constexpr std::size_t kMaxInlinePairs = 256;

Json point_json(const DualPair& p) { return Json{{"x", vector_to_json(p.x)}, {"xstar", vector_to_json(p.xstar)}}; }

Json graph_json(const SampledGraph& g) {
  Json j{{"size", g.size()}};
  if (g.size() <= kMaxInlinePairs) {
    Json pairs = Json::array();
    for (const auto& p : g.pairs) pairs.push_back(point_json(p));
    j["pairs"] = pairs;
  }
  return j;
}

Json verdict_json(const MembershipVerdict& v, const ToleranceConfig& tol, ProbeKind kind) {
  Json j{{"status", to_string(v.status)}};
  if (!v.certifying_sequence.empty()) j["sequence"] = v.certifying_sequence;
  j["tail_max"] = number(v.tail_max);
  j["witness_min"] = number(v.witness_min);
  // Positive margins mean the verdict survives that much tolerance change.
  Json margins = Json::object();
  if (kind == ProbeKind::Liminf) margins["member"] = number(tol.eps_member - v.tail_max);
  margins["non_member"] = number(v.witness_min - 10.0 * tol.eps_member);
  j["margins"] = margins;
  if (!v.evidence.rows.empty()) {
    const auto& last = v.evidence.rows.back();
    j["last"] = Json{{"n", last.n}, {"x_n", vector_to_json(last.x_n)}, {"dist", number(last.dist)}};
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json check_json(const FClassCheck& c) {
  Json j{{"ok", c.ok}, {"worst_gap", number(c.worst_gap)}};
  if (c.worst_node.x.size() > 0) j["worst_node"] = point_json(c.worst_node);
  return j;
}

Json classification_json(const Classification& c) {
  Json j{{"monotone", c.is_monotone},
         {"representable", c.is_representable},
         {"maximal", c.is_maximal},
         {"monotone_gap", number(c.monotone_gap)}};
  if (c.phi) {
    j["fitzpatrick_in_f"] = check_json(c.fitzpatrick_in_f);
    j["conjugate_in_f"] = check_json(c.conjugate_in_f);
  }
  j["hausdorff"] = number(c.hausdorff);
  j["hausdorff_limit"] = number(c.hausdorff_limit);
  j["l_set_size"] = c.l_set_size;
  // In finite dimension L(phi*) is identified with the smallest representable
  // extension T00; the identification is quoted, not re-derived here.
  j["l_set_label"] = "T00";
  return j;
}

struct Collector {
  ProbeOutcome& out;
  const std::string& id;
  Json traces = Json::array();
  Json fields = Json::array();

  void trace(const std::string& suffix, const std::string& seq, ConvergenceTrace t) {
    const std::string name = suffix.empty() ? id : id + "." + suffix;
    traces.push_back(Json{{"id", name}, {"sequence", seq}, {"rows", t.rows.size()}});
    out.traces.emplace_back(name, std::move(t));
  }
  void field(const std::string& suffix, ScalarField f) {
    const std::string name = id + "." + suffix;
    fields.push_back(Json{{"id", name}, {"nodes", f.values.size()}});
    out.fields.emplace_back(name, std::move(f));
  }
};

Json family_json(const FamilyVerdict& f, const ToleranceConfig& tol, Collector& c, const std::string& prefix) {
  Json per = Json::array();
  for (std::size_t k = 0; k < f.per_sequence.size(); ++k) {
    const auto& v = f.per_sequence[k];
    per.push_back(verdict_json(v, tol, ProbeKind::Liminf));
    c.trace(prefix + std::to_string(k), v.certifying_sequence, v.evidence);
  }
  Json agg{{"status", to_string(f.aggregate.status)}, {"note", f.aggregate.note}};
  if (f.aggregate.status == MembershipStatus::NonMember) agg["certified_by"] = f.aggregate.certifying_sequence;
  return Json{{"aggregate", agg}, {"per_sequence", per}};
}

std::vector<ParamSequence> lambdas_of(const ProbeDesc& p) {
  if (p.lambdas.empty()) return default_lambda_sequences();
  std::vector<ParamSequence> out;
  for (const auto& l : p.lambdas) out.push_back(l.build());
  return out;
}

// Grid x-nodes paired with T x, kept when T x lies inside the grid.
SampledGraph sample_operator(const OperatorSpec& t, const GridSpec& grid) {
  const int d = grid.dim();
  SampledGraph g(d);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Vector x(d);
    for (int k = 0; k < d; ++k) x[k] = grid.coord(k, idx[static_cast<std::size_t>(k)]);
    DualPair p(x, single_valued_apply(t, x));
    if (grid.contains(p)) g.add(std::move(p));
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == grid.axis(k).count) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return g;
}

ProbeSchedule tail_schedule() {
  ProbeSchedule s;
  s.tail_only = true;
  return s;
}

SampledGraph resolve_graph(const Scenario& s, const GraphSource& g) {
  switch (g.kind) {
    case GraphSource::Kind::Pairs: return g.pairs;
    case GraphSource::Kind::Liminf:
      return sample_liminf(s.build_sequence(g.ref), *s.grid, s.horizon, s.tolerances, tail_schedule());
    case GraphSource::Kind::Operator: return sample_operator(s.op(g.ref), *s.grid);
  }
  return {};
}

Json run_kind(const Scenario& s, const ProbeDesc& p, Collector& c) {
  const ToleranceConfig& tol = s.tolerances;
  const long n = s.horizon;
  switch (p.kind) {
    case ProbeKind::Classify: {
      const SampledGraph g = resolve_graph(s, *p.graph);
      Classification cl = classify(g, *s.grid, tol);
      Json j{{"graph", graph_json(g)}, {"classification", classification_json(cl)}};
      if (cl.phi) c.field("phi", std::move(*cl.phi));
      if (cl.phi_star) c.field("phi_star", std::move(*cl.phi_star));
      return j;
    }
    case ProbeKind::Liminf:
    case ProbeKind::Limsup: {
      const OperatorSequence seq = s.build_sequence(p.sequence);
      MembershipVerdict v = p.kind == ProbeKind::Liminf ? liminf_member(seq, *p.point, n, tol)
                                                        : limsup_member(seq, *p.point, n, tol);
      Json j{{"verdict", verdict_json(v, tol, p.kind)}};
      c.trace("", p.sequence, std::move(v.evidence));
      return j;
    }
    case ProbeKind::Varsum: {
      const FamilyVerdict f = varsum_member(s.op(p.t1), s.op(p.t2), *p.point, s.build_family(), n, tol);
      return family_json(f, tol, c, "");
    }
    case ProbeKind::LeftVarsum: {
      const FamilyVerdict f = left_varsum_member(s.op(p.t1), s.op(p.t2), *p.point, lambdas_of(p), n, tol);
      return family_json(f, tol, c, "");
    }
    case ProbeKind::Varcomp: {
      const FamilyVerdict f = varcomp_member(s.op(p.op), *p.matrix, *p.point, lambdas_of(p), n, tol);
      return family_json(f, tol, c, "");
    }
    case ProbeKind::Prop4: {
      const CrossCheck x = prop4_crosscheck(s.op(p.op), *p.matrix, *p.point, lambdas_of(p), n, tol);
      return Json{{"agree", x.agree},
                  {"composition", family_json(x.route_composition, tol, c, "composition.")},
                  {"lifted_sum", family_json(x.route_lifted_sum, tol, c, "lifted.")}};
    }
    case ProbeKind::Lemma1: {
      const OperatorSequence seq = s.build_sequence(p.sequence);
      const SampledGraph samples =
          p.graph ? resolve_graph(s, *p.graph)
                  : sample_liminf(seq, *s.grid, n, tol, tail_schedule());
      Json j{{"liminf_samples", samples.size()}};
      try {
        BoundednessCertificate cert = lemma1_certificate(seq, *p.point, samples, n, tol);
        Json clusters = Json::array();
        for (const auto& k : cert.clusters) {
          clusters.push_back(Json{{"x_bar", vector_to_json(k.x_bar)},
                                  {"eta_star", vector_to_json(k.eta_star)},
                                  {"members", k.members},
                                  {"spread", number(k.spread)},
                                  {"limsup_sq", number(k.limsup_sq)},
                                  {"polar_gap", number(k.polar_gap)},
                                  {"polar_ok", k.polar_ok},
                                  {"inequality_slack", number(k.inequality_slack)},
                                  {"slack_allowance", number(k.slack_allowance)},
                                  {"inequality_ok", k.inequality_ok}});
        }
        j["holds"] = cert.holds();
        j["bounded"] = cert.bounded;
        j["polar_ok"] = cert.polar_ok;
        j["inequality_ok"] = cert.inequality_ok;
        j["sup_norm"] = number(cert.sup_norm);
        j["clusters"] = clusters;
        c.trace("", p.sequence, std::move(cert.trace));
      } catch (const NoClusterPoint& e) {
        j["holds"] = false;
        j["no_cluster_point"] = e.what();
      }
      return j;
    }
  }
  return Json();
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const NoConvergence*>(&e)) return "no_convergence";
  if (dynamic_cast<const NotResolvable*>(&e)) return "not_resolvable";
  if (dynamic_cast<const OutOfGrid*>(&e)) return "out_of_grid";
  if (dynamic_cast<const InvalidSpec*>(&e)) return "invalid_spec";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "dimension_mismatch";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal";
}

void count_status(Json& counts, const Json& verdict) {
  if (verdict.is_object() && verdict.contains("status")) {
    counts[verdict["status"].get<std::string>()] = counts.value(verdict["status"].get<std::string>(), 0) + 1;
  }
}

}  // namespace

const char* tool_version() { return MONOLAB_VERSION; }

void apply_overrides(Scenario& s, const RunOptions& opt) {
  if (opt.horizon) s.horizon = *opt.horizon;
  if (opt.eps_member) s.tolerances.eps_member = *opt.eps_member;
  validate_scenario(s);
}

ProbeOutcome run_probe(const Scenario& s, std::size_t index, bool timings) {
  const ProbeDesc& p = s.probes.at(index);
  ProbeOutcome out;
  Collector c{out, p.id};
  out.entry = Json{{"index", index}, {"id", p.id}, {"kind", to_string(p.kind)}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Json result = run_kind(s, p, c);
    out.entry["status"] = "ok";
    out.entry["result"] = std::move(result);
  } catch (const std::exception& e) {
    out.failed = true;
    out.entry["status"] = "error";
    Json err{{"type", error_type(e)}, {"message", e.what()}};
    if (const auto* nc = dynamic_cast<const NoConvergence*>(&e)) {
      out.no_convergence = true;
      err["best_residual"] = number(nc->best().residual);
      err["iterations"] = nc->best().iterations;
    }
    out.entry["error"] = err;
  }
  out.entry["traces"] = c.traces;
  out.entry["fields"] = c.fields;
  if (timings) {
    out.entry["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
  RunResult r;
  r.probes.resize(s.probes.size());
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opt.jobs, 1)), 1, std::max<std::size_t>(s.probes.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < s.probes.size(); i = next++) r.probes[i] = run_probe(s, i, opt.timings);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  Json probes = Json::array();
  Json counts = Json::object();
  std::size_t ok = 0, errors = 0;
  bool no_convergence = false;
  for (const auto& p : r.probes) {
    probes.push_back(p.entry);
    if (p.failed) {
      ++errors;
      no_convergence = no_convergence || p.no_convergence;
      continue;
    }
    ++ok;
    const Json& res = p.entry["result"];
    if (res.contains("verdict")) count_status(counts, res["verdict"]);
    if (res.contains("aggregate")) count_status(counts, res["aggregate"]);
  }
  r.report = Json{{"format", "monolab-report"},
                  {"schema_version", kReportSchemaVersion},
                  {"tool_version", tool_version()},
                  {"scenario", s.name},
                  {"horizon", s.horizon},
                  {"tolerances", to_json(s)["tolerances"]},
                  {"probes", probes},
                  {"summary", Json{{"probes", s.probes.size()}, {"ok", ok}, {"errors", errors}, {"verdicts", counts}}}};
  r.exit_code = no_convergence ? kExitNoConvergence : (errors > 0 ? kExitProbeError : kExitOk);
  return r;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const ConvergenceTrace& t, int dim) {
  os << "n";
  for (int k = 0; k < dim; ++k) os << ",x_n[" << k << "]";
  os << ",residual,dist_to_x\n";
  for (const auto& r : t.rows) {
    os << r.n;
    for (Eigen::Index k = 0; k < r.x_n.size(); ++k) os << ',' << format_double(r.x_n[k]);
    os << ',' << format_double(r.residual) << ',' << format_double(r.dist) << '\n';
  }
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const int d = f.grid.dim();
  for (int k = 0; k < d; ++k) os << "x[" << k << "],";
  for (int k = 0; k < d; ++k) os << "xstar[" << k << "],";
  os << "value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const DualPair p = f.grid.node(i);
    for (int k = 0; k < d; ++k) os << format_double(p.x[k]) << ',';
    for (int k = 0; k < d; ++k) os << format_double(p.xstar[k]) << ',';
    os << format_double(f.values[i]) << '\n';
  }
}

}  // namespace monolab::app
