#include "monolab/limits.hpp"

#include "monolab/operators.hpp"
#include "monolab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace monolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Verdict windows, as fractions of the horizon.
constexpr double kTailFraction = 0.9;   // final 10%
constexpr double kWitnessStart = 0.5;   // second half
constexpr int kWitnessBlocks = 5;
constexpr int kLimsupBlocks = 4;
constexpr double kLimsupFrequency = 0.25;
constexpr double kFarFactor = 10.0;

long tail_start(long horizon) {
  return std::max(1L, static_cast<long>(std::ceil(kTailFraction * static_cast<double>(horizon))));
}

long witness_start(long horizon) {
  return std::max(1L, static_cast<long>(std::ceil(kWitnessStart * static_cast<double>(horizon))));
}

/// Rows with n in [from, horizon], split into `blocks` equal index ranges.
std::vector<std::vector<const ConvergenceTrace::Row*>> blocks_of(const ConvergenceTrace& t,
                                                                  long from, long horizon,
                                                                  int blocks) {
  std::vector<std::vector<const ConvergenceTrace::Row*>> out(static_cast<std::size_t>(blocks));
  const double width = static_cast<double>(horizon - from + 1) / blocks;
  for (const auto& r : t.rows) {
    if (r.n < from) continue;
    auto b = static_cast<int>(static_cast<double>(r.n - from) / width);
    out[static_cast<std::size_t>(std::min(b, blocks - 1))].push_back(&r);
  }
  return out;
}

MembershipVerdict stopped_verdict(ConvergenceTrace trace, long at, const std::string& reason) {
  MembershipVerdict v;
  v.status = MembershipStatus::Inconclusive;
  v.evidence = std::move(trace);
  v.note = "stopped at n=" + std::to_string(at) + ": " + reason;
  return v;
}

void check_horizon(long horizon) {
  if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
}

}  // namespace

OperatorSequence OperatorSequence::constant(OperatorSpec t) {
  std::string desc = "constant " + t.describe();
  return OperatorSequence{[t = std::move(t)](long) { return t; }, std::move(desc)};
}

OperatorSequence OperatorSequence::periodic(std::vector<OperatorSpec> ops, std::string description) {
  if (ops.empty()) throw InvalidSpec("OperatorSequence::periodic: needs at least one operator");
  if (description.empty()) {
    description = "periodic(";
    for (std::size_t i = 0; i < ops.size(); ++i) description += (i ? ", " : "") + ops[i].describe();
    description += ")";
  }
  return OperatorSequence{
      [ops = std::move(ops)](long n) { return ops[static_cast<std::size_t>(n) % ops.size()]; },
      std::move(description)};
}

std::vector<long> ProbeSchedule::indices(long horizon) const {
  check_horizon(horizon);
  const long first = tail_only ? witness_start(horizon) : 1;
  std::vector<long> out;
  const long span = horizon - first + 1;
  if (span <= dense_limit) {
    out.resize(static_cast<std::size_t>(span));
    std::iota(out.begin(), out.end(), first);
    return out;
  }
  const long head = std::max(1L, dense_limit / 2);
  for (long n = first; n < first + head; ++n) out.push_back(n);
  const long rl = std::max(1L, run_length);
  const long runs = std::max(1L, (dense_limit - head) / rl);
  const long lo = first + head;
  const long hi = horizon - rl + 1;  // start of the last run
  for (long j = 0; j < runs; ++j) {
    const long start =
        runs == 1 ? hi
                  : lo + static_cast<long>(std::llround(static_cast<double>(hi - lo) * j / (runs - 1)));
    for (long n = std::max(start, out.back() + 1); n < start + rl && n <= horizon; ++n) out.push_back(n);
  }
  return out;
}

const char* to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::Member:
      return "member";
    case MembershipStatus::NonMember:
      return "non_member";
    case MembershipStatus::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ConvergenceTrace probe_trace(const OperatorSequence& seq, const DualPair& p, long horizon,
                             const ToleranceConfig& tol, const ProbeSchedule& schedule,
                             long* stopped_at, std::string* stop_reason) {
  ConvergenceTrace trace;
  const auto idx = schedule.indices(horizon);
  trace.rows.reserve(idx.size());
  if (stopped_at) *stopped_at = 0;
  for (const long n : idx) {
    try {
      const OperatorSpec tn = seq(n);
      SolveReport r = solve_probe_equation(tn, p, tol);
      const double dist = (r.solution - p.x).norm();
      trace.rows.push_back({n, std::move(r.solution), r.residual, dist});
    } catch (const NotResolvable& e) {
      if (stopped_at) *stopped_at = n;
      if (stop_reason) *stop_reason = e.what();
      break;
    }
  }
  return trace;
}

MembershipVerdict liminf_member(const OperatorSequence& seq, const DualPair& p, long horizon,
                                const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  check_horizon(horizon);
  long stopped = 0;
  std::string reason;
  ConvergenceTrace trace = probe_trace(seq, p, horizon, tol, schedule, &stopped, &reason);
  if (stopped != 0) return stopped_verdict(std::move(trace), stopped, reason);

  MembershipVerdict v;
  v.certifying_sequence = seq.description;

  // Member: small over the final 10% and not increasing across it.
  const long t0 = std::min(tail_start(horizon), trace.rows.back().n);
  const long mid = t0 + (horizon - t0 + 1) / 2;
  double tail_max = 0.0, first_half = 0.0, second_half = 0.0;
  for (const auto& r : trace.rows) {
    if (r.n < t0) continue;
    tail_max = std::max(tail_max, r.dist);
    (r.n < mid ? first_half : second_half) = std::max(r.n < mid ? first_half : second_half, r.dist);
  }
  v.tail_max = tail_max;

  // Non-member: every block of the second half has a far witness.
  double witness_min = kInf;
  for (const auto& block : blocks_of(trace, witness_start(horizon), horizon, kWitnessBlocks)) {
    double block_max = 0.0;
    for (const auto* r : block) block_max = std::max(block_max, r->dist);
    if (!block.empty()) witness_min = std::min(witness_min, block_max);
  }
  v.witness_min = witness_min == kInf ? 0.0 : witness_min;

  const bool trend_ok = second_half <= first_half + 1e-12 || second_half <= tol.eps_res;
  if (tail_max <= tol.eps_member && trend_ok) {
    v.status = MembershipStatus::Member;
  } else if (v.witness_min >= kFarFactor * tol.eps_member) {
    v.status = MembershipStatus::NonMember;
  } else {
    v.status = MembershipStatus::Inconclusive;
    v.note = tail_max <= tol.eps_member ? "distance still increasing over the tail"
                                        : "distance neither small nor bounded away";
  }
  v.evidence = std::move(trace);
  return v;
}

MembershipVerdict limsup_member(const OperatorSequence& seq, const DualPair& p, long horizon,
                                const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  check_horizon(horizon);
  long stopped = 0;
  std::string reason;
  ConvergenceTrace trace = probe_trace(seq, p, horizon, tol, schedule, &stopped, &reason);
  if (stopped != 0) return stopped_verdict(std::move(trace), stopped, reason);

  MembershipVerdict v;
  v.certifying_sequence = seq.description;

  // Member: frequently close in every block of the final 10%.
  const long t0 = std::min(tail_start(horizon), trace.rows.back().n);
  bool frequent = true;
  double tail_max = 0.0;
  for (const auto& block : blocks_of(trace, t0, horizon, kLimsupBlocks)) {
    if (block.empty()) continue;
    std::size_t close = 0;
    for (const auto* r : block) {
      if (r->dist <= tol.eps_member) ++close;
      tail_max = std::max(tail_max, r->dist);
    }
    if (static_cast<double>(close) < kLimsupFrequency * static_cast<double>(block.size())) frequent = false;
  }
  v.tail_max = tail_max;

  // Non-member: far for every n in the second half.
  double far_min = kInf;
  for (const auto& r : trace.rows) {
    if (r.n >= witness_start(horizon)) far_min = std::min(far_min, r.dist);
  }
  v.witness_min = far_min == kInf ? 0.0 : far_min;

  if (frequent) {
    v.status = MembershipStatus::Member;
  } else if (v.witness_min > kFarFactor * tol.eps_member) {
    v.status = MembershipStatus::NonMember;
  } else {
    v.status = MembershipStatus::Inconclusive;
    v.note = "close only sporadically";
  }
  v.evidence = std::move(trace);
  return v;
}

namespace {

/// Tail bucketing: sort-and-split in one dimension, leader clustering otherwise.
std::vector<std::vector<const ConvergenceTrace::Row*>> cluster_rows(
    const std::vector<const ConvergenceTrace::Row*>& rows, double radius) {
  std::vector<std::vector<const ConvergenceTrace::Row*>> out;
  if (rows.empty()) return out;
  if (rows.front()->x_n.size() == 1) {
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->x_n[0] < b->x_n[0]; });
    out.push_back({sorted.front()});
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i]->x_n[0] - sorted[i - 1]->x_n[0] > radius) out.emplace_back();
      out.back().push_back(sorted[i]);
    }
    return out;
  }
  std::vector<Vector> leaders;
  for (const auto* r : rows) {
    std::size_t k = 0;
    for (; k < leaders.size(); ++k) {
      if ((r->x_n - leaders[k]).norm() <= radius) break;
    }
    if (k == leaders.size()) {
      leaders.push_back(r->x_n);
      out.emplace_back();
    }
    out[k].push_back(r);
  }
  return out;
}

}  // namespace

BoundednessCertificate lemma1_certificate(const OperatorSequence& seq, const DualPair& p,
                                          const SampledGraph& liminf_samples, long horizon,
                                          const ToleranceConfig& tol,
                                          const ProbeSchedule& schedule) {
  check_horizon(horizon);
  if (liminf_samples.empty()) throw EmptyGraph("lemma1_certificate: liminf sample is empty");
  if (liminf_samples.dim != p.dim()) throw DimensionMismatch("lemma1_certificate: dimensions differ");

  BoundednessCertificate cert;
  cert.trace = probe_trace(seq, p, horizon, tol, schedule);
  if (cert.trace.rows.empty()) throw NoClusterPoint("lemma1_certificate: no solutions computed");

  // (a) boundedness: finite and not growing from the first to the second half.
  const long half = witness_start(horizon);
  double sup_first = 0.0, sup_second = 0.0;
  bool finite = true;
  for (const auto& r : cert.trace.rows) {
    const double nrm = r.x_n.norm();
    if (!std::isfinite(nrm)) finite = false;
    (r.n < half ? sup_first : sup_second) = std::max(r.n < half ? sup_first : sup_second, nrm);
  }
  cert.sup_norm = std::max(sup_first, sup_second);
  cert.bounded = finite && sup_second <= sup_first * (1.0 + 1e-3) + tol.eps_member;

  // (b), (c) for each cluster point of the tail.
  const long t0 = std::min(tail_start(horizon), cert.trace.rows.back().n);
  std::vector<const ConvergenceTrace::Row*> tail;
  for (const auto& r : cert.trace.rows) {
    if (r.n >= t0) tail.push_back(&r);
  }
  const auto buckets = cluster_rows(tail, kFarFactor * tol.eps_member);
  if (buckets.empty()) throw NoClusterPoint("lemma1_certificate: tail is empty");

  double sample_norm = 0.0;
  for (const auto& s : liminf_samples.pairs) {
    sample_norm = std::max(sample_norm, std::hypot(s.x.norm(), s.xstar.norm()));
  }
  const double p_norm = std::hypot(p.x.norm(), p.xstar.norm());

  cert.polar_ok = true;
  cert.inequality_ok = true;
  for (const auto& bucket : buckets) {
    ClusterCheck c;
    c.members = bucket.size();
    c.x_bar = Vector::Zero(p.dim());
    for (const auto* r : bucket) c.x_bar += r->x_n;
    c.x_bar /= static_cast<double>(bucket.size());
    for (const auto* r : bucket) {
      c.spread = std::max(c.spread, (r->x_n - c.x_bar).norm());
      c.limsup_sq = std::max(c.limsup_sq, r->dist * r->dist);
    }
    c.eta_star = c.x_bar - p.x;
    const Vector shifted = p.xstar - c.eta_star;
    c.slack_allowance =
        tol.eps_gap + c.spread * (1.0 + 4.0 * (sample_norm + p_norm + c.x_bar.norm())) +
        2.0 * c.spread * c.spread;

    c.polar_gap = kInf;
    c.inequality_slack = kInf;
    for (const auto& s : liminf_samples.pairs) {
      c.polar_gap = std::min(c.polar_gap, (s.xstar - shifted).dot(s.x - c.x_bar));
      const double lhs = (shifted - s.xstar).dot(c.x_bar - s.x) + c.eta_star.dot(c.x_bar - p.x);
      c.inequality_slack = std::min(c.inequality_slack, lhs - c.limsup_sq);
    }
    c.polar_ok = c.polar_gap >= -c.slack_allowance;
    c.inequality_ok = c.inequality_slack >= -c.slack_allowance;
    cert.polar_ok = cert.polar_ok && c.polar_ok;
    cert.inequality_ok = cert.inequality_ok && c.inequality_ok;
    cert.clusters.push_back(std::move(c));
  }
  return cert;
}

SampledGraph sample_liminf(const OperatorSequence& seq, const GridSpec& grid, long horizon,
                           const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  ProbeSchedule tail = schedule;
  tail.tail_only = true;
  SampledGraph out(grid.dim());
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    DualPair p = grid.node(i);
    if (liminf_member(seq, p, horizon, tol, tail).status == MembershipStatus::Member) {
      out.add(std::move(p));
    }
  }
  return out;
}

MoscoReport mosco_maximality_probe(const OperatorSequence& seq, const SampledGraph& candidate,
                                   const GridSpec& grid, long horizon, const ToleranceConfig& tol,
                                   const ProbeSchedule& schedule) {
  if (candidate.empty()) throw EmptyGraph("mosco_maximality_probe: empty candidate");
  if (candidate.dim != grid.dim()) throw DimensionMismatch("mosco_maximality_probe: dimensions differ");
  for (const auto& c : candidate.pairs) {
    if (!grid.contains(c)) throw OutOfGrid("mosco_maximality_probe: candidate point outside grid");
  }
  ProbeSchedule tail = schedule;
  tail.tail_only = true;

  MoscoReport rep;
  bool liminf_refuted = false;
  for (const auto& c : candidate.pairs) {
    const auto v = liminf_member(seq, c, horizon, tol, tail);
    if (v.status != MembershipStatus::Member) {
      rep.liminf_failures.push_back(c);
      if (v.status == MembershipStatus::NonMember) liminf_refuted = true;
    }
  }
  rep.candidate_in_liminf = rep.liminf_failures.empty();

  bool limsup_unsure = false;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const DualPair q = grid.node(i);
    const auto v = limsup_member(seq, q, horizon, tol, tail);
    if (v.status == MembershipStatus::Inconclusive) limsup_unsure = true;
    if (v.status != MembershipStatus::Member) continue;
    double best = kInf;
    for (const auto& c : candidate.pairs) {
      best = std::min(best, std::hypot((c.x - q.x).norm(), (c.xstar - q.xstar).norm()));
    }
    if (best > tol.eps_member) rep.limsup_outside.push_back(q);
  }
  rep.limsup_in_candidate = rep.limsup_outside.empty();

  if (rep.candidate_in_liminf && rep.limsup_in_candidate) {
    rep.is_mosco_limit = limsup_unsure ? MembershipStatus::Inconclusive : MembershipStatus::Member;
    rep.classification = classify(candidate, grid, tol);
  } else if (!rep.limsup_outside.empty() || liminf_refuted) {
    rep.is_mosco_limit = MembershipStatus::NonMember;
  }
  return rep;
}

}  // namespace monolab
