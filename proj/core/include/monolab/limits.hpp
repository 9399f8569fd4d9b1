#pragma once

#include "monolab/fitzpatrick.hpp"
#include "monolab/operator_spec.hpp"
#include "monolab/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace monolab {

/// n |-> T_n for n = 1, 2, ...; the generator must be pure.
struct OperatorSequence {
  std::function<OperatorSpec(long)> generator;
  std::string description;

  OperatorSpec operator()(long n) const { return generator(n); }

  static OperatorSequence constant(OperatorSpec t);
  /// T_n = ops[n mod ops.size()]; with two entries even n picks ops[0].
  static OperatorSequence periodic(std::vector<OperatorSpec> ops, std::string description = {});
};

/// Which indices n in [1, N] a probe evaluates.
///
/// Horizons up to `dense_limit` are evaluated at every index. Longer horizons
/// keep every index of the first `dense_limit / 2` and, beyond that, runs of
/// `run_length` consecutive indices spread evenly, so periodic patterns
/// survive the thinning.
struct ProbeSchedule {
  long dense_limit = 20'000;
  long run_length = 64;
  /// Skip indices below horizon / 2; verdicts only read the second half.
  bool tail_only = false;

  std::vector<long> indices(long horizon) const;
};

struct ConvergenceTrace {
  struct Row {
    long n;
    Vector x_n;
    double residual;
    double dist;  // ||x_n - x||
  };
  std::vector<Row> rows;
};

enum class MembershipStatus { Member, NonMember, Inconclusive };

const char* to_string(MembershipStatus s);

struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::Inconclusive;
  ConvergenceTrace evidence;
  std::string certifying_sequence;
  /// Largest distance over the final 10% of the horizon.
  double tail_max = 0.0;
  /// Smallest of the per-block maximal distances over the second half.
  double witness_min = 0.0;
  std::string note;
};

/// Trace of probe-equation solutions x_n for the indices of `schedule`.
/// Stops early (and sets `stopped_at`) when T_n is not resolvable.
ConvergenceTrace probe_trace(const OperatorSequence& seq, const DualPair& p, long horizon,
                             const ToleranceConfig& tol, const ProbeSchedule& schedule,
                             long* stopped_at = nullptr, std::string* stop_reason = nullptr);

/// (x, x*) in liminf T_n iff x_n -> x, where x_n solves x* in (x_n - x) + T_n(x_n).
MembershipVerdict liminf_member(const OperatorSequence& seq, const DualPair& p, long horizon,
                                const ToleranceConfig& tol = {}, const ProbeSchedule& schedule = {});

/// Membership in limsup T_n, using ||x_n - x|| as the distance proxy to the
/// graph of T_n (the point (x_n, x + x* - x_n) lies on that graph).
MembershipVerdict limsup_member(const OperatorSequence& seq, const DualPair& p, long horizon,
                                const ToleranceConfig& tol = {}, const ProbeSchedule& schedule = {});

struct ClusterCheck {
  Vector x_bar;
  Vector eta_star;           // x_bar - x
  std::size_t members = 0;
  double spread = 0.0;       // max distance of members to x_bar
  double limsup_sq = 0.0;    // max ||x_n - x||^2 over members
  double polar_gap = 0.0;    // min over samples of the gap of (x_bar, x* - eta*)
  double inequality_slack = 0.0;
  double slack_allowance = 0.0;
  bool polar_ok = false;
  bool inequality_ok = false;
};

struct BoundednessCertificate {
  bool bounded = false;
  bool polar_ok = false;
  bool inequality_ok = false;
  double sup_norm = 0.0;
  std::vector<ClusterCheck> clusters;
  ConvergenceTrace trace;

  bool holds() const { return bounded && polar_ok && inequality_ok; }
};

/// Checks boundedness of the probe solutions, the monotone-polar membership of
/// (x_bar, x* - eta*) for every cluster point and the limsup inequality against
/// every sample of liminf T_n.
BoundednessCertificate lemma1_certificate(const OperatorSequence& seq, const DualPair& p,
                                          const SampledGraph& liminf_samples, long horizon,
                                          const ToleranceConfig& tol = {},
                                          const ProbeSchedule& schedule = {});

/// Grid nodes accepted by liminf_member.
SampledGraph sample_liminf(const OperatorSequence& seq, const GridSpec& grid, long horizon,
                           const ToleranceConfig& tol = {}, const ProbeSchedule& schedule = {});

struct MoscoReport {
  MembershipStatus is_mosco_limit = MembershipStatus::Inconclusive;
  bool candidate_in_liminf = false;
  bool limsup_in_candidate = false;
  std::vector<DualPair> liminf_failures;   // candidate points not certified in liminf
  std::vector<DualPair> limsup_outside;    // limsup grid points away from the candidate
  std::optional<Classification> classification;
};

MoscoReport mosco_maximality_probe(const OperatorSequence& seq, const SampledGraph& candidate,
                                   const GridSpec& grid, long horizon,
                                   const ToleranceConfig& tol = {},
                                   const ProbeSchedule& schedule = {});

}  // namespace monolab
