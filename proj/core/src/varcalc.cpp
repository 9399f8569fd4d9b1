#include "monolab/varcalc.hpp"

#include "monolab/operators.hpp"
#include "monolab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monolab {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Only a prefix of the horizon is checked exhaustively; the tail is spot checked.
constexpr long kValidatePrefix = 1000;

}  // namespace

ParamSequence ParamSequence::power(double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent > 0.0)) throw InvalidSpec("ParamSequence::power: need scale, exponent > 0");
  std::string name = (scale == 1.0 ? "1" : format_number(scale)) + "/n";
  if (exponent != 1.0) name += "^" + format_number(exponent);
  return ParamSequence{[scale, exponent](long n) {
                         return scale / std::pow(static_cast<double>(n), exponent);
                       },
                       std::move(name)};
}

ParamSequence ParamSequence::dyadic(int floor_exponent) {
  if (floor_exponent < 1 || floor_exponent > 1000) throw InvalidSpec("ParamSequence::dyadic: bad floor");
  return ParamSequence{[floor_exponent](long n) {
                         return std::ldexp(1.0, -static_cast<int>(std::min<long>(n, floor_exponent)));
                       },
                       "2^-n"};
}

ParamSequence ParamSequence::zero() {
  return ParamSequence{[](long) { return 0.0; }, "0"};
}

void ParamSequencePair::validate(long horizon) const {
  if (horizon < 1) throw InvalidSpec("parameter sequence: horizon must be >= 1");
  auto check = [&](long n, double l, double m) {
    if (!(l >= 0.0) || !(m >= 0.0) || !std::isfinite(l) || !std::isfinite(m)) {
      throw InvalidSpec("parameter sequence " + name + ": negative or non-finite value at n=" +
                        std::to_string(n));
    }
    if (!(l + m > 0.0)) {
      throw InvalidSpec("parameter sequence " + name + ": lambda + mu vanishes at n=" + std::to_string(n));
    }
    if (m == 0.0 && tag != Tag::Left) {
      throw InvalidSpec("parameter sequence " + name + ": mu = 0 is reserved for left sequences");
    }
  };
  double prev_l = lambda(1), prev_m = mu(1);
  check(1, prev_l, prev_m);
  const long last = std::min(horizon, kValidatePrefix);
  for (long n = 2; n <= last; ++n) {
    const double l = lambda(n), m = mu(n);
    check(n, l, m);
    if (l > prev_l || m > prev_m) {
      throw InvalidSpec("parameter sequence " + name + ": not nonincreasing at n=" + std::to_string(n));
    }
    prev_l = l;
    prev_m = m;
  }
  check(horizon, lambda(horizon), mu(horizon));
}

ProbeFamily ProbeFamily::default_family() {
  using P = ParamSequence;
  using T = ParamSequencePair::Tag;
  return ProbeFamily{{
      {P::power(1, 1), P::power(1, 1), T::Symmetric, "(1/n, 1/n)"},
      {P::power(1, 2), P::power(1, 1), T::Custom, "(1/n^2, 1/n)"},
      {P::power(1, 1), P::power(1, 2), T::Custom, "(1/n, 1/n^2)"},
      {P::dyadic(), P::dyadic(), T::Symmetric, "(2^-n, 2^-n)"},
  }};
}

ProbeFamily ProbeFamily::default_left_family() {
  ProbeFamily f;
  for (auto& l : default_lambda_sequences()) {
    std::string name = "(" + l.name + ", 0)";
    f.sequences.push_back({std::move(l), ParamSequence::zero(), ParamSequencePair::Tag::Left, std::move(name)});
  }
  return f;
}

OperatorSpec regularized_sum_spec(const OperatorSpec& t1, const OperatorSpec& t2, double lambda,
                                  double mu) {
  if (!(lambda >= 0.0) || !(mu >= 0.0) || !(lambda + mu > 0.0)) {
    throw InvalidSpec("regularized_sum_spec: need lambda, mu >= 0 with lambda + mu > 0");
  }
  auto side = [](const OperatorSpec& t, double p) {
    if (p > 0.0) return OperatorSpec::yosida(t, p);
    if (!is_resolvable(t)) throw NotResolvable("unregularized summand has no resolvent: " + t.describe());
    return t;
  };
  return OperatorSpec::sum({side(t1, lambda), side(t2, mu)});
}

OperatorSequence regularized_sum_sequence(const OperatorSpec& t1, const OperatorSpec& t2,
                                          const ParamSequencePair& params) {
  return OperatorSequence{
      [t1, t2, params](long n) { return regularized_sum_spec(t1, t2, params.lambda(n), params.mu(n)); },
      params.name};
}

MembershipVerdict aggregate_verdicts(const std::vector<MembershipVerdict>& per_sequence) {
  MembershipVerdict agg;
  if (per_sequence.empty()) {
    agg.note = "no sequences";
    return agg;
  }
  for (const auto& v : per_sequence) {
    if (v.status == MembershipStatus::NonMember) {
      agg.status = MembershipStatus::NonMember;
      agg.certifying_sequence = v.certifying_sequence;
      agg.tail_max = v.tail_max;
      agg.witness_min = v.witness_min;
      agg.evidence = v.evidence;
      agg.note = "certified by one sequence of the family";
      return agg;
    }
  }
  const bool all = std::all_of(per_sequence.begin(), per_sequence.end(),
                               [](const auto& v) { return v.status == MembershipStatus::Member; });
  for (const auto& v : per_sequence) agg.tail_max = std::max(agg.tail_max, v.tail_max);
  if (all) {
    agg.status = MembershipStatus::Member;
    agg.note = "member-supported by all " + std::to_string(per_sequence.size()) + " sequences";
  } else {
    agg.status = MembershipStatus::Inconclusive;
    agg.note = "some sequence inconclusive";
  }
  return agg;
}

namespace {

FamilyVerdict run_family(const std::vector<OperatorSequence>& seqs, const DualPair& p, long horizon,
                         const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  FamilyVerdict out;
  for (const auto& s : seqs) out.per_sequence.push_back(liminf_member(s, p, horizon, tol, schedule));
  out.aggregate = aggregate_verdicts(out.per_sequence);
  return out;
}

}  // namespace

FamilyVerdict varsum_member(const OperatorSpec& t1, const OperatorSpec& t2, const DualPair& p,
                            const ProbeFamily& family, long horizon, const ToleranceConfig& tol,
                            const ProbeSchedule& schedule) {
  if (t1.dim() != t2.dim() || t1.dim() != p.dim()) throw DimensionMismatch("varsum_member: dimensions differ");
  if (family.sequences.empty()) throw InvalidSpec("varsum_member: empty probe family");
  std::vector<OperatorSequence> seqs;
  for (const auto& params : family.sequences) {
    params.validate(horizon);
    seqs.push_back(regularized_sum_sequence(t1, t2, params));
  }
  return run_family(seqs, p, horizon, tol, schedule);
}

FamilyVerdict left_varsum_member(const OperatorSpec& t1, const OperatorSpec& t2, const DualPair& p,
                                 const std::vector<ParamSequence>& lambdas, long horizon,
                                 const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  if (!is_resolvable(t2)) throw NotResolvable("left variational sum: second summand has no resolvent");
  ProbeFamily family;
  for (const auto& l : lambdas) {
    family.sequences.push_back(
        {l, ParamSequence::zero(), ParamSequencePair::Tag::Left, "(" + l.name + ", 0)"});
  }
  return varsum_member(t1, t2, p, family, horizon, tol, schedule);
}

SetDescription composition_eval(const Matrix& a, const OperatorSpec& t, const Vector& y) {
  if (a.rows() != t.dim()) throw DimensionMismatch("composition_eval: A rows differ from operator dim");
  require_dim(y, static_cast<int>(a.cols()), "composition_eval");
  return op_eval(t, a * y).image(a.transpose());
}

FamilyVerdict varcomp_member(const OperatorSpec& t, const Matrix& a, const DualPair& p,
                             const std::vector<ParamSequence>& lambdas, long horizon,
                             const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  if (a.rows() != t.dim() || a.cols() != p.dim()) throw DimensionMismatch("varcomp_member: dimensions differ");
  if (lambdas.empty()) throw InvalidSpec("varcomp_member: no lambda sequences");
  std::vector<OperatorSequence> seqs;
  for (const auto& l : lambdas) {
    if (!(l(1) > 0.0)) throw InvalidSpec("varcomp_member: lambda_n must be > 0");
    seqs.push_back(OperatorSequence{
        [t, a, l](long n) { return OperatorSpec::adjoint_composition(a, OperatorSpec::yosida(t, l(n))); },
        l.name});
  }
  return run_family(seqs, p, horizon, tol, schedule);
}

LiftedPair lift_specs(const OperatorSpec& t, const Matrix& a) {
  if (a.rows() != t.dim()) throw DimensionMismatch("lift_specs: A rows differ from operator dim");
  return LiftedPair{OperatorSpec::product_lift(static_cast<int>(a.cols()), t),
                    OperatorSpec::graph_normal_cone(a)};
}

CrossCheck prop4_crosscheck(const OperatorSpec& t, const Matrix& a, const DualPair& p,
                            const std::vector<ParamSequence>& lambdas, long horizon,
                            const ToleranceConfig& tol, const ProbeSchedule& schedule) {
  CrossCheck out;
  out.route_composition = varcomp_member(t, a, p, lambdas, horizon, tol, schedule);

  const auto dy = a.cols();
  const auto dx = a.rows();
  Vector z(dy + dx), zs = Vector::Zero(dy + dx);
  z << p.x, a * p.x;
  zs.head(dy) = p.xstar;
  const LiftedPair lifted = lift_specs(t, a);
  out.route_lifted_sum =
      left_varsum_member(lifted.t_tilde, lifted.normal_a, DualPair(z, zs), lambdas, horizon, tol, schedule);

  out.agree = out.route_composition.per_sequence.size() == out.route_lifted_sum.per_sequence.size();
  for (std::size_t i = 0; out.agree && i < out.route_composition.per_sequence.size(); ++i) {
    out.agree = out.route_composition.per_sequence[i].status == out.route_lifted_sum.per_sequence[i].status;
  }
  return out;
}

Matrix scaled_rotation(int k) {
  if (k < 1 || k > 30) throw InvalidSpec("scaled_rotation: k must be in [1, 30]");
  Matrix m = Matrix::Zero(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    const double s = std::ldexp(1.0, i + 1);
    m(i, k + i) = s;
    m(k + i, i) = -s;
  }
  return m;
}

std::vector<ParamSequence> default_lambda_sequences() {
  return {ParamSequence::power(1, 1), ParamSequence::power(1, 2), ParamSequence::dyadic()};
}

}  // namespace monolab
