#pragma once

#include "monolab/limits.hpp"
#include "monolab/operator_spec.hpp"
#include "monolab/set_description.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace monolab {

/// Scalar parameter sequence n |-> lambda_n.
struct ParamSequence {
  std::function<double(long)> value;
  std::string name;

  double operator()(long n) const { return value(n); }

  /// scale / n^exponent
  static ParamSequence power(double scale, double exponent);
  /// 2^-n, floored at 2^-floor_exponent to stay representable.
  static ParamSequence dyadic(int floor_exponent = 30);
  static ParamSequence zero();
};

/// Pair (lambda_n, mu_n) regularizing the first and second summand.
struct ParamSequencePair {
  enum class Tag { Symmetric, Left, Custom };

  ParamSequence lambda;
  ParamSequence mu;
  Tag tag = Tag::Custom;
  std::string name;

  /// lambda_n, mu_n >= 0 with positive sum, nonincreasing; mu may vanish only for Left.
  void validate(long horizon) const;
};

struct ProbeFamily {
  std::vector<ParamSequencePair> sequences;

  /// (1/n, 1/n), (1/n^2, 1/n), (1/n, 1/n^2), (2^-n, 2^-n).
  static ProbeFamily default_family();
  /// lambda_n in {1/n, 1/n^2, 2^-n}, mu_n = 0.
  static ProbeFamily default_left_family();
};

struct FamilyVerdict {
  std::vector<MembershipVerdict> per_sequence;
  MembershipVerdict aggregate;
};

/// SumOf([T1 or Yosida(T1, lambda), T2 or Yosida(T2, mu)]); a zero parameter
/// leaves that summand unregularized, which requires it to be resolvable.
OperatorSpec regularized_sum_spec(const OperatorSpec& t1, const OperatorSpec& t2, double lambda,
                                  double mu);

OperatorSequence regularized_sum_sequence(const OperatorSpec& t1, const OperatorSpec& t2,
                                          const ParamSequencePair& params);

/// Non-member as soon as one sequence certifies it; member only if every
/// sequence of the family accepts (supporting evidence, not proof).
MembershipVerdict aggregate_verdicts(const std::vector<MembershipVerdict>& per_sequence);

FamilyVerdict varsum_member(const OperatorSpec& t1, const OperatorSpec& t2, const DualPair& p,
                            const ProbeFamily& family, long horizon,
                            const ToleranceConfig& tol = {}, const ProbeSchedule& schedule = {});

/// Only the first summand is regularized; the second must have an exact resolvent.
FamilyVerdict left_varsum_member(const OperatorSpec& t1, const OperatorSpec& t2, const DualPair& p,
                                 const std::vector<ParamSequence>& lambdas, long horizon,
                                 const ToleranceConfig& tol = {},
                                 const ProbeSchedule& schedule = {});

/// A' T (A y)
SetDescription composition_eval(const Matrix& a, const OperatorSpec& t, const Vector& y);

FamilyVerdict varcomp_member(const OperatorSpec& t, const Matrix& a, const DualPair& p,
                             const std::vector<ParamSequence>& lambdas, long horizon,
                             const ToleranceConfig& tol = {}, const ProbeSchedule& schedule = {});

struct LiftedPair {
  OperatorSpec t_tilde;   // (y, x) |-> {0} x T x
  OperatorSpec normal_a;  // normal cone of the graph of A
};

LiftedPair lift_specs(const OperatorSpec& t, const Matrix& a);

struct CrossCheck {
  FamilyVerdict route_composition;
  FamilyVerdict route_lifted_sum;
  bool agree = false;
};

/// y* in (A'TA)_v(y) versus (y*, 0) in l-(T~ +_v N_A)(y, Ay), sequence by sequence.
CrossCheck prop4_crosscheck(const OperatorSpec& t, const Matrix& a, const DualPair& p,
                            const std::vector<ParamSequence>& lambdas, long horizon,
                            const ToleranceConfig& tol = {}, const ProbeSchedule& schedule = {});

/// Skew map (x, y) |-> (D y, -D x) on R^(2k) with D = diag(2, 4, ..., 2^k).
Matrix scaled_rotation(int k);

std::vector<ParamSequence> default_lambda_sequences();

}  // namespace monolab
