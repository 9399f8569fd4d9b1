#include "helpers.hpp"

#include "monolab/fitzpatrick.hpp"
#include "monolab/limits.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace monolab;
using namespace testutil;

namespace {

constexpr auto kMember = MembershipStatus::Member;
constexpr auto kNonMember = MembershipStatus::NonMember;

OperatorSequence alternating() { return OperatorSequence::periodic({cone_at(0.0), OperatorSpec::zero(1)}); }

/// T_n = cone_at(1/n): the graph {1/n} x R drifts to {0} x R.
OperatorSequence drifting_cone() {
  return OperatorSequence{[](long n) { return cone_at(1.0 / static_cast<double>(n)); }, "N{1/n}"};
}

}  // namespace

TEST_SUITE("limits") {
  TEST_CASE("schedule is dense below the limit") {
    const ProbeSchedule s;
    const auto idx = s.indices(100);
    REQUIRE(idx.size() == 100);
    CHECK(idx.front() == 1);
    CHECK(idx.back() == 100);
  }

  TEST_CASE("thinned schedule keeps the head and ends at the horizon") {
    ProbeSchedule s;
    s.dense_limit = 1000;
    s.run_length = 10;
    const auto idx = s.indices(1'000'000);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
    CHECK(idx.back() == 1'000'000);
    CHECK(idx[499] == 500);
    CHECK(idx.size() < 5000);
  }

  TEST_CASE("tail-only schedule skips the first half") {
    ProbeSchedule s;
    s.tail_only = true;
    const auto idx = s.indices(1000);
    CHECK(idx.front() >= 500);
    CHECK(idx.back() == 1000);
  }

  TEST_CASE("constant identity") {
    const auto seq = OperatorSequence::constant(identity(1));
    CHECK(liminf_member(seq, pair1(2, 2), 200).status == kMember);
    const MembershipVerdict v = liminf_member(seq, pair1(1, 3), 200);
    CHECK(v.status == kNonMember);
    CHECK(v.witness_min == doctest::Approx(1.0));
    REQUIRE_FALSE(v.evidence.rows.empty());
    CHECK(v.evidence.rows.back().x_n(0) == doctest::Approx(2.0));
  }

  TEST_CASE("trace rows record the distance") {
    const auto t = probe_trace(OperatorSequence::constant(identity(1)), pair1(1, 3), 10, {}, {});
    REQUIRE(t.rows.size() == 10);
    for (const auto& r : t.rows) CHECK(r.dist == doctest::Approx(1.0));
  }

  TEST_CASE("alternating sequence") {
    const auto seq = alternating();
    CHECK(liminf_member(seq, pair1(0, 0), 1000).status == kMember);
    CHECK(liminf_member(seq, pair1(0, 1), 1000).status == kNonMember);
    CHECK(liminf_member(seq, pair1(1, 0), 1000).status == kNonMember);
    CHECK(limsup_member(seq, pair1(0, 1), 1000).status == kMember);
    CHECK(limsup_member(seq, pair1(1, 0), 1000).status == kMember);
    CHECK(limsup_member(seq, pair1(1, 1), 1000).status == kNonMember);
  }

  TEST_CASE("drifting normal cone converges at rate 1/n") {
    ToleranceConfig tol;
    tol.eps_member = 1e-3;
    const auto seq = drifting_cone();
    CHECK(liminf_member(seq, pair1(0, 5), 10'000, tol).status == kMember);
    CHECK(liminf_member(seq, pair1(0.5, 0), 10'000, tol).status == kNonMember);
  }

  TEST_CASE("status names") {
    CHECK(std::string(to_string(kMember)) != std::string(to_string(kNonMember)));
    CHECK(std::string(to_string(MembershipStatus::Inconclusive)).size() > 0);
  }

  TEST_CASE("liminf sample on a grid") {
    const GridSpec grid = GridSpec::symmetric(1, 1.0, 0.5);
    const SampledGraph s = sample_liminf(alternating(), grid, 500);
    REQUIRE(s.size() == 1);
    CHECK(s.pairs[0].x.norm() == doctest::Approx(0.0));
    CHECK(s.pairs[0].xstar.norm() == doctest::Approx(0.0));
  }

  TEST_CASE("boundedness certificate for a constant sequence") {
    const auto seq = OperatorSequence::constant(identity(1));
    const SampledGraph samples(1, {pair1(-1, -1), pair1(0, 0), pair1(1, 1)});
    const BoundednessCertificate c = lemma1_certificate(seq, pair1(1, 1), samples, 500);
    CHECK(c.bounded);
    CHECK(c.holds());
    REQUIRE_FALSE(c.clusters.empty());
    CHECK(c.clusters[0].x_bar(0) == doctest::Approx(1.0));
  }

  TEST_CASE("certificate detects polar violations") {
    // (0, 2) under the constant identity: x_n = 1, x_bar - x = 1, and
    // (1, 1) is on the graph, so the polar test passes but (0, 2) is not in liminf.
    const auto seq = OperatorSequence::constant(identity(1));
    const SampledGraph samples(1, {pair1(-2, -2), pair1(2, 2)});
    const BoundednessCertificate c = lemma1_certificate(seq, pair1(0, 2), samples, 500);
    CHECK(c.bounded);
    REQUIRE_FALSE(c.clusters.empty());
    CHECK(c.clusters[0].x_bar(0) == doctest::Approx(1.0));
    CHECK(c.clusters[0].eta_star(0) == doctest::Approx(1.0));
  }

  TEST_CASE("mosco probe of a constant sequence") {
    const GridSpec grid = GridSpec::symmetric(1, 1.0, 0.5);
    SampledGraph candidate(1);
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) candidate.add(pair1(x, x));
    const MoscoReport m = mosco_maximality_probe(OperatorSequence::constant(identity(1)), candidate, grid, 200);
    CHECK(m.candidate_in_liminf);
    CHECK(m.limsup_in_candidate);
    CHECK(m.is_mosco_limit == kMember);
  }

  TEST_CASE("mosco probe rejects a wrong candidate") {
    const GridSpec grid = GridSpec::symmetric(1, 1.0, 0.5);
    SampledGraph candidate(1, {pair1(0, 0), pair1(1, 0)});
    const MoscoReport m = mosco_maximality_probe(OperatorSequence::constant(identity(1)), candidate, grid, 200);
    CHECK(m.is_mosco_limit == kNonMember);
    CHECK_FALSE(m.liminf_failures.empty());
  }
}
