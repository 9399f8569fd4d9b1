#include "helpers.hpp"

#include "monolab/convex.hpp"
#include "monolab/operators.hpp"
#include "monolab/resolvent.hpp"
#include "monolab/set_description.hpp"
#include "monolab/varcalc.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace monolab;
using namespace testutil;

namespace {

// Brute-force prox of a 1-D convex function by golden-section search.
double prox_oracle(const std::function<double(double)>& f, double lambda, double w) {
  double lo = w - 50.0, hi = w + 50.0;
  auto obj = [&](double z) { return f(z) + (z - w) * (z - w) / (2.0 * lambda); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (obj(a) < obj(b)) hi = b; else lo = a;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("resolvent") {
  TEST_CASE("zero operator resolvent is the identity") {
    const SolveReport r = resolvent(OperatorSpec::zero(2), 1.0, v2(3.0, 4.0));
    CHECK(r.solution.isApprox(v2(3.0, 4.0)));
    CHECK(r.converged);
  }

  TEST_CASE("normal cone of a point resolves to the point") {
    CHECK(resolvent(cone_at(-1.0), 0.5, v1(5.0)).solution(0) == doctest::Approx(-1.0));
  }

  TEST_CASE("soft thresholding") {
    CHECK(resolvent(abs_subdiff(), 1.0, v1(3.0)).solution(0) == doctest::Approx(2.0));
  }

  TEST_CASE("linear resolvent") {
    // (1 + 2 * 1) z = 6
    CHECK(resolvent(OperatorSpec::linear(m1(2.0)), 1.0, v1(6.0)).solution(0) == doctest::Approx(2.0));
  }

  TEST_CASE("yosida of a normal cone") {
    // (0 - (-1)) / 0.5
    CHECK(yosida_eval(cone_at(-1.0), 0.5, v1(0.0))(0) == doctest::Approx(2.0));
  }

  TEST_CASE("yosida regularization resolvent matches the closed form") {
    const OperatorSpec y = OperatorSpec::yosida(abs_subdiff(), 0.5);
    const Vector w = v1(4.0);
    // J^{T_mu}_lambda w = w + lambda/(lambda+mu) (J^T_{lambda+mu} w - w)
    const double expect = 4.0 + (1.0 / 1.5) * (resolvent(abs_subdiff(), 1.5, w).solution(0) - 4.0);
    CHECK(resolvent(y, 1.0, w).solution(0) == doctest::Approx(expect));
  }

  TEST_CASE("resolvent matches a brute-force prox") {
    const auto f = [](double z) { return std::abs(z) + 0.5 * 3.0 * (z - 1.0) * (z - 1.0); };
    // Sum of |.| and the gradient of 1.5 (z - 1)^2 is the subdifferential of f.
    const OperatorSpec t = OperatorSpec::sum(
        {abs_subdiff(), OperatorSpec::subdifferential(ConvexFn::shifted_power(v1(1.0), 2, 3.0))});
    for (double w : {-4.0, -0.5, 0.0, 0.7, 2.5, 9.0}) {
      for (double lambda : {0.1, 1.0, 3.0}) {
        CAPTURE(w);
        CAPTURE(lambda);
        const SolveReport r = resolvent(t, lambda, v1(w));
        CHECK(r.converged);
        CHECK(r.solution(0) == doctest::Approx(prox_oracle(f, lambda, w)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("lifted operator resolvent") {
    const LiftedPair l = lift_specs(identity(1), m1(2.0));
    const SolveReport r = resolvent(l.t_tilde, 1.0, v2(3.0, 4.0));
    CHECK(r.solution.isApprox(v2(3.0, 2.0)));
  }

  TEST_CASE("graph normal cone resolvent is the projection") {
    const OperatorSpec n = OperatorSpec::graph_normal_cone(m1(2.0));
    const Vector z = resolvent(n, 3.0, v2(1.0, 0.0)).solution;
    CHECK(z(1) == doctest::Approx(2.0 * z(0)));
    CHECK(z(0) == doctest::Approx(0.2));
  }

  TEST_CASE("probe equation for the identity") {
    const SolveReport r = solve_probe_equation(identity(1), pair1(1.0, 3.0));
    CHECK(r.solution(0) == doctest::Approx(2.0));
  }

  TEST_CASE("probe equation solution lies on the graph") {
    const OperatorSpec t = abs_subdiff();
    const DualPair p = pair1(0.5, 2.0);
    const Vector xn = solve_probe_equation(t, p).solution;
    const Vector on_graph = p.xstar - (xn - p.x);
    CHECK(op_eval(t, xn).contains(on_graph, 1e-9));
  }

  TEST_CASE("strongly monotone solve") {
    const Matrix a = (Matrix(2, 2) << 2.0, 1.0, -1.0, 2.0).finished();
    const Vector b = v2(1.0, -3.0);
    const SolveReport r = strongly_monotone_solve([&](const Vector& z) { Vector f = a * z - b; return f; }, 2.0,
                                                  std::sqrt(5.0), Vector::Zero(2));
    CHECK(r.converged);
    CHECK((a * r.solution - b).norm() < 1e-8);
  }

  TEST_CASE("set-valued sums are not resolvable when two summands are set-valued") {
    const OperatorSpec t = OperatorSpec::sum({cone_at(0.0), cone_interval(-1.0, 1.0)});
    CHECK_FALSE(is_resolvable(t));
    CHECK_THROWS_AS(resolvent(t, 1.0, v1(0.0)), NotResolvable);
  }

  TEST_CASE("single-valued classification") {
    CHECK(is_single_valued(identity(2)));
    CHECK(is_single_valued(OperatorSpec::yosida(cone_at(0.0), 1.0)));
    CHECK_FALSE(is_single_valued(abs_subdiff()));
    CHECK(lipschitz_bound(OperatorSpec::yosida(cone_at(0.0), 0.25)) == doctest::Approx(4.0));
  }

  TEST_CASE("resolvent jacobian of soft thresholding") {
    CHECK(resolvent_jacobian(abs_subdiff(), 1.0, v1(3.0))(0, 0) == doctest::Approx(1.0));
    CHECK(resolvent_jacobian(abs_subdiff(), 1.0, v1(0.2))(0, 0) == doctest::Approx(0.0));
  }

  TEST_CASE("invalid lambda") {
    CHECK_THROWS(resolvent(identity(1), -1.0, v1(0.0)));
    CHECK_THROWS(resolvent(identity(1), 0.0, v1(0.0)));
  }

  TEST_CASE("nonfinite input") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(resolvent(identity(1), 1.0, v1(nan)));
  }
}
