#include <cmath>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "qex/asep.hpp"
#include "qex/error.hpp"
#include "qex/integrals.hpp"

using namespace qex;
using namespace qex::integrals;
using coxeter::Permutation;

namespace {

tazrp::RateEnv env_with(double q, std::map<Position, double> b = {}) {
  tazrp::RateEnv e;
  e.q = q;
  e.b = std::move(b);
  return e;
}

}  // namespace

TEST_CASE("extended products") {
  const auto f = [](long k) { return cplx(static_cast<double>(k)); };
  CHECK(extended_product(f, 2, 4) == cplx(24.0));
  CHECK(extended_product(f, 3, 2) == cplx(1.0));
  CHECK(std::abs(extended_product(f, 5, 2) - cplx(1.0 / 12.0)) < 1e-15);
  CHECK_THROWS_AS(extended_product(f, 2, -1), ArithmeticError);
}

TEST_CASE("amplitudes") {
  CHECK(std::abs(tazrp_S(2.0, 3.0, 0.5) - cplx(-4.0)) < 1e-14);
  CHECK_THROWS_AS(tazrp_S(1.5, 3.0, 0.5), ContourError);
  CHECK(std::abs(asep_eps(1.0, 0.3) - cplx(0.3)) < 1e-15);
  CHECK_THROWS_AS(asep_eps(0.0, 0.3), DomainError);
  const std::vector<cplx> w{cplx(0.2, 0.1), cplx(-0.1, 0.3)};
  CHECK(a_sigma(Permutation::identity(2), w, 0.4, Flavor::Tazrp) == cplx(1.0));
  const auto s1 = Permutation::from_oneline({2, 1});
  CHECK(std::abs(a_sigma(s1, w, 0.4, Flavor::Tazrp) - tazrp_S(w[1], w[0], 0.4)) < 1e-15);
  CHECK(std::abs(a_sigma(s1, w, 0.4, Flavor::Asep) - asep_S(w[0], w[1], 0.4)) < 1e-15);
  CHECK_THROWS_AS(a_sigma(s1, {cplx(1.0)}, 0.4, Flavor::Tazrp), DomainError);
}

TEST_CASE("single-particle TAZRP is Poisson") {
  const double t = 1.3;
  const boost::math::poisson_distribution<double> pois(t);
  for (Position d = 0; d <= 6; ++d) {
    const QuadResult r = tazrp_transition({0}, {d}, t, env_with(0.5));
    CHECK(std::abs(r.value - boost::math::pdf(pois, d)) < 1e-10);
    CHECK(r.imag_residual < 1e-10);
  }
  CHECK(std::abs(tazrp_transition({2}, {1}, t, env_with(0.5)).value) < 1e-12);
}

TEST_CASE("single-particle ASEP is a Bessel law") {
  const double q = 0.35, t = 0.9;
  for (Position d = -3; d <= 4; ++d) {
    const double exact = std::exp(-(1 + q) * t) * std::pow(q, -d / 2.0) *
                         boost::math::cyl_bessel_i(std::abs(d), 2 * t * std::sqrt(q));
    CHECK(std::abs(asep_transition({0}, {d}, t, q).value - exact) < 1e-10);
  }
}

TEST_CASE("two-particle integrals against the forward equation") {
  const double t = 0.8;
  SUBCASE("TAZRP with inhomogeneous rates") {
    const auto env = env_with(0.4, {{1, 1.5}, {2, 0.7}});
    const tazrp::QExchangeableInit init{{1, 0}, {2}};
    const auto sol = tazrp::solve_master(init, t, Positions{3, 3}, env);
    for (const Positions& x : std::vector<Positions>{{1, 0}, {2, 0}, {2, 2}, {3, 1}}) {
      const TazrpConfig c{x, {2}, Permutation::identity(2)};
      CHECK(std::abs(tazrp_transition({1, 0}, x, t, env).value - sol.probability(c)) < 1e-9);
    }
  }
  SUBCASE("ASEP") {
    const double q = 0.5;
    const tazrp::QExchangeableInit init{{1, 0}, {2}};
    const auto sol = asep::solve_master_truncated(init, t, 12, q, 1e-7);
    for (const Positions& x : std::vector<Positions>{{1, 0}, {2, 0}, {1, -1}, {3, 2}}) {
      const TazrpConfig c{x, {2}, Permutation::identity(2)};
      CHECK(std::abs(asep_transition({1, 0}, x, t, q).value - sol.probability(c)) < 1e-7);
    }
  }
}

TEST_CASE("argument and contour checks") {
  CHECK_THROWS_AS(tazrp_kernel({0, 1}, {1, 1}, 1.0, env_with(0.5)), DomainError);
  CHECK_THROWS_AS(tazrp_kernel({0}, {1}, -1.0, env_with(0.5)), DomainError);
  ContourSpec tight;
  tight.radius = 0.9;
  CHECK_THROWS_AS(tazrp_kernel({0}, {1}, 1.0, env_with(0.5), tight), ContourError);
  ContourSpec odd;
  odd.points = 48;
  CHECK_THROWS_AS(tazrp_kernel({0}, {1}, 1.0, env_with(0.5), odd), DomainError);
  ContourSpec wide;
  wide.radius = 0.9;
  CHECK_THROWS_AS(asep_transition({0}, {1}, 1.0, 0.5, wide), ContourError);
  CHECK_THROWS_AS(asep_transition({0, 0}, {1, 0}, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(asep_transition({0}, {1}, 1.0, 1.0), DomainError);
  CHECK(default_asep_radius(0.5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("prefactors") {
  const TazrpConfig c{{1, 1, 0}, {1, 2}, Permutation::parse("312", coxeter::Notation::TwoLine)};
  configs::validate(c);
  // q^{l} [1]![2]! / ([3]! [L_ij]!), L = {{0,2},{1,0}}.
  const double q = 0.5;
  const double expect = std::pow(q, coxeter::length(c.sigma)) * qcalc::q_factorial_value(2, q) /
                        (qcalc::q_factorial_value(3, q) * qcalc::q_factorial_value(2, q));
  CHECK(tazrp_multi_prefactor(c, q) == doctest::Approx(expect));
  const TazrpConfig d{{2, 1, 0}, {1, 1, 1}, Permutation::from_oneline({2, 1, 3})};
  CHECK(asep_multi_prefactor(d, q) == doctest::Approx(q / qcalc::q_factorial_value(3, q)));
}

TEST_CASE("quadrature does not depend on the worker count") {
  ContourSpec one, three;
  one.workers = 1;
  three.workers = 3;
  const auto env = env_with(0.5);
  const auto a = tazrp_kernel({1, 0, 0}, {2, 2, 1}, 1.0, env, one);
  const auto b = tazrp_kernel({1, 0, 0}, {2, 2, 1}, 1.0, env, three);
  CHECK(a.value == b.value);
  CHECK(a.M == b.M);
  CHECK(a.quad_error_estimate <= one.tol);
}
