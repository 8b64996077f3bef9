#include <cmath>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "doctest.h"
#include "qex/error.hpp"
#include "qex/tazrp.hpp"

using namespace qex;
using namespace qex::tazrp;
using coxeter::Permutation;

namespace {

RateEnv env_with(double q, std::map<Position, double> b = {}) {
  RateEnv e;
  e.q = q;
  e.b = std::move(b);
  return e;
}

}  // namespace

TEST_CASE("jump rates give priority to lower labels") {
  Occupation eta;
  eta.n_species = 3;
  eta.add(0, 1, 1);
  eta.add(0, 2, 2);
  eta.add(0, 3, 1);
  const RateEnv e = env_with(0.5, {{0, 2.0}});
  CHECK(jump_rate(eta, 1, 0, e) == doctest::Approx(2.0));
  CHECK(jump_rate(eta, 2, 0, e) == doctest::Approx(2.0 * 0.5 * 1.5));
  CHECK(jump_rate(eta, 3, 0, e) == doctest::Approx(2.0 * 0.125));
  CHECK(jump_rate(eta, 3, 1, e) == 0.0);
  // Total rate out of a site is b [m]_q.
  double total = 0.0;
  for (const auto& tr : transitions(eta, e)) total += tr.second;
  CHECK(total == doctest::Approx(2.0 * qcalc::q_int_value(4, 0.5)));
  CHECK(wait_time({2, 2, 0}, env_with(0.5)) == doctest::Approx(2.5));
  CHECK_THROWS_AS(wait_time({}, e), DomainError);
}

TEST_CASE("rate environment validation") {
  CHECK_THROWS_AS(env_with(1.0).validate(), DomainError);
  CHECK_THROWS_AS(env_with(0.0).validate(), DomainError);
  CHECK_THROWS_AS(env_with(0.5, {{3, -1.0}}).validate(), DomainError);
  CHECK_THROWS_AS(env_with(0.5, {{3, 200.0}}).validate(), DomainError);
  env_with(0.5, {{3, 2.0}}).validate();
  CHECK(env_with(0.5, {{3, 1.0}}).homogeneous());
  CHECK_FALSE(env_with(0.5, {{3, 2.0}}).homogeneous());
}

TEST_CASE("a single particle performs a Poisson walk") {
  const QExchangeableInit init{{0}, {1}};
  const RateEnv e = env_with(0.5);
  const double t = 1.7;
  const MasterSolution sol = solve_master(init, t, Positions{6}, e);
  const boost::math::poisson_distribution<double> pois(t);
  for (Position d = 0; d <= 6; ++d) {
    const TazrpConfig c{{d}, {1}, Permutation::identity(1)};
    CHECK(sol.probability(c) == doctest::Approx(boost::math::pdf(pois, d)).epsilon(1e-10));
  }
  CHECK(sol.escaped == doctest::Approx(boost::math::cdf(boost::math::complement(pois, 6))).epsilon(1e-8));
}

TEST_CASE("inhomogeneous single particle matches the hypoexponential law") {
  // Rates 1 then 3: P(at site 1) = (e^{-t} - e^{-3t}) / 2.
  const QExchangeableInit init{{0}, {1}};
  const RateEnv e = env_with(0.5, {{1, 3.0}});
  const double t = 0.8;
  const MasterSolution sol = solve_master(init, t, Positions{1}, e);
  const TazrpConfig c{{1}, {1}, Permutation::identity(1)};
  CHECK(sol.probability(c) == doctest::Approx((std::exp(-t) - std::exp(-3 * t)) / 2).epsilon(1e-12));
}

TEST_CASE("initial laws") {
  for (int n = 1; n <= 4; ++n)
    for (const qcalc::Composition& sites : qcalc::compositions_of(n)) {
      Positions y;
      int level = static_cast<int>(sites.size());
      for (int part : sites.parts()) {
        --level;
        for (int i = 0; i < part; ++i) y.push_back(level);
      }
      std::vector<int> distinct(static_cast<std::size_t>(n), 1);
      const QExchangeableInit lit{y, distinct};
      CHECK(lit.normalization() == qcalc::q_multinomial(sites));
      for (const qcalc::Composition& species : qcalc::compositions_of(n)) {
        const QExchangeableInit proj{y, species.parts(), InitWeight::Projected};
        CHECK(proj.normalization() == qcalc::q_multinomial(sites));
        double total = 0.0;
        for (const auto& [c, p] : proj.law(0.4)) {
          CHECK(p > 0.0);
          total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  // Without two same-species particles on a site the weightings agree.
  const QExchangeableInit a{{2, 1, 0}, {1, 2}}, b{{2, 1, 0}, {1, 2}, InitWeight::Projected};
  const auto la = a.law(0.3), lb = b.law(0.3);
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(la[i].second == doctest::Approx(lb[i].second));
}

TEST_CASE("left moves are generator entries") {
  const RateEnv e = env_with(0.6, {{0, 1.5}, {1, 0.5}, {2, 2.5}});
  const std::vector<int> counts{1, 1, 1};
  for (const TazrpConfig& c : reachable_states({1, 1, 1}, {3, 3, 3}, counts))
    for (int k = 1; k <= 3; ++k) {
      const LeftMove m = left_move_decomposition(c, k);
      const TazrpConfig from{m.x_minus, counts, m.sigma_hat};
      configs::validate(from);
      const Occupation target = configs::to_occupation(c);
      double rate = 0.0;
      for (const auto& [s, r] : transitions(configs::to_occupation(from), e))
        if (s == target) rate += r;
      CHECK(rate == doctest::Approx(left_move_rate(m, e)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(left_move_decomposition(TazrpConfig{{1, 0}, {2}, Permutation::identity(2)}, 1), DomainError);
  CHECK_THROWS_AS(left_move_decomposition(TazrpConfig{{1, 0}, {1, 1}, Permutation::identity(2)}, 3), DomainError);
}

TEST_CASE("reachable states and sorted boxes") {
  CHECK(sorted_box({0, 0}, {1, 1}).size() == 3);
  CHECK_THROWS_AS(sorted_box({0}, {1, 1}), DomainError);
  CHECK_THROWS_AS(reachable_states({2, 0}, {1, 1}, {1, 1}), DomainError);
  // (1,1): two labels; (1,0) and (0,0) shapes.
  CHECK(reachable_states({0, 0}, {1, 1}, {1, 1}).size() == 1 + 2 + 1);
}

TEST_CASE("master equation conserves mass up to the reported escape") {
  const QExchangeableInit init{{1, 0, 0}, {1, 1, 1}};
  const RateEnv e = env_with(0.5, {{2, 0.7}});
  const MasterSolution sol = solve_master(init, 1.0, Positions{4, 4, 4}, e);
  double kept = 0.0;
  for (double v : sol.p) {
    CHECK(v >= -1e-14);
    kept += v;
  }
  CHECK(sol.escaped > 0.0);
  CHECK(kept + sol.escaped == doctest::Approx(1.0));
  const auto dense = solve_master(init, 1.0, Positions{4, 4, 4}, e, ctmc::Method::Dense);
  const auto unif = solve_master(init, 1.0, Positions{4, 4, 4}, e, ctmc::Method::Uniformization);
  for (std::size_t i = 0; i < dense.p.size(); ++i) CHECK(dense.p[i] == doctest::Approx(unif.p[i]).epsilon(1e-10));
  CHECK_THROWS_AS(solve_master(init, -1.0, Positions{4, 4, 4}, e), DomainError);
}

TEST_CASE("species merges are lumpable") {
  std::vector<Occupation> states;
  for (const TazrpConfig& c : reachable_states({0, 0, 0}, {2, 2, 2}, {1, 1, 1})) states.push_back(configs::to_occupation(c));
  for (const auto& blocks : std::vector<std::vector<std::vector<int>>>{{{1, 2}, {3}}, {{1}, {2, 3}}, {{1, 2, 3}}}) {
    const auto pi = markov::SpeciesPartition::from_blocks(blocks, 3);
    const auto r = check_lumpability(states, env_with(0.35, {{1, 2.0}}), pi);
    CHECK(r.lumpable);
    CHECK(r.states_checked == states.size());
  }
}

TEST_CASE("single-site stationary law sums to one") {
  const RateEnv e = env_with(0.45);
  double s = 0.0;
  for (int k = 0; k < 200; ++k) s += stationary_single(k, 0.3, e);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(stationary_single(1, 1.0, e), DomainError);
  CHECK_THROWS_AS(stationary_single(1, 0.3, env_with(0.45, {{0, 2.0}})), DomainError);
}

TEST_CASE("balance identity and formal stationarity") {
  for (const qcalc::Composition& species : {qcalc::Composition({1, 1, 1}), qcalc::Composition({1, 2}),
                                            qcalc::Composition({2, 1})})
    for (const TazrpConfig& c : reachable_states({1, 1, 1}, {3, 3, 3}, species.parts())) {
      const Occupation eta = configs::to_occupation(c);
      for (const auto& [site, counts] : eta.sites)
        for (int j = 1; j <= eta.n_species; ++j) {
          if (counts[static_cast<std::size_t>(j - 1)] == 0) continue;
          const BalanceSides s = balance_identity(eta, site, j);
          CHECK(s.lhs == s.rhs);
        }
      CHECK(formal_stationarity_residual(eta, 0.4) < 1e-12);
      CHECK(multi_stationary_weight(c, 0.4) ==
            doctest::Approx(std::pow(0.4, coxeter::length(c.sigma)) / multi_stationary_denominator(c).eval(0.4)));
    }
  Occupation eta;
  eta.n_species = 1;
  eta.add(0, 1, 1);
  CHECK_THROWS_AS(balance_identity(eta, 1, 1), DomainError);
  for (int n = 1; n <= 4; ++n) CHECK(ring_stationarity_residual(6, n, 0.3) < 1e-12);
  CHECK_THROWS_AS(ring_stationarity_residual(1, 1, 0.3), DomainError);
}

TEST_CASE("gillespie at time zero samples the initial law") {
  const QExchangeableInit init{{1, 1, 0}, {1, 1, 1}};
  const RateEnv e = env_with(0.5);
  const auto emp = gillespie(init, 0.0, 40000, 9, e, 2);
  for (const auto& [s, p] : init.occupation_law(0.5))
    CHECK(std::abs(emp.frequency(s) - p) < 5 * std::sqrt(p * (1 - p) / 40000));
  CHECK(emp == gillespie(init, 0.0, 40000, 9, e, 1));
}
