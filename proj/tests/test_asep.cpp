#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "qex/asep.hpp"
#include "qex/error.hpp"

using namespace qex;
using namespace qex::asep;
using coxeter::Permutation;

namespace {

Occupation place(const std::vector<std::pair<Position, int>>& sites, int n_species) {
  Occupation eta;
  eta.n_species = n_species;
  for (const auto& [x, j] : sites) eta.add(x, j, 1);
  return eta;
}

}  // namespace

TEST_CASE("lattice subsets") {
  const LatticeSubset z = LatticeSubset::blocks({2, 3}, 0, 2);
  z.validate();
  CHECK(z.sites() == std::vector<Position>{0, 1, 4, 5, 6});
  CHECK(z.size() == 5);
  CHECK(z.contains(5));
  CHECK_FALSE(z.contains(2));
  CHECK(LatticeSubset::integers().contains(-1000));
  CHECK_THROWS_AS(LatticeSubset::integers().sites(), DomainError);
  CHECK_THROWS_AS(LatticeSubset::blocks({2, 3}, 0, 0), DomainError);
  CHECK_THROWS_AS(LatticeSubset::blocks({2, 0}), DomainError);
  LatticeSubset bad;
  bad.intervals = {{0, 3}, {2, 5}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK(position_blocks(LatticeSubset::blocks({2, 3})).composition() == qcalc::Composition({3, 2}));
}

TEST_CASE("exclusion moves and swaps") {
  const double q = 0.3;
  const Occupation a = place({{0, 1}, {1, 2}}, 2);
  std::map<Occupation, double> got;
  for (const auto& [s, r] : transitions<double>(a, q, LatticeSubset::integers())) got[s] += r;
  const std::map<Occupation, double> expect{{place({{1, 1}, {0, 2}}, 2), 1.0},
                                            {place({{-1, 1}, {1, 2}}, 2), q},
                                            {place({{0, 1}, {2, 2}}, 2), 1.0}};
  CHECK(got == expect);
  // The higher label moving right against a lower one goes at rate q.
  const Occupation b = place({{0, 2}, {1, 1}}, 2);
  CHECK(masep_rate<double>(configs::from_occupation(b), configs::from_occupation(a), q, LatticeSubset::integers()) ==
        q);
  CHECK(masep_rate<double>(configs::from_occupation(a), configs::from_occupation(b), q, LatticeSubset::integers()) ==
        1.0);
  // Same species do not swap; boundaries block jumps.
  const Occupation same = place({{0, 1}, {1, 1}}, 1);
  CHECK(transitions<double>(same, q, LatticeSubset::interval(0, 1)).empty());
  CHECK_THROWS_AS(species_at(same, 3), DomainError);
  Occupation stacked;
  stacked.n_species = 1;
  stacked.add(0, 1, 2);
  CHECK_THROWS_AS(species_at(stacked, 0), DomainError);
}

TEST_CASE("two particles on two sites: stationary law by hand") {
  // Rate 1 from (1 at 0, 2 at 1) to the swap, rate q back; balance gives q : 1.
  const Rational q(2, 5);
  const auto zone = LatticeSubset::interval(0, 1);
  const markov::StateIndex states(enumerate_states(zone, {1, 1}));
  REQUIRE(states.size() == 2);
  std::vector<Rational> mu;
  for (const Occupation& s : states.states()) {
    const bool lower_left = species_at(s, 0) == 1;
    mu.push_back(lower_left ? q / (1 + q) : Rational(1) / (1 + q));
    CHECK(power(q, config_length(s)) / q_factorial_at(2, q) == mu.back());
  }
  CHECK(stationarity_residual<Rational>(states, mu, q, zone) == 0);
  CHECK(nu_q<Rational>(Permutation::identity(2), q) == Rational(1) / (1 + q));
}

TEST_CASE("stationary measures on intervals are exact") {
  const Rational q(1, 3);
  for (int n = 2; n <= 4; ++n) {
    const auto zone = LatticeSubset::interval(0, n - 1);
    std::vector<Occupation> occ;
    std::vector<Rational> mu;
    for (const Permutation& s : coxeter::enumerate_all(n)) {
      occ.push_back(occupation_of(s, zone));
      mu.push_back(nu_q<Rational>(s, q));
    }
    const markov::StateIndex states(occ);
    CHECK(stationarity_residual<Rational>(states, mu, q, zone) == 0);
    // A single interval is one block, so the blocked measure is nu_q itself.
    const coxeter::Parabolic k = position_blocks(zone);
    const auto meas = blocked_measure<Rational>({{Permutation::identity(n), Rational(1)}}, k, q);
    for (const Permutation& s : coxeter::enumerate_all(n)) CHECK(meas.at(s) == nu_q<Rational>(s, q));
  }
  const coxeter::Parabolic k(qcalc::Composition({1, 1}));
  CHECK_THROWS_AS(blocked_measure<Rational>({{Permutation::identity(2), Rational(1, 2)}}, k, Rational(1, 3)),
                  DomainError);
  const coxeter::Parabolic k2(qcalc::Composition({2}));
  CHECK_THROWS_AS(blocked_measure<Rational>({{Permutation::from_oneline({2, 1}), Rational(1)}}, k2, Rational(1, 3)),
                  DomainError);
  CHECK_THROWS_AS(occupation_of(Permutation::identity(2), LatticeSubset::interval(0, 2)), DomainError);
}

TEST_CASE("enumerated states") {
  CHECK(enumerate_states(LatticeSubset::interval(0, 3), {1, 1}).size() == 12);
  CHECK(enumerate_states(LatticeSubset::interval(0, 3), {2}).size() == 6);
  CHECK_THROWS_AS(enumerate_states(LatticeSubset::interval(0, 1), {3}), DomainError);
}

TEST_CASE("conditional jump matrices") {
  const Rational q(1, 2);
  const auto zone = LatticeSubset::interval(0, 3);
  const auto jump = extract_conditional_matrix<Rational>(zone, {1, 1}, q, {1, 0}, {2, 0});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(jump.m[i][j] == Rational(i == j ? 1 : 0));
  const auto stay = extract_conditional_matrix<Rational>(zone, {1, 1}, q, {1, 0}, {1, 0});
  CHECK(position_rate<Rational>({1, 0}, {1, 0}, q, zone) == -1);
  for (std::size_t i = 0; i < 2; ++i) {
    Rational row(0), nu(0);
    for (std::size_t j = 0; j < 2; ++j) {
      row += stay.m[i][j];
      nu += nu_q<Rational>(stay.labels[j], q) * stay.m[j][i];
    }
    CHECK(row == 1);
    CHECK(nu == nu_q<Rational>(stay.labels[i], q));
  }
}

TEST_CASE("truncated master equation for one particle") {
  const tazrp::QExchangeableInit init{{0}, {1}};
  const double t = 1.2;
  SUBCASE("totally asymmetric") {
    const auto sol = solve_master_truncated(init, t, 16, 0.0, 1e-8);
    const boost::math::poisson_distribution<double> pois(t);
    for (Position d = 0; d <= 6; ++d)
      CHECK(sol.probability(place({{d, 1}}, 1)) == doctest::Approx(boost::math::pdf(pois, d)).epsilon(1e-9));
  }
  SUBCASE("two-sided walk against the Bessel form") {
    const double q = 0.4;
    const auto sol = solve_master_truncated(init, t, 16, q, 1e-8);
    CHECK(sol.eps_trunc <= 1e-8);
    for (Position d = -4; d <= 6; ++d) {
      const double exact = std::exp(-(1 + q) * t) * std::pow(q, -d / 2.0) *
                           boost::math::cyl_bessel_i(std::abs(d), 2 * t * std::sqrt(q));
      CHECK(std::abs(sol.probability(place({{d, 1}}, 1)) - exact) < 1e-10);
    }
    CHECK(sol.escaped >= -1e-14);
    CHECK(sol.escaped <= sol.eps_trunc);
  }
  CHECK(truncation_bound(2, 0.5, 0.0, 3) == 0.0);
  CHECK(truncation_bound(3, 0.5, 1.0, 4) == doctest::Approx(3 * (1 - boost::math::cdf(boost::math::poisson_distribution<double>(1.5), 4.0))));
  CHECK_THROWS_AS(solve_master_truncated(init, 5.0, 2, 0.5, 1e-6), DomainError);
  CHECK_THROWS_AS(solve_master_truncated(init, 1.0, 10, 1.0), DomainError);
  CHECK_THROWS_AS(solve_master_truncated(tazrp::QExchangeableInit{{0, 0}, {1, 1}}, 1.0, 10, 0.5), DomainError);
}

TEST_CASE("species merges are lumpable on subsets") {
  for (const LatticeSubset& zone : {LatticeSubset::interval(0, 4), LatticeSubset::blocks({2, 2})}) {
    const auto states = enumerate_states(zone, {1, 1, 1});
    for (const auto& blocks : std::vector<std::vector<std::vector<int>>>{{{1, 2}, {3}}, {{1}, {2, 3}}}) {
      const auto r = check_lumpability(states, 0.45, zone, markov::SpeciesPartition::from_blocks(blocks, 3));
      CHECK(r.lumpable);
      CHECK(r.max_defect < 1e-12);
    }
  }
}

TEST_CASE("simulation is independent of the worker count") {
  const tazrp::QExchangeableInit init{{1, 0}, {1, 1}};
  const auto a = gillespie_asep(init, 0.7, 3000, 5, 0.5, 1);
  const auto b = gillespie_asep(init, 0.7, 3000, 5, 0.5, 3);
  CHECK(a == b);
  CHECK(a.n_traj == 3000);
  CHECK_THROWS_AS(gillespie_asep(init, 0.7, 10, 5, 1.5, 1), DomainError);
}
