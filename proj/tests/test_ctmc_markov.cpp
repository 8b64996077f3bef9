#include <cmath>
#include <vector>

#include "doctest.h"
#include "qex/ctmc.hpp"
#include "qex/error.hpp"
#include "qex/markov.hpp"
#include "qex/parallel.hpp"

using namespace qex;
using configs::Occupation;

namespace {

ctmc::SparseGenerator<double> two_state(double a, double b) {
  ctmc::SparseGenerator<double> g;
  g.resize(2);
  g.out[0] = {{1, a}};
  g.out[1] = {{0, b}};
  g.exit_rate = {a, b};
  return g;
}

Occupation single(configs::Position site) {
  Occupation eta;
  eta.n_species = 1;
  eta.add(site, 1, 1);
  return eta;
}

}  // namespace

TEST_CASE("two-state chain matches the closed form") {
  const double a = 1.3, b = 0.4, t = 2.1;
  const double p1 = a / (a + b) * (1.0 - std::exp(-(a + b) * t));
  for (ctmc::Method m : {ctmc::Method::Dense, ctmc::Method::Uniformization, ctmc::Method::Auto}) {
    const auto p = ctmc::transient(two_state(a, b), {1.0, 0.0}, t, m);
    CHECK(p[1] == doctest::Approx(p1).epsilon(1e-12));
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("leaking state loses mass exponentially") {
  ctmc::SparseGenerator<double> g;
  g.resize(1);
  g.exit_rate[0] = 0.7;
  CHECK(g.leak(0) == doctest::Approx(0.7));
  for (ctmc::Method m : {ctmc::Method::Dense, ctmc::Method::Uniformization})
    CHECK(ctmc::transient(g, {1.0}, 3.0, m)[0] == doctest::Approx(std::exp(-2.1)).epsilon(1e-12));
  CHECK(ctmc::transient(g, {0.5}, 0.0)[0] == 0.5);
  CHECK_THROWS_AS(ctmc::transient(g, {1.0, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(ctmc::transient(g, {1.0}, -1.0), DomainError);
}

TEST_CASE("long horizons split the uniformization series") {
  const auto g = two_state(5.0, 3.0);
  const auto a = ctmc::transient(g, {0.2, 0.8}, 40.0, ctmc::Method::Uniformization);
  CHECK(a[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-10));
}

TEST_CASE("generator assembly counts rates outside the state set as leak") {
  const markov::StateIndex states({single(0), single(1)});
  CHECK(states.find(single(5)) == states.size());
  CHECK_THROWS_AS(markov::StateIndex({single(0), single(0)}), DomainError);
  const markov::TransitionFn<double> fn = [](const Occupation& s) {
    const auto site = s.sites.begin()->first;
    return markov::Transitions<double>{{single(site + 1), 2.0}};
  };
  const auto g = markov::build_generator<double>(states, fn);
  CHECK(g.leak(0) == 0.0);
  CHECK(g.leak(1) == 2.0);
  const auto r = g.left_multiply({1.0, 0.0});
  CHECK(r == std::vector<double>{-2.0, 2.0});
}

TEST_CASE("species partitions") {
  const auto pi = markov::SpeciesPartition::from_blocks({{1, 2}, {3}}, 3);
  CHECK(pi.block_sizes == std::vector<int>{2, 1});
  CHECK(pi.coarse_of(2) == 1);
  CHECK(pi.coarse_of(3) == 2);
  CHECK_THROWS_AS(pi.coarse_of(4), DomainError);
  CHECK_THROWS_AS(markov::SpeciesPartition::from_blocks({{2, 1}, {3}}, 3), DomainError);
  CHECK_THROWS_AS(markov::SpeciesPartition::from_blocks({{1}, {3}}, 3), DomainError);
  CHECK_THROWS_AS(markov::SpeciesPartition::from_blocks({{1}, {}, {2}}, 2), DomainError);
  Occupation eta;
  eta.n_species = 3;
  eta.add(4, 1, 1);
  eta.add(4, 2, 1);
  eta.add(2, 3, 1);
  const Occupation c = markov::project(eta, pi);
  CHECK(c.n_species == 2);
  CHECK(c.count(4, 1) == 2);
  CHECK(c.count(2, 2) == 1);
}

TEST_CASE("empirical laws merge by adding counts") {
  markov::Empirical a, b;
  a.n_traj = 4;
  a.counts[single(0)] = 3;
  a.counts[single(1)] = 1;
  b.n_traj = 6;
  b.counts[single(1)] = 6;
  a.merge(b);
  CHECK(a.n_traj == 10);
  CHECK(a.frequency(single(1)) == doctest::Approx(0.7));
  CHECK(a.frequency(single(9)) == 0.0);
  CHECK(a.std_error(single(1)) == doctest::Approx(std::sqrt(0.7 * 0.3 / 10)));
}

TEST_CASE("trajectory streams depend only on seed and index") {
  auto e1 = trajectory_engine(11, 5), e2 = trajectory_engine(11, 5), e3 = trajectory_engine(11, 6);
  const auto v = e1();
  CHECK(v == e2());
  CHECK(v != e3());
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("simulation of a pure birth walk") {
  const markov::TransitionFn<double> fn = [](const Occupation& s) {
    return markov::Transitions<double>{{single(s.sites.begin()->first + 1), 1.0}};
  };
  const std::vector<std::pair<Occupation, double>> init{{single(0), 1.0}};
  const auto e1 = markov::simulate(init, fn, 1.0, 20000, 3, 1);
  const auto e2 = markov::simulate(init, fn, 1.0, 20000, 3, 4);
  CHECK(e1 == e2);
  // Poisson(1) number of jumps.
  CHECK(std::abs(e1.frequency(single(0)) - std::exp(-1.0)) < 5 * e1.std_error(single(0)));
  CHECK(std::abs(e1.frequency(single(2)) - std::exp(-1.0) / 2) < 5 * e1.std_error(single(2)));
  CHECK(markov::simulate(init, fn, 0.0, 10, 3, 1).frequency(single(0)) == 1.0);
  CHECK_THROWS_AS(markov::simulate(init, fn, 1.0, 0, 3, 1), DomainError);
  CHECK_THROWS_AS(markov::simulate({}, fn, 1.0, 5, 3, 1), DomainError);
}
