#include "qex/asep.hpp"

#include <algorithm>
#include <functional>

#include <boost/math/distributions/poisson.hpp>

namespace qex::asep {

using coxeter::Parabolic;
using coxeter::Permutation;

LatticeSubset LatticeSubset::integers() {
  LatticeSubset z;
  z.whole_line = true;
  return z;
}

LatticeSubset LatticeSubset::interval(Position lo, Position hi) {
  LatticeSubset z;
  z.intervals.emplace_back(lo, hi);
  z.validate();
  return z;
}

LatticeSubset LatticeSubset::blocks(const std::vector<int>& lengths, Position start, int gap) {
  if (gap < 1) throw DomainError("LatticeSubset::blocks: intervals must be separated");
  LatticeSubset z;
  Position at = start;
  for (int len : lengths) {
    if (len < 1) throw DomainError("LatticeSubset::blocks: empty interval");
    z.intervals.emplace_back(at, at + len - 1);
    at += len + gap;
  }
  return z;
}

void LatticeSubset::validate() const {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].first > intervals[i].second) throw DomainError("LatticeSubset: empty interval");
    if (i > 0 && intervals[i].first <= intervals[i - 1].second)
      throw DomainError("LatticeSubset: intervals overlap or are out of order");
  }
}

bool LatticeSubset::contains(Position x) const {
  if (whole_line) return true;
  for (const auto& [lo, hi] : intervals)
    if (x >= lo && x <= hi) return true;
  return false;
}

std::vector<Position> LatticeSubset::sites() const {
  if (whole_line) throw DomainError("LatticeSubset: the whole line has no finite site list");
  std::vector<Position> out;
  for (const auto& [lo, hi] : intervals)
    for (Position x = lo; x <= hi; ++x) out.push_back(x);
  return out;
}

std::size_t LatticeSubset::size() const { return sites().size(); }

int species_at(const Occupation& eta, Position site) {
  auto it = eta.sites.find(site);
  if (it == eta.sites.end()) throw DomainError("species_at: empty site");
  int found = 0;
  for (int j = 0; j < eta.n_species; ++j) {
    if (it->second[j] > 1 || (it->second[j] == 1 && found))
      throw DomainError("species_at: exclusion violated at site " + std::to_string(site));
    if (it->second[j] == 1) found = j + 1;
  }
  return found;
}

std::vector<Occupation> enumerate_states(const LatticeSubset& zone, const std::vector<int>& species_counts) {
  const std::vector<Position> sites = zone.sites();
  const std::vector<int> k = configs::species_vector(species_counts);
  const std::size_t n = k.size();
  if (n > sites.size()) throw DomainError("enumerate_states: more particles than sites");
  std::vector<Occupation> out;
  // choose n sites (mask), then every distinct arrangement of species labels
  std::vector<bool> mask(sites.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    std::vector<Position> chosen;
    for (std::size_t i = 0; i < sites.size(); ++i)
      if (mask[i]) chosen.push_back(sites[i]);
    std::vector<int> labels = k;
    do {
      Occupation eta;
      eta.n_species = static_cast<int>(species_counts.size());
      for (std::size_t i = 0; i < n; ++i) eta.add(chosen[i], labels[i], 1);
      out.push_back(std::move(eta));
    } while (std::next_permutation(labels.begin(), labels.end()));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  std::sort(out.begin(), out.end());
  return out;
}

int config_length(const Occupation& eta) { return coxeter::length(configs::from_occupation(eta).sigma); }

Parabolic position_blocks(const LatticeSubset& zone) {
  std::vector<int> parts;
  for (auto it = zone.intervals.rbegin(); it != zone.intervals.rend(); ++it)
    parts.push_back(static_cast<int>(it->second - it->first + 1));
  return Parabolic(qcalc::Composition(parts));
}

Occupation occupation_of(const Permutation& sigma, const LatticeSubset& zone) {
  std::vector<Position> sites = zone.sites();
  if (static_cast<int>(sites.size()) != sigma.size())
    throw DomainError("occupation_of: subset is not fully occupied by this permutation");
  std::reverse(sites.begin(), sites.end());
  TazrpConfig c{Positions(sites.begin(), sites.end()), std::vector<int>(sites.size(), 1), sigma};
  return configs::to_occupation(c);
}

double TruncatedSolution::probability(const Occupation& eta) const {
  const std::size_t i = states.find(eta);
  return i == states.size() ? 0.0 : p[i];
}

double TruncatedSolution::probability(const TazrpConfig& c) const { return probability(configs::to_occupation(c)); }

double truncation_bound(int n_particles, double q, double t, int w) {
  if (t == 0.0) return 0.0;
  const boost::math::poisson_distribution<double> jumps((1.0 + q) * t);
  return n_particles * boost::math::cdf(boost::math::complement(jumps, static_cast<double>(w)));
}

TruncatedSolution solve_master_truncated(const tazrp::QExchangeableInit& init, double t, int w, double q, double tol,
                                         ctmc::Method method) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("solve_master_truncated: q must lie in [0,1)");
  if (t < 0) throw DomainError("solve_master_truncated: negative time");
  if (w < 0) throw DomainError("solve_master_truncated: negative window");
  for (std::size_t i = 1; i < init.y.size(); ++i)
    if (init.y[i] >= init.y[i - 1]) throw DomainError("solve_master_truncated: y must be strictly decreasing");
  TruncatedSolution sol;
  sol.eps_trunc = truncation_bound(static_cast<int>(init.y.size()), q, t, w);
  if (sol.eps_trunc > tol)
    throw DomainError("solve_master_truncated: window too small for the requested tolerance");
  const Position lo = *std::min_element(init.y.begin(), init.y.end()) - w;
  const Position hi = *std::max_element(init.y.begin(), init.y.end()) + w;
  sol.window = LatticeSubset::interval(lo, hi);
  sol.states = markov::StateIndex(enumerate_states(sol.window, init.species_counts));
  const auto gen = build_generator<double>(sol.states, q, LatticeSubset::integers());
  std::vector<double> p0(sol.states.size(), 0.0);
  for (const auto& [s, weight] : init.occupation_law(q)) p0[sol.states.find(s)] += weight;
  sol.p = ctmc::transient(gen, p0, t, method);
  double kept = 0.0;
  for (double v : sol.p) kept += v;
  sol.escaped = 1.0 - kept;
  return sol;
}

markov::Empirical gillespie_asep(const tazrp::QExchangeableInit& init, double t, std::uint64_t n_traj,
                                 std::uint64_t seed, const LatticeSubset& zone, double q, int workers) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("gillespie_asep: q must lie in [0,1)");
  auto fn = [&](const Occupation& s) { return transitions<double>(s, q, zone); };
  return markov::simulate(init.occupation_law(q), fn, t, n_traj, seed, workers);
}

markov::Empirical gillespie_asep(const tazrp::QExchangeableInit& init, double t, std::uint64_t n_traj,
                                 std::uint64_t seed, double q, int workers) {
  return gillespie_asep(init, t, n_traj, seed, LatticeSubset::integers(), q, workers);
}

markov::LumpabilityReport check_lumpability(const std::vector<Occupation>& states, double q,
                                            const LatticeSubset& zone, const markov::SpeciesPartition& pi,
                                            double tol) {
  auto fn = [&](const Occupation& s) { return transitions<double>(s, q, zone); };
  return markov::check_lumpability(states, fn, fn, pi, tol);
}

}  // namespace qex::asep
