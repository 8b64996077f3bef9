#pragma once

// Model-independent pieces shared by the particle systems: generators built
// from a transition function over occupations, strong lumpability of species
// merges, and Gillespie simulation with per-trajectory streams.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qex/configs.hpp"
#include "qex/ctmc.hpp"

namespace qex::markov {

using configs::Occupation;

template <class Real>
using Transitions = std::vector<std::pair<Occupation, Real>>;

template <class Real>
using TransitionFn = std::function<Transitions<Real>(const Occupation&)>;

/// Enumerated state set with a reverse index.
class StateIndex {
 public:
  StateIndex() = default;
  explicit StateIndex(std::vector<Occupation> states);

  std::size_t size() const { return states_.size(); }
  const Occupation& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<Occupation>& states() const { return states_; }
  /// Index of `s`, or size() when absent.
  std::size_t find(const Occupation& s) const;
  bool contains(const Occupation& s) const { return find(s) != size(); }

 private:
  std::vector<Occupation> states_;
  std::map<Occupation, std::size_t> index_;
};

/// Rates to states outside `states` count toward the exit rate only.
template <class Real>
ctmc::SparseGenerator<Real> build_generator(const StateIndex& states, const TransitionFn<Real>& fn) {
  ctmc::SparseGenerator<Real> g;
  g.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (auto& [to, rate] : fn(states[i])) {
      if (rate == Real(0)) continue;
      g.exit_rate[i] += rate;
      const std::size_t j = states.find(to);
      if (j != states.size()) g.out[i].emplace_back(j, rate);
    }
  }
  return g;
}

/// Ordered partition of species 1..n into consecutive blocks, given by block sizes.
struct SpeciesPartition {
  std::vector<int> block_sizes;

  /// Accepts explicit label blocks; throws DomainError unless they are
  /// consecutive, ordered, and cover 1..n.
  static SpeciesPartition from_blocks(const std::vector<std::vector<int>>& blocks, int n_species);
  int n_fine() const;
  int n_coarse() const { return static_cast<int>(block_sizes.size()); }
  /// Coarse label (1-based) of fine species j (1-based).
  int coarse_of(int j) const;
};

Occupation project(const Occupation& eta, const SpeciesPartition& pi);

struct LumpabilityReport {
  bool lumpable = true;
  double max_defect = 0.0;
  std::size_t states_checked = 0;
};

/// For every fine state psi: the fine rates from psi aggregated by coarse
/// image equal the coarse rates out of project(psi), excluding moves that
/// stay inside the fiber.
LumpabilityReport check_lumpability(const std::vector<Occupation>& fine_states, const TransitionFn<double>& fine,
                                    const TransitionFn<double>& coarse, const SpeciesPartition& pi,
                                    double tol = 1e-12);

/// Empirical law at a fixed time.
struct Empirical {
  std::uint64_t n_traj = 0;
  std::map<Occupation, std::uint64_t> counts;

  double frequency(const Occupation& s) const;
  /// Binomial standard error sqrt(p(1-p)/n) of frequency(s).
  double std_error(const Occupation& s) const;
  void merge(const Empirical& other);
  friend bool operator==(const Empirical&, const Empirical&) = default;
};

/// Gillespie simulation to time t. Trajectory i draws from
/// trajectory_engine(seed, i), so results do not depend on `workers`.
Empirical simulate(const std::vector<std::pair<Occupation, double>>& init_law, const TransitionFn<double>& fn,
                   double t, std::uint64_t n_traj, std::uint64_t seed, int workers);

}  // namespace qex::markov
