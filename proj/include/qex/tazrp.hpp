#pragma once

// Multi-species q-TAZRP: particles stack on sites of Z and jump one step to
// the right. A species-j particle at site y leaves at rate
// b_y q^{eta_1 + ... + eta_{j-1}} [eta_j]_q, so lower labels have priority.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qex/configs.hpp"
#include "qex/coxeter.hpp"
#include "qex/ctmc.hpp"
#include "qex/markov.hpp"
#include "qex/qcalc.hpp"

namespace qex::tazrp {

using configs::Occupation;
using configs::Position;
using configs::Positions;
using configs::TazrpConfig;

struct RateEnv {
  double q = 0.5;
  /// Sites absent from the map have b = 1.
  std::map<Position, double> b;
  /// Declared uniform bound on b.
  double b_bound = 100.0;

  double b_at(Position x) const;
  bool homogeneous() const;
  /// Throws DomainError unless 0 < q < 1 and 0 < b <= b_bound.
  void validate() const;
};

double jump_rate(const Occupation& eta, int species, Position y, const RateEnv& env);

/// Sum over occupied sites of b_x [m_x]_q.
double wait_time(const Positions& x, const RateEnv& env);

/// All single jumps out of eta on Z.
markov::Transitions<double> transitions(const Occupation& eta, const RateEnv& env);

/// Predecessor of (x, sigma) obtained by moving the particle at position
/// index k one step to the left, for species counts (1, ..., 1).
struct LeftMove {
  Positions x_minus;
  coxeter::Permutation sigma_bar;
  coxeter::Permutation sigma_hat;
  int rate_exp = 0;
  /// The site the particle jumps from in (x_minus, sigma_hat).
  Position source_site = 0;
  /// Position index (1-based) of the moved particle after the cyclic shift.
  int moved_index = 0;
};
LeftMove left_move_decomposition(const TazrpConfig& c, int k);
/// Generator entry from (x_minus, sigma_hat) to (x, sigma).
double left_move_rate(const LeftMove& m, const RateEnv& env);

/// Weakly decreasing z with lo <= z <= hi componentwise.
std::vector<Positions> sorted_box(const Positions& lo, const Positions& hi);

/// Every (z, sigma) with y <= z <= x_target and sigma in D_{H',H(z)}.
std::vector<TazrpConfig> reachable_states(const Positions& y, const Positions& x_target,
                                          const std::vector<int>& species_counts);

ctmc::SparseGenerator<double> build_generator(const markov::StateIndex& states, const RateEnv& env);

/// How the initial law on (y, sigma), sigma in D_{H',H(y)}, is weighted.
///  - Literal:   q^{l(sigma)} / Z.
///  - Projected: q^{l(sigma)} prod_j [N_j]_q! / prod_ij [L_ij]_q!, normalized;
///    the image of the distinct-species law q^{l(sigma0)} / Z0 under merging
///    labels into species. The two agree when no site holds two particles
///    of one species.
enum class InitWeight { Literal, Projected };

struct QExchangeableInit {
  Positions y;
  std::vector<int> species_counts;
  InitWeight weighting = InitWeight::Literal;

  /// Unnormalized weight of one sigma as a polynomial in q.
  qcalc::QPoly weight(const coxeter::Permutation& sigma) const;

  qcalc::QPoly normalization() const;
  std::vector<std::pair<TazrpConfig, double>> law(double q) const;
  std::vector<std::pair<Occupation, double>> occupation_law(double q) const;
};

struct MasterSolution {
  markov::StateIndex states;
  std::vector<double> p;
  /// Mass that left the box y <= z <= x_max.
  double escaped = 0.0;

  double probability(const Occupation& eta) const;
  double probability(const TazrpConfig& c) const;
};

/// Forward equation on the box y <= z <= x_max. Positions only increase, so
/// every state in the box is computed exactly; leaving mass is reported.
MasterSolution solve_master(const QExchangeableInit& init, double t, const Positions& x_max, const RateEnv& env,
                            ctmc::Method method = ctmc::Method::Auto);
/// Box spanned by the targets.
std::vector<double> solve_master(const QExchangeableInit& init, double t, const std::vector<TazrpConfig>& targets,
                                 const RateEnv& env);

/// Species-merge lumpability on enumerated states.
markov::LumpabilityReport check_lumpability(const std::vector<Occupation>& states, const RateEnv& env,
                                            const markov::SpeciesPartition& pi, double tol = 1e-12);

/// (alpha; q)_inf alpha^k / (q; q)_k.
double stationary_single(int k, double alpha, const RateEnv& env);

/// q^{l(sigma)} / prod_{s,j} [m_s^{(j)}]_q!, times (alpha / (1 - q))^N when
/// alpha is given.
double multi_stationary_weight(const TazrpConfig& c, double q, std::optional<double> alpha = std::nullopt);
/// prod_{s,j} [m_s^{(j)}]_q! as a polynomial; the weight is q^{l(sigma)} over this.
qcalc::QPoly multi_stationary_denominator(const TazrpConfig& c);

/// Both sides of l(hat) + sum_{i<j} m_{below}^{(i)} = l(sigma) + sum_{i>j} m_{site}^{(i)} for moving the
/// species-j particle at `site` one step to the left.
struct BalanceSides {
  long lhs = 0;
  long rhs = 0;
};
BalanceSides balance_identity(const Occupation& eta, Position site, int species);

/// |sum_in mu(xi') L(xi', xi) - mu(xi) wt(xi)| / (mu(xi) wt(xi)) at a single
/// configuration on Z, mu = multi_stationary_weight (homogeneous b = 1).
double formal_stationarity_residual(const Occupation& eta, double q);

/// Single-species q-TAZRP on a ring of `sites` sites with n particles:
/// max |(mu L)(eta)| / max mu for mu = prod_x 1 / [eta_x]_q!.
double ring_stationarity_residual(int sites, int n_particles, double q);

/// Gillespie trajectories started from the q-exchangeable law.
markov::Empirical gillespie(const QExchangeableInit& init, double t, std::uint64_t n_traj, std::uint64_t seed,
                            const RateEnv& env, int workers = 1);

}  // namespace qex::tazrp
