#pragma once

// Multi-species ASEP on a subset of Z: exclusion, right jumps at rate 1 and
// left jumps at rate q. Neighbouring particles of different species swap; the
// lower label moves right at rate 1 and left at rate q.
//
// Templates take the number type so the same code runs in double and in
// exact rational arithmetic.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "qex/configs.hpp"
#include "qex/coxeter.hpp"
#include "qex/ctmc.hpp"
#include "qex/error.hpp"
#include "qex/markov.hpp"
#include "qex/qcalc.hpp"
#include "qex/tazrp.hpp"

namespace qex::asep {

using configs::Occupation;
using configs::Position;
using configs::Positions;
using configs::TazrpConfig;
using qcalc::Rational;

/// Disjoint inclusive intervals in increasing order.
struct LatticeSubset {
  std::vector<std::pair<Position, Position>> intervals;
  bool whole_line = false;

  static LatticeSubset integers();

  static LatticeSubset interval(Position lo, Position hi);
  /// Intervals of the given lengths, in increasing site order from `start`,
  /// separated by `gap` sites that are not in the subset.
  static LatticeSubset blocks(const std::vector<int>& lengths, Position start = 0, int gap = 1);

  /// Throws DomainError unless intervals are nonempty, ordered and disjoint.
  void validate() const;
  bool contains(Position x) const;
  std::vector<Position> sites() const;
  std::size_t size() const;
};

/// Species at an exclusion site; throws DomainError if the site does not
/// hold exactly one particle.
int species_at(const Occupation& eta, Position site);

template <class Real>
markov::Transitions<Real> transitions(const Occupation& eta, const Real& q, const LatticeSubset& zone) {
  markov::Transitions<Real> out;
  for (const auto& [site, counts] : eta.sites) {
    const int a = species_at(eta, site);
    const Position right = site + 1;
    if (zone.contains(right)) {
      auto it = eta.sites.find(right);
      if (it == eta.sites.end()) {
        Occupation to = eta;
        to.add(site, a, -1);
        to.add(right, a, 1);
        out.emplace_back(std::move(to), Real(1));
      } else {
        const int c = species_at(eta, right);
        if (c != a) {
          Occupation to = eta;
          to.add(site, a, -1);
          to.add(right, a, 1);
          to.add(right, c, -1);
          to.add(site, c, 1);
          out.emplace_back(std::move(to), a < c ? Real(1) : q);
        }
      }
    }
    const Position left = site - 1;
    if (zone.contains(left) && !eta.sites.count(left)) {
      Occupation to = eta;
      to.add(site, a, -1);
      to.add(left, a, 1);
      out.emplace_back(std::move(to), q);
    }
  }
  return out;
}

/// Off-diagonal generator entry between two configurations.
template <class Real>
Real masep_rate(const TazrpConfig& from, const TazrpConfig& to, const Real& q, const LatticeSubset& zone) {
  configs::validate_asep(from);
  configs::validate_asep(to);
  const Occupation target = configs::to_occupation(to);
  Real r(0);
  for (const auto& [s, rate] : transitions<Real>(configs::to_occupation(from), q, zone))
    if (s == target) r += rate;
  return r;
}

/// Every exclusion configuration on a finite subset with the given species counts.
std::vector<Occupation> enumerate_states(const LatticeSubset& zone, const std::vector<int>& species_counts);

/// l(sigma) of the canonical (x, sigma): pairs where the higher site holds the larger label.
int config_length(const Occupation& eta);

template <class Real>
ctmc::SparseGenerator<Real> build_generator(const markov::StateIndex& states, const Real& q,
                                            const LatticeSubset& zone) {
  return markov::build_generator<Real>(states, [&](const Occupation& s) { return transitions<Real>(s, q, zone); });
}

template <class Real>
Real power(const Real& q, int n) {
  Real r(1);
  for (int i = 0; i < n; ++i) r *= q;
  return r;
}

template <class Real>
Real q_factorial_at(int n, const Real& q) {
  Real f(1), term(1), acc(0);
  for (int k = 1; k <= n; ++k) {
    acc += term;  // [k]_q = 1 + q + ... + q^{k-1}
    term *= q;
    f *= acc;
  }
  return f;
}

/// q^{l(sigma)} / [N]_q!.
template <class Real>
Real nu_q(const coxeter::Permutation& sigma, const Real& q) {
  return power(q, coxeter::length(sigma)) / q_factorial_at(sigma.size(), q);
}

/// Permutations read off a fully occupied subset, using position indices in
/// decreasing-site order; the Young subgroup of positions belonging to the
/// same interval.
coxeter::Parabolic position_blocks(const LatticeSubset& zone);
Occupation occupation_of(const coxeter::Permutation& sigma, const LatticeSubset& zone);

/// P(tau y) = c(tau) q^{l(y)} / prod_i [L_i]_q!, with tau in D_K and y in W_K.
/// Keys of c must be minimal left coset representatives and c must sum to 1
/// (exactly for Rational, to 1e-12 otherwise).
template <class Real>
std::map<coxeter::Permutation, Real> blocked_measure(const std::map<coxeter::Permutation, Real>& c,
                                                     const coxeter::Parabolic& k, const Real& q) {
  Real total(0);
  for (const auto& [tau, w] : c) {
    if (!coxeter::is_left_distinguished_fast(tau, k))
      throw DomainError("blocked_measure: key is not a minimal coset representative");
    if (w < Real(0)) throw DomainError("blocked_measure: negative weight");
    total += w;
  }
  bool ok = total == Real(1);
  if constexpr (std::is_floating_point_v<Real>) ok = std::abs(total - Real(1)) < Real(1e-12);
  if (!ok) throw DomainError("blocked_measure: weights do not sum to one");
  Real denom(1);
  const qcalc::Composition blocks = k.composition();
  for (int len : blocks.parts()) denom *= q_factorial_at(len, q);
  std::map<coxeter::Permutation, Real> out;
  for (const coxeter::Permutation& sigma : coxeter::enumerate_all(k.n())) {
    const auto f = coxeter::factor_left_coset(sigma, k);
    auto it = c.find(f.rep);
    const Real w = it == c.end() ? Real(0) : it->second;
    out.emplace(sigma, w * power(q, coxeter::length(f.sub)) / denom);
  }
  return out;
}

/// max |(mu L)(s)| for a measure on enumerated states; zero means stationary.
template <class Real>
Real stationarity_residual(const markov::StateIndex& states, const std::vector<Real>& mu, const Real& q,
                           const LatticeSubset& zone) {
  const auto gen = build_generator<Real>(states, q, zone);
  Real worst(0);
  for (const Real& v : gen.left_multiply(mu)) {
    const Real a = v < Real(0) ? Real(-v) : v;
    if (a > worst) worst = a;
  }
  return worst;
}

/// M_S^{(xx')} over the label set D_{H'}^{-1}, rows indexed like `labels`.
template <class Real>
struct ConditionalJumpMatrix {
  std::vector<coxeter::Permutation> labels;
  std::vector<std::vector<Real>> m;
};

/// Position-marginal generator entry L_X(x, x') (diagonal included).
template <class Real>
Real position_rate(const Positions& x, const Positions& x2, const Real& q, const LatticeSubset& zone) {
  Occupation eta;
  eta.n_species = 1;
  for (Position p : x) eta.add(p, 1, 1);
  const auto moves = transitions<Real>(eta, q, zone);
  if (x == x2) {
    Real s(0);
    for (const auto& mv : moves) s -= mv.second;
    return s;
  }
  Occupation target;
  target.n_species = 1;
  for (Position p : x2) target.add(p, 1, 1);
  Real r(0);
  for (const auto& [s, rate] : moves)
    if (s == target) r += rate;
  return r;
}

template <class Real>
ConditionalJumpMatrix<Real> extract_conditional_matrix(const LatticeSubset& zone, const std::vector<int>& counts,
                                                       const Real& q, const Positions& x, const Positions& x2) {
  ConditionalJumpMatrix<Real> out;
  out.labels = coxeter::enumerate_DJ_inverse(configs::species_parabolic(counts));
  const std::size_t n = out.labels.size();
  out.m.assign(n, std::vector<Real>(n, Real(0)));
  const Real lx = position_rate<Real>(x, x2, q, zone);
  if (lx == Real(0)) {
    for (std::size_t i = 0; i < n; ++i) out.m[i][i] = Real(1);
    return out;
  }
  std::map<Occupation, std::size_t> col;
  for (std::size_t j = 0; j < n; ++j) col.emplace(configs::to_occupation(TazrpConfig{x2, counts, out.labels[j]}), j);
  for (std::size_t i = 0; i < n; ++i) {
    const Occupation from = configs::to_occupation(TazrpConfig{x, counts, out.labels[i]});
    Real exit(0);
    for (const auto& [to, rate] : transitions<Real>(from, q, zone)) {
      exit += rate;
      auto it = col.find(to);
      if (it != col.end()) out.m[i][it->second] += rate;
    }
    if (x == x2) out.m[i][i] -= exit;
    for (std::size_t j = 0; j < n; ++j) out.m[i][j] /= lx;
  }
  return out;
}

/// Result of the forward equation on a window with lossy edges.
struct TruncatedSolution {
  markov::StateIndex states;
  std::vector<double> p;
  double eps_trunc = 0.0;
  double escaped = 0.0;
  LatticeSubset window;

  double probability(const Occupation& eta) const;
  double probability(const TazrpConfig& c) const;
};

/// N P(Poisson((1+q)t) > w).
double truncation_bound(int n_particles, double q, double t, int w);

/// Window [min y - w, max y + w]; jumps out of it are lost. Throws
/// DomainError when the truncation bound exceeds `tol`.
TruncatedSolution solve_master_truncated(const tazrp::QExchangeableInit& init, double t, int w, double q,
                                         double tol = 1e-6, ctmc::Method method = ctmc::Method::Auto);

markov::Empirical gillespie_asep(const tazrp::QExchangeableInit& init, double t, std::uint64_t n_traj,
                                 std::uint64_t seed, const LatticeSubset& zone, double q, int workers = 1);

/// Gillespie on Z (no boundary).
markov::Empirical gillespie_asep(const tazrp::QExchangeableInit& init, double t, std::uint64_t n_traj,
                                 std::uint64_t seed, double q, int workers = 1);

markov::LumpabilityReport check_lumpability(const std::vector<Occupation>& states, double q,
                                            const LatticeSubset& zone, const markov::SpeciesPartition& pi,
                                            double tol = 1e-12);

}  // namespace qex::asep
