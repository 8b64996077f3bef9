#include "qex/tazrp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "qex/error.hpp"

namespace qex::tazrp {

using coxeter::Parabolic;
using coxeter::Permutation;

double RateEnv::b_at(Position x) const {
  auto it = b.find(x);
  return it == b.end() ? 1.0 : it->second;
}

bool RateEnv::homogeneous() const {
  return std::all_of(b.begin(), b.end(), [](const auto& kv) { return kv.second == 1.0; });
}

void RateEnv::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("RateEnv: q must lie in (0,1)");
  if (!(b_bound >= 1.0)) throw DomainError("RateEnv: b bound must be at least the default rate 1");
  for (const auto& [site, v] : b)
    if (!(v > 0.0 && v <= b_bound))
      throw DomainError("RateEnv: b at site " + std::to_string(site) + " is outside (0, bound]");
}

double jump_rate(const Occupation& eta, int species, Position y, const RateEnv& env) {
  const int own = eta.count(y, species);
  if (own == 0) return 0.0;
  int ahead = 0;
  for (int i = 1; i < species; ++i) ahead += eta.count(y, i);
  return env.b_at(y) * std::pow(env.q, ahead) * qcalc::q_int_value(own, env.q);
}

double wait_time(const Positions& x, const RateEnv& env) {
  if (x.empty()) throw DomainError("wait_time: no particles");
  const qcalc::Composition m = configs::composition_of(x);
  double total = 0.0;
  std::size_t pos = 0;
  for (int part : m.parts()) {
    total += env.b_at(x[pos]) * qcalc::q_int_value(part, env.q);
    pos += static_cast<std::size_t>(part);
  }
  return total;
}

markov::Transitions<double> transitions(const Occupation& eta, const RateEnv& env) {
  markov::Transitions<double> out;
  for (const auto& [site, counts] : eta.sites) {
    for (int j = 1; j <= eta.n_species; ++j) {
      if (counts[j - 1] == 0) continue;
      Occupation to = eta;
      to.add(site, j, -1);
      to.add(site + 1, j, 1);
      out.emplace_back(std::move(to), jump_rate(eta, j, site, env));
    }
  }
  return out;
}

LeftMove left_move_decomposition(const TazrpConfig& c, int k) {
  configs::validate(c);
  if (std::any_of(c.species_counts.begin(), c.species_counts.end(), [](int n) { return n != 1; }))
    throw DomainError("left_move_decomposition: requires one particle per species");
  const int n = c.size();
  if (k < 1 || k > n) throw DomainError("left_move_decomposition: particle index out of range");
  const Parabolic h = configs::site_parabolic(c.x);

  int d = -1;
  while (h.has_simple(k + d + 1)) ++d;

  LeftMove m;
  m.sigma_bar = c.sigma;
  // Cycle the particle at index k to the end of its block.
  for (int i = k; i <= k + d; ++i) m.sigma_bar = m.sigma_bar.times_simple(i);
  m.moved_index = k + d + 1;
  m.x_minus = c.x;
  m.x_minus[m.moved_index - 1] -= 1;
  m.source_site = m.x_minus[m.moved_index - 1];

  const Parabolic h_hat = configs::site_parabolic(m.x_minus);
  m.sigma_hat = coxeter::min_double_rep(m.sigma_bar, Parabolic::trivial(n), h_hat);
  m.rate_exp = coxeter::length(m.sigma_bar) - coxeter::length(m.sigma_hat);
  return m;
}

double left_move_rate(const LeftMove& m, const RateEnv& env) {
  return env.b_at(m.source_site) * std::pow(env.q, m.rate_exp);
}

std::vector<Positions> sorted_box(const Positions& lo, const Positions& hi) {
  if (lo.size() != hi.size()) throw DomainError("sorted_box: bounds differ in length");
  std::vector<Positions> out;
  Positions cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == lo.size()) {
      out.push_back(cur);
      return;
    }
    Position top = hi[i];
    if (i > 0) top = std::min(top, cur.back());
    for (Position v = lo[i]; v <= top; ++v) {
      cur.push_back(v);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<TazrpConfig> reachable_states(const Positions& y, const Positions& x_target,
                                          const std::vector<int>& species_counts) {
  if (y.size() != x_target.size()) throw DomainError("reachable_states: size mismatch");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x_target[i] < y[i]) throw DomainError("reachable_states: target lies below the start in sorted order");
  configs::composition_of(y);
  configs::composition_of(x_target);
  const Parabolic hp = configs::species_parabolic(species_counts);
  std::map<std::vector<int>, std::vector<Permutation>> reps;
  std::vector<TazrpConfig> out;
  for (const Positions& z : sorted_box(y, x_target)) {
    const qcalc::Composition m = configs::composition_of(z);
    auto it = reps.find(m.parts());
    if (it == reps.end()) it = reps.emplace(m.parts(), coxeter::enumerate_DJK(hp, Parabolic(m))).first;
    for (const Permutation& s : it->second) out.push_back(TazrpConfig{z, species_counts, s});
  }
  return out;
}

ctmc::SparseGenerator<double> build_generator(const markov::StateIndex& states, const RateEnv& env) {
  return markov::build_generator<double>(states, [&](const Occupation& s) { return transitions(s, env); });
}

qcalc::QPoly QExchangeableInit::weight(const Permutation& sigma) const {
  qcalc::QPoly w = qcalc::QPoly::monomial(static_cast<std::size_t>(coxeter::length(sigma)));
  if (weighting == InitWeight::Literal) return w;
  qcalc::QPoly den = qcalc::QPoly::constant(1);
  for (const auto& row : configs::l_counts(TazrpConfig{y, species_counts, sigma}))
    for (int l : row) den *= qcalc::q_factorial(static_cast<unsigned>(l));
  for (int n : species_counts) w *= qcalc::q_factorial(static_cast<unsigned>(n));
  return w.exact_div(den);
}

qcalc::QPoly QExchangeableInit::normalization() const {
  const Parabolic hp = configs::species_parabolic(species_counts);
  qcalc::QPoly z;
  for (const Permutation& s : coxeter::enumerate_DJK(hp, configs::site_parabolic(y))) z += weight(s);
  return z;
}

std::vector<std::pair<TazrpConfig, double>> QExchangeableInit::law(double q) const {
  const Parabolic hp = configs::species_parabolic(species_counts);
  const auto reps = coxeter::enumerate_DJK(hp, configs::site_parabolic(y));
  const double z = normalization().eval(q);
  std::vector<std::pair<TazrpConfig, double>> out;
  for (const Permutation& s : reps) out.emplace_back(TazrpConfig{y, species_counts, s}, weight(s).eval(q) / z);
  return out;
}

std::vector<std::pair<Occupation, double>> QExchangeableInit::occupation_law(double q) const {
  std::vector<std::pair<Occupation, double>> out;
  for (const auto& [c, p] : law(q)) out.emplace_back(configs::to_occupation(c), p);
  return out;
}

double MasterSolution::probability(const Occupation& eta) const {
  const std::size_t i = states.find(eta);
  return i == states.size() ? 0.0 : p[i];
}

double MasterSolution::probability(const TazrpConfig& c) const {
  return probability(configs::to_occupation(c));
}

MasterSolution solve_master(const QExchangeableInit& init, double t, const Positions& x_max, const RateEnv& env,
                            ctmc::Method method) {
  env.validate();
  if (t < 0) throw DomainError("solve_master: negative time");
  std::vector<Occupation> occ;
  for (const TazrpConfig& c : reachable_states(init.y, x_max, init.species_counts))
    occ.push_back(configs::to_occupation(c));
  MasterSolution sol;
  sol.states = markov::StateIndex(std::move(occ));
  const auto gen = build_generator(sol.states, env);
  std::vector<double> p0(sol.states.size(), 0.0);
  for (const auto& [s, w] : init.occupation_law(env.q)) p0[sol.states.find(s)] += w;
  sol.p = ctmc::transient(gen, p0, t, method);
  double kept = 0.0;
  for (double v : sol.p) kept += v;
  sol.escaped = 1.0 - kept;
  return sol;
}

std::vector<double> solve_master(const QExchangeableInit& init, double t, const std::vector<TazrpConfig>& targets,
                                 const RateEnv& env) {
  Positions box = init.y;
  std::vector<bool> reachable;
  for (const TazrpConfig& c : targets) {
    if (c.x.size() != init.y.size()) throw DomainError("solve_master: target has the wrong particle number");
    bool ok = true;
    for (std::size_t i = 0; i < c.x.size(); ++i) ok = ok && c.x[i] >= init.y[i];
    reachable.push_back(ok);
    if (ok)
      for (std::size_t i = 0; i < c.x.size(); ++i) box[i] = std::max(box[i], c.x[i]);
  }
  const MasterSolution sol = solve_master(init, t, box, env);
  std::vector<double> out;
  for (std::size_t i = 0; i < targets.size(); ++i) out.push_back(reachable[i] ? sol.probability(targets[i]) : 0.0);
  return out;
}

markov::LumpabilityReport check_lumpability(const std::vector<Occupation>& states, const RateEnv& env,
                                            const markov::SpeciesPartition& pi, double tol) {
  auto fn = [&](const Occupation& s) { return transitions(s, env); };
  return markov::check_lumpability(states, fn, fn, pi, tol);
}

double stationary_single(int k, double alpha, const RateEnv& env) {
  if (!env.homogeneous()) throw DomainError("stationary_single: requires homogeneous rates");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("stationary_single: alpha must lie in [0,1)");
  if (k < 0) throw DomainError("stationary_single: negative count");
  const double q = env.q;
  return qcalc::q_pochhammer_inf(alpha, q) * std::pow(alpha, k) / qcalc::q_pochhammer(q, static_cast<unsigned>(k), q);
}

namespace {

double weight_of(const Occupation& eta, double q) {
  const TazrpConfig c = configs::from_occupation(eta);
  double w = std::pow(q, coxeter::length(c.sigma));
  for (const auto& [site, counts] : eta.sites)
    for (int n : counts) w /= qcalc::q_factorial_value(n, q);
  return w;
}

}  // namespace

qcalc::QPoly multi_stationary_denominator(const TazrpConfig& c) {
  qcalc::QPoly d = qcalc::QPoly::constant(1);
  for (const auto& row : configs::l_counts(c))
    for (int n : row) d *= qcalc::q_factorial(static_cast<unsigned>(n));
  return d;
}

double multi_stationary_weight(const TazrpConfig& c, double q, std::optional<double> alpha) {
  configs::validate(c);
  double w = weight_of(configs::to_occupation(c), q);
  if (alpha) w *= std::pow(*alpha / (1.0 - q), c.size());
  return w;
}

BalanceSides balance_identity(const Occupation& eta, Position site, int species) {
  if (eta.count(site, species) == 0) throw DomainError("balance_identity: no such particle");
  Occupation moved = eta;
  moved.add(site, species, -1);
  moved.add(site - 1, species, 1);
  BalanceSides s;
  s.lhs = coxeter::length(configs::from_occupation(moved).sigma);
  s.rhs = coxeter::length(configs::from_occupation(eta).sigma);
  for (int i = 1; i < species; ++i) s.lhs += eta.count(site - 1, i);
  for (int i = species + 1; i <= eta.n_species; ++i) s.rhs += eta.count(site, i);
  return s;
}

double formal_stationarity_residual(const Occupation& eta, double q) {
  RateEnv env;
  env.q = q;
  double inflow = 0.0;
  double wt = 0.0;
  for (const auto& [site, counts] : eta.sites) {
    wt += qcalc::q_int_value(std::accumulate(counts.begin(), counts.end(), 0), q);
    for (int j = 1; j <= eta.n_species; ++j) {
      if (counts[j - 1] == 0) continue;
      Occupation prev = eta;
      prev.add(site, j, -1);
      prev.add(site - 1, j, 1);
      inflow += weight_of(prev, q) * jump_rate(prev, j, site - 1, env);
    }
  }
  const double out = weight_of(eta, q) * wt;
  return std::abs(inflow - out) / out;
}

double ring_stationarity_residual(int sites, int n_particles, double q) {
  if (sites < 2 || n_particles < 0) throw DomainError("ring_stationarity_residual: bad ring");
  std::vector<Occupation> states;
  std::vector<int> cur(static_cast<std::size_t>(sites), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == sites - 1) {
      cur[i] = left;
      Occupation eta;
      eta.n_species = 1;
      for (int x = 0; x < sites; ++x)
        if (cur[x]) eta.sites[x] = {cur[x]};
      states.push_back(std::move(eta));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n_particles);
  const markov::StateIndex index(states);
  auto fn = [&](const Occupation& eta) {
    markov::Transitions<double> out;
    for (const auto& [site, counts] : eta.sites) {
      Occupation to = eta;
      to.add(site, 1, -1);
      to.add((site + 1) % sites, 1, 1);
      out.emplace_back(std::move(to), qcalc::q_int_value(counts[0], q));
    }
    return out;
  };
  const auto gen = markov::build_generator<double>(index, fn);
  std::vector<double> mu;
  for (const Occupation& eta : index.states()) {
    double w = 1.0;
    for (const auto& [site, counts] : eta.sites) w /= qcalc::q_factorial_value(counts[0], q);
    mu.push_back(w);
  }
  const auto r = gen.left_multiply(mu);
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst / *std::max_element(mu.begin(), mu.end());
}

markov::Empirical gillespie(const QExchangeableInit& init, double t, std::uint64_t n_traj, std::uint64_t seed,
                            const RateEnv& env, int workers) {
  env.validate();
  auto fn = [&](const Occupation& s) { return transitions(s, env); };
  return markov::simulate(init.occupation_law(env.q), fn, t, n_traj, seed, workers);
}

}  // namespace qex::tazrp
