#include "qex/markov.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "qex/error.hpp"
#include "qex/parallel.hpp"

namespace qex::markov {

StateIndex::StateIndex(std::vector<Occupation> states) : states_(std::move(states)) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second) throw DomainError("StateIndex: duplicate state");
  }
}

std::size_t StateIndex::find(const Occupation& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? states_.size() : it->second;
}

SpeciesPartition SpeciesPartition::from_blocks(const std::vector<std::vector<int>>& blocks, int n_species) {
  SpeciesPartition pi;
  int expect = 1;
  for (const auto& b : blocks) {
    if (b.empty()) throw DomainError("species partition: empty block");
    for (int j : b) {
      if (j != expect) throw DomainError("species partition: blocks must be consecutive and ordered");
      ++expect;
    }
    pi.block_sizes.push_back(static_cast<int>(b.size()));
  }
  if (expect != n_species + 1) throw DomainError("species partition: blocks do not cover all species");
  return pi;
}

int SpeciesPartition::n_fine() const { return std::accumulate(block_sizes.begin(), block_sizes.end(), 0); }

int SpeciesPartition::coarse_of(int j) const {
  int acc = 0;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    acc += block_sizes[b];
    if (j <= acc) return static_cast<int>(b) + 1;
  }
  throw DomainError("species partition: species label out of range");
}

Occupation project(const Occupation& eta, const SpeciesPartition& pi) {
  if (pi.n_fine() != eta.n_species) throw DomainError("project: partition does not match the species count");
  Occupation out;
  out.n_species = pi.n_coarse();
  for (const auto& [site, counts] : eta.sites) {
    std::vector<int> c(static_cast<std::size_t>(out.n_species), 0);
    for (int j = 1; j <= eta.n_species; ++j) c[pi.coarse_of(j) - 1] += counts[j - 1];
    out.sites.emplace(site, std::move(c));
  }
  return out;
}

LumpabilityReport check_lumpability(const std::vector<Occupation>& fine_states, const TransitionFn<double>& fine,
                                    const TransitionFn<double>& coarse, const SpeciesPartition& pi, double tol) {
  LumpabilityReport rep;
  for (const Occupation& psi : fine_states) {
    const Occupation image = project(psi, pi);
    std::map<Occupation, double> agg;
    for (const auto& [to, rate] : fine(psi)) {
      Occupation p = project(to, pi);
      if (p != image) agg[p] += rate;
    }
    std::map<Occupation, double> want;
    for (const auto& [to, rate] : coarse(image))
      if (to != image) want[to] += rate;
    auto defect = [&](const std::map<Occupation, double>& a, const std::map<Occupation, double>& b) {
      for (const auto& [s, r] : a) {
        auto it = b.find(s);
        const double other = it == b.end() ? 0.0 : it->second;
        const double d = std::abs(r - other);
        rep.max_defect = std::max(rep.max_defect, d);
        if (d > tol * std::max(1.0, std::abs(r))) rep.lumpable = false;
      }
    };
    defect(agg, want);
    defect(want, agg);
    ++rep.states_checked;
  }
  return rep;
}

double Empirical::frequency(const Occupation& s) const {
  if (n_traj == 0) return 0.0;
  auto it = counts.find(s);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_traj);
}

double Empirical::std_error(const Occupation& s) const {
  if (n_traj == 0) return 0.0;
  const double p = frequency(s);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n_traj));
}

void Empirical::merge(const Empirical& other) {
  n_traj += other.n_traj;
  for (const auto& [s, c] : other.counts) counts[s] += c;
}

Empirical simulate(const std::vector<std::pair<Occupation, double>>& init_law, const TransitionFn<double>& fn,
                   double t, std::uint64_t n_traj, std::uint64_t seed, int workers) {
  if (n_traj < 1) throw DomainError("simulate: need at least one trajectory");
  if (t < 0) throw DomainError("simulate: negative time");
  if (init_law.empty()) throw DomainError("simulate: empty initial law");
  std::vector<double> w;
  for (const auto& [s, p] : init_law) w.push_back(p);

  workers = std::max(1, workers);
  std::vector<Empirical> parts(static_cast<std::size_t>(workers));
  parallel_for(n_traj, workers, [&](std::uint64_t begin, std::uint64_t end, int worker) {
    Empirical& local = parts[static_cast<std::size_t>(worker)];
    std::discrete_distribution<std::size_t> pick_init(w.begin(), w.end());
    for (std::uint64_t i = begin; i < end; ++i) {
      std::mt19937_64 rng = trajectory_engine(seed, i);
      Occupation cur = init_law[pick_init(rng)].first;
      double clock = 0.0;
      while (true) {
        const Transitions<double> moves = fn(cur);
        double total = 0.0;
        for (const auto& m : moves) total += m.second;
        if (total <= 0.0) break;
        clock += std::exponential_distribution<double>(total)(rng);
        if (clock > t) break;
        double u = std::uniform_real_distribution<double>(0.0, total)(rng);
        std::size_t k = 0;
        while (k + 1 < moves.size() && u >= moves[k].second) {
          u -= moves[k].second;
          ++k;
        }
        cur = moves[k].first;
      }
      ++local.counts[cur];
      ++local.n_traj;
    }
  });
  Empirical out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace qex::markov
