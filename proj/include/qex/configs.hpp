#pragma once

// Particle configurations: a sorted position vector x paired with a
// permutation sigma, and the equivalent site-occupation field.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "qex/coxeter.hpp"
#include "qex/qcalc.hpp"

namespace qex::configs {

using Position = std::int64_t;
using Positions = std::vector<Position>;

/// (x, sigma) with x weakly decreasing and sigma in D_{H',H}, where
/// H' = S(species_counts) and H = S(m(x)). The particle at position index i
/// has species k_{sigma(i)}.
struct TazrpConfig {
  Positions x;
  std::vector<int> species_counts;  // N_1, ..., N_n, each >= 1
  coxeter::Permutation sigma;

  int size() const { return static_cast<int>(x.size()); }
  friend bool operator==(const TazrpConfig&, const TazrpConfig&) = default;
  friend auto operator<=>(const TazrpConfig&, const TazrpConfig&) = default;
};

/// Site -> per-species particle counts (index 0 is species 1). Only occupied
/// sites are stored.
struct Occupation {
  int n_species = 0;
  std::map<Position, std::vector<int>> sites;

  int total() const;
  std::vector<int> species_totals() const;
  /// Count of species `species` (1-based) at `site`.
  int count(Position site, int species) const;
  /// Adds (delta > 0) or removes one particle; empty sites are erased.
  void add(Position site, int species, int delta);

  friend bool operator==(const Occupation&, const Occupation&) = default;
  friend auto operator<=>(const Occupation&, const Occupation&) = default;
};

/// Run lengths of equal entries; throws DomainError unless weakly decreasing.
qcalc::Composition composition_of(const Positions& x);

/// k_1..k_N: N_1 ones, then N_2 twos, ...
std::vector<int> species_vector(const std::vector<int>& counts);

/// H' = S(N) as a parabolic descriptor.
coxeter::Parabolic species_parabolic(const std::vector<int>& counts);
/// H = S(m(x)).
coxeter::Parabolic site_parabolic(const Positions& x);

/// Species label of the particle at each position index.
std::vector<int> species_at_positions(const TazrpConfig& c);

/// Throws DomainError on an invalid config (unsorted x, mismatched sizes,
/// or sigma outside D_{H',H}).
void validate(const TazrpConfig& c);
/// ASEP variant: x strictly decreasing and sigma in D_{H'}^{-1}.
void validate_asep(const TazrpConfig& c);

Occupation to_occupation(const TazrpConfig& c);

/// Replaces sigma by the minimal element of H' sigma H.
TazrpConfig canonicalize(const Positions& x, const coxeter::Permutation& sigma,
                         const std::vector<int>& counts);

/// Inverse of to_occupation. Every species 1..n must be present.
TazrpConfig from_occupation(const Occupation& eta);

/// L_ij: row i is the i-th occupied site in decreasing position, column j is species j.
using LMatrix = std::vector<std::vector<int>>;
LMatrix l_counts(const TazrpConfig& c);

/// Aligned text columns, one per occupied site in increasing position,
/// species labels stacked bottom-up.
std::string render(const Occupation& eta);

/// { "x": [...], "species_counts": [...], "sigma": [...] }, sigma in two-line
/// notation (entry j is the position index of the j-th labelled particle).
nlohmann::json to_json(const TazrpConfig& c);
TazrpConfig config_from_json(const nlohmann::json& j);

}  // namespace qex::configs
