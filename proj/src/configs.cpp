#include "qex/configs.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qex/error.hpp"

namespace qex::configs {

using coxeter::Parabolic;
using coxeter::Permutation;

int Occupation::total() const {
  int t = 0;
  for (const auto& [site, counts] : sites)
    for (int c : counts) t += c;
  return t;
}

std::vector<int> Occupation::species_totals() const {
  std::vector<int> out(static_cast<std::size_t>(n_species), 0);
  for (const auto& [site, counts] : sites)
    for (int j = 0; j < n_species; ++j) out[j] += counts[j];
  return out;
}

int Occupation::count(Position site, int species) const {
  auto it = sites.find(site);
  return it == sites.end() ? 0 : it->second[species - 1];
}

void Occupation::add(Position site, int species, int delta) {
  if (species < 1 || species > n_species) throw DomainError("Occupation::add: species out of range");
  if (count(site, species) + delta < 0) throw DomainError("Occupation::add: negative count");
  auto& counts = sites[site];
  if (counts.empty()) counts.assign(static_cast<std::size_t>(n_species), 0);
  counts[species - 1] += delta;
  if (std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; })) sites.erase(site);
}

qcalc::Composition composition_of(const Positions& x) {
  std::vector<int> parts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && x[i] > x[i - 1]) throw DomainError("composition_of: positions are not weakly decreasing");
    if (i > 0 && x[i] == x[i - 1])
      ++parts.back();
    else
      parts.push_back(1);
  }
  return qcalc::Composition(std::move(parts));
}

std::vector<int> species_vector(const std::vector<int>& counts) {
  std::vector<int> k;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] < 0) throw DomainError("species_vector: negative count");
    k.insert(k.end(), static_cast<std::size_t>(counts[j]), static_cast<int>(j) + 1);
  }
  return k;
}

Parabolic species_parabolic(const std::vector<int>& counts) {
  return Parabolic(qcalc::Composition(counts));
}

Parabolic site_parabolic(const Positions& x) { return Parabolic(composition_of(x)); }

std::vector<int> species_at_positions(const TazrpConfig& c) {
  const std::vector<int> k = species_vector(c.species_counts);
  std::vector<int> out(c.x.size());
  for (int i = 1; i <= c.size(); ++i) out[i - 1] = k[c.sigma(i) - 1];
  return out;
}

namespace {

void check_shape(const TazrpConfig& c) {
  const int total = std::accumulate(c.species_counts.begin(), c.species_counts.end(), 0);
  if (total != c.size()) throw DomainError("config: species counts do not sum to the particle number");
  if (c.sigma.size() != c.size()) throw DomainError("config: sigma has the wrong size");
  for (int n : c.species_counts)
    if (n < 1) throw DomainError("config: every species count must be >= 1");
}

}  // namespace

void validate(const TazrpConfig& c) {
  check_shape(c);
  const Parabolic h = site_parabolic(c.x);
  const Parabolic hp = species_parabolic(c.species_counts);
  if (!coxeter::is_double_distinguished(c.sigma, hp, h))
    throw DomainError("config: sigma is not the minimal double coset representative");
}

void validate_asep(const TazrpConfig& c) {
  check_shape(c);
  for (std::size_t i = 1; i < c.x.size(); ++i)
    if (c.x[i] >= c.x[i - 1]) throw DomainError("ASEP config: positions must be strictly decreasing");
  if (!coxeter::is_right_distinguished(c.sigma, species_parabolic(c.species_counts)))
    throw DomainError("ASEP config: sigma is not the minimal right coset representative");
}

Occupation to_occupation(const TazrpConfig& c) {
  check_shape(c);
  Occupation eta;
  eta.n_species = static_cast<int>(c.species_counts.size());
  const std::vector<int> sp = species_at_positions(c);
  for (std::size_t i = 0; i < c.x.size(); ++i) eta.add(c.x[i], sp[i], 1);
  return eta;
}

TazrpConfig canonicalize(const Positions& x, const Permutation& sigma, const std::vector<int>& counts) {
  TazrpConfig c{x, counts, sigma};
  check_shape(c);
  c.sigma = coxeter::min_double_rep(sigma, species_parabolic(counts), site_parabolic(x));
  return c;
}

TazrpConfig from_occupation(const Occupation& eta) {
  const std::vector<int> totals = eta.species_totals();
  TazrpConfig c;
  c.species_counts = totals;
  std::vector<int> next(totals.size(), 0);  // next value to hand out per species (0-based)
  int acc = 0;
  for (std::size_t j = 0; j < totals.size(); ++j) {
    next[j] = acc;
    acc += totals[j];
  }
  std::vector<int> oneline;
  for (auto it = eta.sites.rbegin(); it != eta.sites.rend(); ++it) {
    for (int j = 0; j < eta.n_species; ++j) {
      for (int r = 0; r < it->second[j]; ++r) {
        c.x.push_back(it->first);
        oneline.push_back(++next[j]);
      }
    }
  }
  c.sigma = Permutation::from_oneline(oneline);
  if (!c.x.empty()) check_shape(c);
  return c;
}

LMatrix l_counts(const TazrpConfig& c) {
  const std::vector<int> sp = species_at_positions(c);
  LMatrix out;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    if (i == 0 || c.x[i] != c.x[i - 1]) out.emplace_back(c.species_counts.size(), 0);
    ++out.back()[sp[i] - 1];
  }
  return out;
}

std::string render(const Occupation& eta) {
  std::size_t height = 0;
  std::vector<std::vector<std::string>> cols;
  std::vector<std::string> labels;
  for (const auto& [site, counts] : eta.sites) {
    std::vector<std::string> col;
    for (int j = 0; j < eta.n_species; ++j)
      for (int r = 0; r < counts[j]; ++r) col.push_back(std::to_string(j + 1));
    height = std::max(height, col.size());
    cols.push_back(std::move(col));
    labels.push_back(std::to_string(site));
  }
  std::size_t width = 1;
  for (const auto& l : labels) width = std::max(width, l.size());
  for (const auto& col : cols)
    for (const auto& s : col) width = std::max(width, s.size());
  auto pad = [&](const std::string& s) { return std::string(width - s.size(), ' ') + s; };

  std::ostringstream os;
  for (std::size_t row = height; row-- > 0;) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) os << ' ';
      os << pad(row < cols[c].size() ? cols[c][row] : "");
    }
    os << '\n';
  }
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (c) os << ' ';
    os << pad(labels[c]);
  }
  os << '\n';
  return os.str();
}

nlohmann::json to_json(const TazrpConfig& c) {
  return {{"x", c.x}, {"species_counts", c.species_counts}, {"sigma", c.sigma.inverse_oneline()}};
}

TazrpConfig config_from_json(const nlohmann::json& j) {
  try {
    TazrpConfig c;
    c.x = j.at("x").get<Positions>();
    c.species_counts = j.at("species_counts").get<std::vector<int>>();
    if (j.contains("sigma"))
      c.sigma = Permutation::from_inverse_oneline(j.at("sigma").get<std::vector<int>>());
    else
      c.sigma = Permutation::identity(static_cast<int>(c.x.size()));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config JSON: ") + e.what());
  }
}

}  // namespace qex::configs
