#include "qex/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "qex/asep.hpp"
#include "qex/configs.hpp"
#include "qex/coxeter.hpp"
#include "qex/error.hpp"
#include "qex/integrals.hpp"
#include "qex/markov.hpp"
#include "qex/qcalc.hpp"
#include "qex/tazrp.hpp"

namespace qex::verify {

using configs::Occupation;
using configs::Position;
using configs::Positions;
using configs::TazrpConfig;
using coxeter::Notation;
using coxeter::Parabolic;
using coxeter::Permutation;
using qcalc::Composition;
using qcalc::QPoly;
using qcalc::Rational;

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(assertions.begin(), assertions.end(), [](const Assertion& a) { return !a.passed; }));
}

void Report::check(std::string name, bool ok, std::string detail) {
  assertions.push_back(Assertion{std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)});
}

void Report::bound(std::string name, double value, double tolerance, std::string detail) {
  const bool ok = std::isfinite(value) && value <= tolerance;
  assertions.push_back(Assertion{std::move(name), ok, value, tolerance, std::move(detail)});
}

void Report::append(const Report& other) {
  for (Assertion a : other.assertions) {
    a.name = other.suite + "/" + a.name;
    assertions.push_back(std::move(a));
  }
}

nlohmann::json Report::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const Assertion& a : assertions) {
    list.push_back({{"name", a.name},
                    {"passed", a.passed},
                    {"value", a.value},
                    {"tolerance", a.tolerance},
                    {"detail", a.detail}});
  }
  return {{"suite", suite}, {"passed", passed()}, {"assertions", list.size()}, {"failures", failures()},
          {"results", list}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"q-identities",   "coxeter",      "configs",
                                              "lumpability",    "exchangeability", "stationarity",
                                              "formula-vs-oracle", "monte-carlo"};
  return names;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join(const Positions& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// Weakly decreasing positions realizing the site composition m.
Positions positions_of(const Composition& m) {
  Positions x;
  const Position r = static_cast<Position>(m.size());
  for (std::size_t b = 0; b < m.size(); ++b)
    for (int i = 0; i < m[b]; ++i) x.push_back(r - 1 - static_cast<Position>(b));
  return x;
}

QPoly prefactor_poly(const TazrpConfig& c) {
  QPoly num = QPoly::monomial(static_cast<std::size_t>(coxeter::length(c.sigma)));
  for (int n : c.species_counts) num *= qcalc::q_factorial(static_cast<unsigned>(n));
  QPoly den = QPoly::constant(1);
  for (const auto& row : configs::l_counts(c))
    for (int l : row) den *= qcalc::q_factorial(static_cast<unsigned>(l));
  return num.exact_div(den);
}

std::vector<int> ones(int n) { return std::vector<int>(static_cast<std::size_t>(n), 1); }

std::vector<Occupation> tazrp_box_states(int n, Position hi, const std::vector<int>& counts) {
  std::vector<Occupation> out;
  for (const TazrpConfig& c : tazrp::reachable_states(Positions(n, 0), Positions(n, hi), counts))
    out.push_back(configs::to_occupation(c));
  return out;
}

tazrp::RateEnv inhomogeneous_env(double q, Position lo, Position hi) {
  tazrp::RateEnv env;
  env.q = q;
  for (Position k = lo; k <= hi; ++k) env.b[k] = 1.0 + 0.25 * static_cast<double>(((k % 3) + 3) % 3);
  return env;
}

// Spread of q^{-l(sigma)} w(sigma) P(x, sigma) over sigma at each x, relative to the largest entry.
double exchangeability_spread(const std::vector<std::pair<TazrpConfig, double>>& probs, double q,
                              const std::function<double(const TazrpConfig&)>& weight) {
  std::map<Positions, std::pair<double, double>> range;
  for (const auto& [c, p] : probs) {
    const double v = p * weight(c) / std::pow(q, coxeter::length(c.sigma));
    auto [it, fresh] = range.emplace(c.x, std::make_pair(v, v));
    if (!fresh) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  double worst = 0.0;
  for (const auto& [x, lh] : range) worst = std::max(worst, lh.second - lh.first);
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------

Report q_identities(const Options& o) {
  Report r{"q-identities", {}};
  const std::vector<Rational> qs{Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1, 5), Rational(3, 7)};

  bool ok = true;
  for (unsigned a = 0; a <= 12; ++a)
    for (unsigned b = 0; b <= 12; ++b) {
      const QPoly lhs = qcalc::q_int(a) + QPoly::monomial(a) * qcalc::q_int(b);
      ok = ok && lhs == qcalc::q_int(a + b);
      for (const Rational& q : qs) ok = ok && lhs.eval(q) == qcalc::q_int(a + b).eval(q);
    }
  r.check("q-integer addition [a]+q^a[b]=[a+b], a,b<=12", ok, "polynomial and at 5 rational q");

  ok = true;
  QPoly power = QPoly::constant(1);
  for (unsigned k = 0; k <= 12; ++k) {
    if (k > 0) power *= QPoly{1, -1};
    ok = ok && power * qcalc::q_factorial(k) == qcalc::q_pochhammer_q(k);
  }
  r.check("(1-q)^k [k]! = (q;q)_k, k<=12", ok);

  for (int n = 1; n <= o.max_n; ++n) {
    bool qbin = true, division = true, shape = true, subgroup = true, prefactor = true;
    std::size_t cases = 0;
    for (const Composition& m : qcalc::compositions_of(n)) {
      const Parabolic h(m);
      const QPoly multi = qcalc::q_multinomial(m);
      qbin = qbin && coxeter::length_generating_poly(coxeter::enumerate_DJ(h)) == multi;
      division = division && qcalc::q_factorial(static_cast<unsigned>(n)).exact_div(qcalc::poincare(m)) == multi;
      shape = shape && multi.has_nonnegative_coeffs() && multi.is_palindromic();

      const std::set<int> gens = h.simple_indices();
      const std::vector<int> gv(gens.begin(), gens.end());
      for (unsigned mask = 0; mask < (1u << gv.size()); ++mask) {
        std::set<int> sub;
        for (std::size_t i = 0; i < gv.size(); ++i)
          if (mask & (1u << i)) sub.insert(gv[i]);
        const Parabolic l(n, sub);
        const QPoly lhs = coxeter::length_generating_poly(coxeter::enumerate_WJ_cap_DL(h, l));
        subgroup = subgroup && lhs == qcalc::poincare(m).exact_div(qcalc::poincare(l.composition()));
      }

      const Positions x = positions_of(m);
      const Parabolic site = configs::site_parabolic(x);
      for (const Composition& species : qcalc::compositions_of(n)) {
        QPoly sum;
        for (const Permutation& s : coxeter::enumerate_DJK(Parabolic(species), site))
          sum += prefactor_poly(TazrpConfig{x, species.parts(), s});
        prefactor = prefactor && sum == multi;
        ++cases;
      }
    }
    const std::string tag = " N=" + std::to_string(n);
    r.check("sum over D_H of q^l equals q-multinomial" + tag, qbin);
    r.check("q-multinomial = [N]!/poincare exactly" + tag, division);
    r.check("q-multinomial nonnegative and palindromic" + tag, shape);
    r.check("sum over W_J cap D_L of q^l equals |W_J|_q/|W_L|_q" + tag, subgroup);
    r.check("prefactor identity sums to q-multinomial" + tag, prefactor,
            std::to_string(cases) + " (species, site) composition pairs");
  }
  return r;
}

// ---------------------------------------------------------------------------

Report coxeter_suite(const Options& o) {
  Report r{"coxeter", {}};

  // Reflection representation: l(sigma) counts positive roots sent negative.
  for (int n = 1; n <= std::min(o.max_n, 6); ++n) {
    bool ok = true;
    const auto roots = coxeter::positive_roots(n);
    ok = ok && roots.size() == static_cast<std::size_t>(n * (n - 1) / 2);
    for (const Permutation& s : coxeter::enumerate_all(n)) {
      int negative = 0;
      for (const auto& v : roots) {
        const auto img = coxeter::tau_apply(s, v);
        ok = ok && coxeter::is_root(img);
        if (coxeter::is_negative_root(img)) ++negative;
      }
      ok = ok && negative == coxeter::length(s) &&
           static_cast<int>(s.reduced_word().size()) == coxeter::length(s) &&
           Permutation::from_word(n, s.reduced_word()) == s;
    }
    r.check("length = #negative images = reduced word length, N=" + std::to_string(n), ok);
  }

  for (int n = 1; n <= o.max_n; ++n) {
    const auto all = coxeter::enumerate_all(n);
    auto index_of = [&](const Permutation& p) {
      return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), p) - all.begin());
    };
    const auto comps = qcalc::compositions_of(n);
    std::size_t pairs = 0, bad_unique = 0, bad_decomp = 0, bad_moo = 0, bad_criteria = 0;
    for (const Composition& jc : comps) {
      const Parabolic j(jc);
      for (const Permutation& s : all)
        if (coxeter::is_left_distinguished(s, j) != coxeter::is_left_distinguished_fast(s, j)) ++bad_criteria;
      for (const Composition& kc : comps) {
        const Parabolic k(kc);
        ++pairs;
        // Double cosets as orbits of left W_J and right W_K generators.
        std::vector<std::size_t> parent(all.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
          while (parent[i] != i) i = parent[i] = parent[parent[i]];
          return i;
        };
        for (std::size_t i = 0; i < all.size(); ++i) {
          for (int g : j.simple_indices()) parent[find(i)] = find(index_of(all[i].simple_times(g)));
          for (int g : k.simple_indices()) parent[find(i)] = find(index_of(all[i].times_simple(g)));
        }
        const auto djk = coxeter::enumerate_DJK(j, k);
        std::map<std::size_t, int> hits;
        for (const Permutation& d : djk) ++hits[find(index_of(d))];
        std::set<std::size_t> orbits;
        for (std::size_t i = 0; i < all.size(); ++i) orbits.insert(find(i));
        bool unique = hits.size() == orbits.size();
        for (const auto& [root, c] : hits) unique = unique && c == 1;
        if (!unique) ++bad_unique;

        const std::set<Permutation> dset(djk.begin(), djk.end());
        for (const Permutation& w : all) {
          try {
            const auto dec = coxeter::decompose_double(w, j, k);
            const Parabolic l = coxeter::delta_L(dec.d, j, k);
            const bool good = dec.a * dec.d * dec.b == w &&
                              coxeter::length(w) ==
                                  coxeter::length(dec.a) + coxeter::length(dec.d) + coxeter::length(dec.b) &&
                              j.contains(dec.a) && k.contains(dec.b) && dset.count(dec.d) &&
                              coxeter::is_left_distinguished(dec.a, l) &&
                              find(index_of(dec.d)) == find(index_of(w));
            if (!good) ++bad_decomp;
          } catch (const Error&) {
            ++bad_decomp;
          }
        }

        std::set<std::pair<Permutation, Permutation>> images;
        const auto dk = coxeter::enumerate_DJ(k);
        for (const Permutation& s0 : dk) {
          try {
            const auto im = coxeter::moo_bijection(s0, j, k);
            images.emplace(im.a, im.d);
            if (coxeter::moo_inverse(im.a, im.d, j, k) != s0 || im.a * im.d != s0) ++bad_moo;
          } catch (const Error&) {
            ++bad_moo;
          }
        }
        if (images.size() != dk.size()) ++bad_moo;
      }
    }
    const std::string tag = " N=" + std::to_string(n);
    const std::string det = std::to_string(pairs) + " composition pairs";
    r.check("one distinguished element per double coset" + tag, bad_unique == 0, det);
    r.check("decompose_double length-additive w=a*d*b" + tag, bad_decomp == 0, det);
    r.check("moo_bijection round-trips" + tag, bad_moo == 0, det);
    r.check("root and descent criteria for D_J agree" + tag, bad_criteria == 0);
  }

  // Worked examples in S(8), H' = S(1,2,2,2,1), H = S(1,2,2,3).
  const Parabolic hp(Composition({1, 2, 2, 2, 1}));
  const Parabolic h(Composition({1, 2, 2, 3}));
  const Permutation d = Permutation::from_word(8, {5, 4, 3, 1, 6, 5});
  auto root = [](std::vector<int> idx) {
    coxeter::RootVec v(7, 0);
    for (int i : idx) v[static_cast<std::size_t>(i - 1)] = 1;
    return v;
  };
  r.check("tau(a2) = a1+a2+a3+a4+a5", coxeter::tau_apply(d, root({2})) == root({1, 2, 3, 4, 5}));
  r.check("tau(a4) = a3+a4+a5+a6", coxeter::tau_apply(d, root({4})) == root({3, 4, 5, 6}));
  r.check("tau(a6) = a4", coxeter::tau_apply(d, root({6})) == root({4}));
  r.check("tau(a7) = a5+a6+a7", coxeter::tau_apply(d, root({7})) == root({5, 6, 7}));
  r.check("tau^-1(a4) = a6", coxeter::tau_inverse_apply(d, root({4})) == root({6}));
  r.check("tau^-1(a2) = a1+a2+a3", coxeter::tau_inverse_apply(d, root({2})) == root({1, 2, 3}));
  r.check("tau^-1(a6) = a3+a4", coxeter::tau_inverse_apply(d, root({6})) == root({3, 4}));
  r.check("s5s4s3s1s6s5 lies in D_{H',H}", coxeter::is_double_distinguished(d, hp, h));
  r.check("s5s4s3s1s6s5 is 21467358 in two-line notation", d.to_string(Notation::TwoLine) == "21467358");
  const Parabolic l = coxeter::delta_L(d, hp, h);
  r.check("Delta_L = {4}", l.simple_indices() == std::set<int>{4});
  std::set<std::string> wl;
  for (const Permutation& a : coxeter::enumerate_WJ_cap_DL(hp, l)) wl.insert(coxeter::word_to_string(a.reduced_word()));
  r.check("H' cap D_L = {e, s2, s6, s6s2}", wl == std::set<std::string>{"e", "s2", "s6", "s6s2"},
          "the four-element subgroup generated by s2 and s6");

  struct Row {
    const char* w;
    const char* a;
    const char* d;
    const char* b;
  };
  for (const Row& row : {Row{"21476358", "e", "21467358", "s6"}, Row{"21567438", "s6", "21467358", "s4"},
                         Row{"35178426", "s6s2", "21467358", "s7s6s4s2"}}) {
    const auto dec = coxeter::decompose_double(Permutation::parse(row.w, Notation::TwoLine), hp, h);
    const std::string got = coxeter::word_to_string(dec.a.reduced_word()) + " " +
                            dec.d.to_string(Notation::TwoLine) + " " + coxeter::word_to_string(dec.b.reduced_word());
    r.check(std::string("decompose ") + row.w, got == std::string(row.a) + " " + row.d + " " + row.b, got);
  }
  return r;
}

// ---------------------------------------------------------------------------

Report configs_suite(const Options& o) {
  Report r{"configs", {}};
  const int max_n = std::min(o.max_n, 4);
  for (int n = 1; n <= max_n; ++n) {
    std::size_t checked = 0, bad_round = 0, bad_canon = 0, bad_counts = 0, bad_json = 0;
    const auto all = coxeter::enumerate_all(n);
    for (const Composition& species : qcalc::compositions_of(n)) {
      const std::vector<int> counts = species.parts();
      const std::vector<int> kvec = configs::species_vector(counts);
      for (const Positions& x : tazrp::sorted_box(Positions(n, 0), Positions(n, 3))) {
        const auto valid = coxeter::enumerate_DJK(configs::species_parabolic(counts), configs::site_parabolic(x));
        for (const Permutation& s : valid) {
          const TazrpConfig c{x, counts, s};
          ++checked;
          configs::validate(c);
          if (configs::from_occupation(configs::to_occupation(c)) != c) ++bad_round;
          if (configs::config_from_json(configs::to_json(c)) != c) ++bad_json;
          const auto lm = configs::l_counts(c);
          const auto m = configs::composition_of(x);
          std::vector<int> col(counts.size(), 0);
          bool rows_ok = lm.size() == m.size();
          for (std::size_t i = 0; rows_ok && i < lm.size(); ++i) {
            int row = 0;
            for (std::size_t jj = 0; jj < lm[i].size(); ++jj) {
              row += lm[i][jj];
              col[jj] += lm[i][jj];
            }
            rows_ok = row == m[i];
          }
          if (!rows_ok || col != counts) ++bad_counts;
        }
        // Every labelling of x lands on a valid canonical label with the same occupation.
        std::set<Permutation> canon;
        for (const Permutation& w : all) {
          Occupation direct;
          direct.n_species = static_cast<int>(counts.size());
          for (int i = 1; i <= n; ++i) direct.add(x[static_cast<std::size_t>(i - 1)], kvec[static_cast<std::size_t>(w(i) - 1)], 1);
          const TazrpConfig c = configs::canonicalize(x, w, counts);
          canon.insert(c.sigma);
          if (configs::to_occupation(c) != direct) ++bad_canon;
        }
        if (canon != std::set<Permutation>(valid.begin(), valid.end())) ++bad_canon;
      }
    }
    const std::string tag = " N=" + std::to_string(n);
    const std::string det = std::to_string(checked) + " configurations on sites 0..3";
    r.check("occupation round trip" + tag, bad_round == 0, det);
    r.check("json round trip" + tag, bad_json == 0, det);
    r.check("canonicalize matches direct labelling" + tag, bad_canon == 0);
    r.check("L matrix margins are m(x) and N" + tag, bad_counts == 0);
  }

  bool rejected = false;
  try {
    configs::validate(TazrpConfig{{1, 1, 0}, {1, 1, 1}, Permutation::from_oneline({2, 1, 3})});
  } catch (const DomainError&) {
    rejected = true;
  }
  r.check("validate rejects sigma outside D_{H',H}", rejected);

  // Left-move predecessor for a stack x = (4,3,3,1,1,0,0).
  {
    const TazrpConfig c{{4, 3, 3, 1, 1, 0, 0}, ones(7), Permutation::parse("2164357", Notation::TwoLine)};
    const auto m = tazrp::left_move_decomposition(c, 4);
    r.check("left move sigma_bar = 2165347", m.sigma_bar.to_string(Notation::TwoLine) == "2165347",
            m.sigma_bar.to_string(Notation::TwoLine));
    r.check("left move sigma_hat = 2156347", m.sigma_hat.to_string(Notation::TwoLine) == "2156347",
            m.sigma_hat.to_string(Notation::TwoLine));
    r.check("left move rate exponent = 1", m.rate_exp == 1, std::to_string(m.rate_exp));
    r.check("left move x = (4,3,3,1,0,0,0)", m.x_minus == Positions{4, 3, 3, 1, 0, 0, 0}, join(m.x_minus));
  }

  // Species-resolved rates at a site with species counts (2,2,1).
  {
    const QPoly lhs = QPoly::monomial(4) * qcalc::q_int(1) + QPoly::monomial(2) * qcalc::q_int(2) + qcalc::q_int(2);
    r.check("q^4[1] + q^2[2] + [2] = [5]", lhs == qcalc::q_int(5));
    Occupation eta;
    eta.n_species = 3;
    eta.sites[0] = {2, 2, 1};
    tazrp::RateEnv env;
    env.q = o.q;
    const double sum = tazrp::jump_rate(eta, 1, 0, env) + tazrp::jump_rate(eta, 2, 0, env) +
                       tazrp::jump_rate(eta, 3, 0, env);
    r.bound("species rates at the site sum to [5]_q", std::abs(sum - qcalc::q_int_value(5, o.q)), 1e-14);
  }

  // Left-move generator against the occupation generator, one particle per species.
  for (int n = 2; n <= std::min(max_n, 4); ++n) {
    tazrp::RateEnv env = inhomogeneous_env(o.q, -1, 4);
    std::size_t bad = 0, targets = 0;
    const auto box = tazrp::reachable_states(Positions(n, 0), Positions(n, 3), ones(n));
    std::map<Occupation, std::map<Occupation, double>> in_rates;
    for (const TazrpConfig& c : box) {
      const Occupation from = configs::to_occupation(c);
      for (const auto& [to, rate] : tazrp::transitions(from, env)) in_rates[to][from] += rate;
    }
    for (const TazrpConfig& c : box) {
      ++targets;
      std::map<Occupation, double> via_moves;
      for (int k = 1; k <= n; ++k) {
        const auto m = tazrp::left_move_decomposition(c, k);
        if (m.source_site < 0) continue;
        via_moves[configs::to_occupation(TazrpConfig{m.x_minus, c.species_counts, m.sigma_hat})] +=
            tazrp::left_move_rate(m, env);
      }
      const auto& expect = in_rates[configs::to_occupation(c)];
      bool same = via_moves.size() == expect.size();
      for (const auto& [from, rate] : via_moves) {
        auto it = expect.find(from);
        same = same && it != expect.end() && std::abs(it->second - rate) < 1e-12;
      }
      if (!same) ++bad;
    }
    r.check("left-move generator equals occupation generator N=" + std::to_string(n), bad == 0,
            std::to_string(targets) + " targets, inhomogeneous b");
  }
  return r;
}

// ---------------------------------------------------------------------------

Report lumpability(const Options& o) {
  Report r{"lumpability", {}};
  const int max_n = std::min(o.max_n, 4);
  for (int n = 2; n <= max_n; ++n) {
    for (const Composition& species : qcalc::compositions_of(n)) {
      const std::vector<int> counts = species.parts();
      if (counts.size() < 2) continue;
      const auto tz_states = tazrp_box_states(n, 3, counts);
      const auto as_line = asep::enumerate_states(asep::LatticeSubset::interval(0, n + 1), counts);
      const auto blocks = asep::LatticeSubset::blocks({n / 2 + 1, n - n / 2 + 1});
      const auto as_blocks = asep::enumerate_states(blocks, counts);
      for (const Composition& part : qcalc::compositions_of(static_cast<int>(counts.size()))) {
        const markov::SpeciesPartition pi{part.parts()};
        const std::string tag = " N=(" + join(counts) + ") blocks=(" + join(part.parts()) + ")";
        tazrp::RateEnv flat;
        flat.q = o.q;
        auto a = tazrp::check_lumpability(tz_states, flat, pi);
        r.bound("tazrp b=1" + tag, a.max_defect, 1e-12, std::to_string(a.states_checked) + " states");
        auto b = tazrp::check_lumpability(tz_states, inhomogeneous_env(o.q, -1, 5), pi);
        r.bound("tazrp inhomogeneous b" + tag, b.max_defect, 1e-12, std::to_string(b.states_checked) + " states");
        auto c = asep::check_lumpability(as_line, o.q, asep::LatticeSubset::interval(0, n + 1), pi);
        r.bound("asep interval" + tag, c.max_defect, 1e-12, std::to_string(c.states_checked) + " states");
        auto d = asep::check_lumpability(as_blocks, o.q, blocks, pi);
        r.bound("asep two blocks" + tag, d.max_defect, 1e-12, std::to_string(d.states_checked) + " states");
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

Report exchangeability(const Options& o) {
  Report r{"exchangeability", {}};
  struct Case {
    Positions y;
    std::vector<int> counts;
  };
  auto literal_weight = [](const TazrpConfig&) { return 1.0; };
  for (const Case& cs : {Case{{1, 0}, {1, 1}}, Case{{0, 0}, {1, 1}}, Case{{1, 0, 0}, {1, 1, 1}},
                         Case{{1, 1, 0}, {1, 1, 1}}}) {
    for (bool inhom : {false, true}) {
      tazrp::RateEnv env = inhom ? inhomogeneous_env(o.q, -1, 8) : tazrp::RateEnv{};
      env.q = o.q;
      const tazrp::QExchangeableInit init{cs.y, cs.counts};
      Positions xmax = cs.y;
      for (auto& v : xmax) v += 3;
      const auto sol = tazrp::solve_master(init, o.t, xmax, env);
      std::vector<std::pair<TazrpConfig, double>> probs;
      for (std::size_t i = 0; i < sol.states.size(); ++i)
        probs.emplace_back(configs::from_occupation(sol.states[i]), sol.p[i]);
      r.bound("tazrp y=(" + join(cs.y) + ") N=(" + join(cs.counts) + (inhom ? ") inhomogeneous b" : ") b=1"),
              exchangeability_spread(probs, o.q, literal_weight), 1e-9,
              std::to_string(sol.states.size()) + " states");
    }
  }

  // Repeated species: the law invariant is q^{-l} prod [L_ij]! P.
  {
    tazrp::RateEnv env;
    env.q = o.q;
    const tazrp::QExchangeableInit init{{1, 0, 0}, {1, 2}, tazrp::InitWeight::Projected};
    const auto sol = tazrp::solve_master(init, o.t, {4, 3, 3}, env);
    std::vector<std::pair<TazrpConfig, double>> probs;
    for (std::size_t i = 0; i < sol.states.size(); ++i)
      probs.emplace_back(configs::from_occupation(sol.states[i]), sol.p[i]);
    auto weight = [&](const TazrpConfig& c) {
      double w = 1.0;
      for (const auto& row : configs::l_counts(c))
        for (int l : row) w *= qcalc::q_factorial_value(l, o.q);
      return w;
    };
    r.bound("tazrp y=(1,0,0) N=(1,2) projected law, q^-l prod[L]! P constant",
            exchangeability_spread(probs, o.q, weight), 1e-9);
  }

  for (const Case& cs : {Case{{1, 0}, {1, 1}}, Case{{2, 1, 0}, {1, 1, 1}}, Case{{2, 1, 0}, {1, 2}}}) {
    const int w = cs.y.size() == 2 ? o.window : std::min(o.window, 10);
    const tazrp::QExchangeableInit init{cs.y, cs.counts};
    const auto sol = asep::solve_master_truncated(init, o.t, w, o.q, 1.0);
    std::vector<std::pair<TazrpConfig, double>> probs;
    for (std::size_t i = 0; i < sol.states.size(); ++i)
      probs.emplace_back(configs::from_occupation(sol.states[i]), sol.p[i]);
    r.bound("asep y=(" + join(cs.y) + ") N=(" + join(cs.counts) + ") W=" + std::to_string(w),
            exchangeability_spread(probs, o.q, literal_weight), 1e-8 + sol.eps_trunc,
            "eps_trunc=" + num(sol.eps_trunc));
  }
  return r;
}

// ---------------------------------------------------------------------------

Report stationarity(const Options& o) {
  Report r{"stationarity", {}};
  const int max_n = std::min(o.max_n, 5);
  const std::vector<Rational> qs{Rational(1, 3), Rational(1, 2), Rational(2, 3)};

  for (int n = 1; n <= max_n; ++n) {
    bool full = true, normalized = true, blocked = true, global = true;
    const auto all = coxeter::enumerate_all(n);
    for (const Rational& q : qs) {
      const auto zone = asep::LatticeSubset::interval(0, n - 1);
      const markov::StateIndex states(asep::enumerate_states(zone, ones(n)));
      std::vector<Rational> mu;
      Rational total(0);
      for (const Occupation& s : states.states()) {
        mu.push_back(asep::power(q, asep::config_length(s)) / asep::q_factorial_at(n, q));
        total += mu.back();
      }
      full = full && asep::stationarity_residual<Rational>(states, mu, q, zone) == 0;
      normalized = normalized && total == 1;

      for (int l1 = 1; l1 < n; ++l1) {
        const auto bz = asep::LatticeSubset::blocks({l1, n - l1});
        const Parabolic k = asep::position_blocks(bz);
        const auto reps = coxeter::enumerate_DJ(k);
        std::map<Permutation, Rational> uniform, weighted;
        Rational z(0);
        for (const Permutation& t : reps) z += asep::power(q, coxeter::length(t));
        for (const Permutation& t : reps) {
          uniform[t] = Rational(1) / Rational(static_cast<long>(reps.size()));
          weighted[t] = asep::power(q, coxeter::length(t)) / z;
        }
        for (const auto* c : {&uniform, &weighted}) {
          const auto meas = asep::blocked_measure<Rational>(*c, k, q);
          std::vector<Occupation> occ;
          for (const Permutation& s : all) occ.push_back(asep::occupation_of(s, bz));
          const markov::StateIndex idx(occ);
          std::vector<Rational> v(idx.size(), Rational(0));
          for (const Permutation& s : all) v[idx.find(asep::occupation_of(s, bz))] = meas.at(s);
          blocked = blocked && asep::stationarity_residual<Rational>(idx, v, q, bz) == 0;
          if (c == &weighted)
            for (const Permutation& s : all) global = global && meas.at(s) == asep::nu_q<Rational>(s, q);
        }
      }
    }
    const std::string tag = " N=" + std::to_string(n);
    r.check("nu_q L = 0 on a full interval, exact" + tag, full, "q in {1/3,1/2,2/3}");
    r.check("nu_q sums to one, exact" + tag, normalized);
    if (n >= 2) {
      r.check("blocked products stationary for every two-interval split, exact" + tag, blocked,
              "c uniform and c proportional to q^l");
      r.check("c proportional to q^l gives nu_q" + tag, global);
    }
  }

  // Conditional jump matrices on N particles in N+2 sites.
  for (int n = 1; n <= std::min(max_n, 4); ++n) {
    const Rational q(1, 2);
    const auto zone = asep::LatticeSubset::interval(0, n + 1);
    const markov::StateIndex pos_states(asep::enumerate_states(zone, {n}));
    const markov::StateIndex full(asep::enumerate_states(zone, ones(n)));
    std::vector<Rational> mu(pos_states.size());
    Rational z(0);
    for (std::size_t i = 0; i < mu.size(); ++i) z += mu[i] = Rational(static_cast<long>(i + 1));
    for (auto& v : mu) v /= z;
    auto positions_of_occ = [](const Occupation& s) {
      Positions x;
      for (auto it = s.sites.rbegin(); it != s.sites.rend(); ++it) x.push_back(it->first);
      return x;
    };
    auto marginal = [&](const Occupation& s) {
      Occupation m;
      m.n_species = 1;
      for (const auto& kv : s.sites) m.add(kv.first, 1, 1);
      return m;
    };
    std::vector<Rational> joint(full.size());
    for (std::size_t i = 0; i < full.size(); ++i)
      joint[i] = mu[pos_states.find(marginal(full[i]))] *
                 asep::power(q, asep::config_length(full[i])) / asep::q_factorial_at(n, q);
    const auto lhs = asep::build_generator<Rational>(full, q, zone).left_multiply(joint);
    const auto mux = asep::build_generator<Rational>(pos_states, q, zone).left_multiply(mu);
    bool fact = true;
    for (std::size_t i = 0; i < full.size(); ++i)
      fact = fact && lhs[i] == mux[pos_states.find(marginal(full[i]))] *
                                   asep::power(q, asep::config_length(full[i])) / asep::q_factorial_at(n, q);
    r.check("(mu x nu) L_XS = (mu L_X) x nu, exact N=" + std::to_string(n), fact);

    bool rows = true, fixed = true;
    for (const Occupation& a : pos_states.states())
      for (const Occupation& b : pos_states.states()) {
        const Positions x = positions_of_occ(a), x2 = positions_of_occ(b);
        if (asep::position_rate<Rational>(x, x2, q, zone) == 0) continue;
        const auto m = asep::extract_conditional_matrix<Rational>(zone, ones(n), q, x, x2);
        for (std::size_t i = 0; i < m.labels.size(); ++i) {
          Rational s(0), nu(0);
          for (std::size_t j = 0; j < m.labels.size(); ++j) {
            s += m.m[i][j];
            nu += asep::nu_q<Rational>(m.labels[j], q) * m.m[j][i];
          }
          rows = rows && s == 1;
          fixed = fixed && nu == asep::nu_q<Rational>(m.labels[i], q);
        }
      }
    r.check("conditional jump matrices have unit row sums N=" + std::to_string(n), rows);
    r.check("nu_q M = nu_q for every position transition N=" + std::to_string(n), fixed);
  }

  // Balance identity and the formal stationarity equation for q-TAZRP.
  for (int n = 1; n <= std::min(max_n, 4); ++n) {
    std::size_t moves = 0, bad = 0;
    double worst = 0.0;
    for (const Composition& species : qcalc::compositions_of(n)) {
      for (const Occupation& eta : tazrp_box_states(n, 3, species.parts())) {
        worst = std::max(worst, tazrp::formal_stationarity_residual(eta, o.q));
        for (const auto& [site, cnt] : eta.sites)
          for (std::size_t jj = 0; jj < cnt.size(); ++jj) {
            if (cnt[jj] == 0) continue;
            ++moves;
            const auto sides = tazrp::balance_identity(eta, site, static_cast<int>(jj + 1));
            if (sides.lhs != sides.rhs) ++bad;
          }
      }
    }
    r.check("balance identity on every local move N=" + std::to_string(n), bad == 0,
            std::to_string(moves) + " moves");
    r.bound("formal stationarity residual N=" + std::to_string(n), worst, 1e-12);
  }

  double ring = 0.0;
  for (int sites = 6; sites <= 8; ++sites)
    for (int n = 1; n <= 4; ++n) ring = std::max(ring, tazrp::ring_stationarity_residual(sites, n, o.q));
  r.bound("ring stationarity residual, 6-8 sites, 1-4 particles", ring, 1e-10);
  return r;
}

// ---------------------------------------------------------------------------

Report formula_vs_oracle(const Options& o) {
  Report r{"formula-vs-oracle", {}};
  if (o.n < 1 || o.n > 3) throw DomainError("formula-vs-oracle: n must be 1, 2 or 3");
  integrals::ContourSpec spec;
  spec.points = o.points;
  spec.workers = o.workers;

  struct Case {
    Positions y;
    std::vector<int> counts;
  };
  std::vector<Case> cases;
  if (o.n == 1) cases = {Case{{0}, {1}}};
  if (o.n == 2) cases = {Case{{0, 0}, {1, 1}}, Case{{1, 0}, {1, 1}}, Case{{0, 0}, {2}}};
  if (o.n == 3) cases = {Case{{1, 0, 0}, {1, 2}}, Case{{1, 0, 0}, {1, 1, 1}}, Case{{1, 0, 0}, {3}}};
  const Position reach = o.n == 3 ? 2 : 3;

  for (const Case& cs : cases) {
    for (bool inhom : {false, true}) {
      tazrp::RateEnv env = inhom ? inhomogeneous_env(o.q, -2, 12) : tazrp::RateEnv{};
      env.q = o.q;
      Positions xmax = cs.y;
      for (auto& v : xmax) v += reach;
      const tazrp::QExchangeableInit init{cs.y, cs.counts, tazrp::InitWeight::Projected};
      const auto sol = tazrp::solve_master(init, o.t, xmax, env);
      std::map<Positions, integrals::QuadResult> kernel;
      double worst = 0.0, imag = 0.0, marginal = 0.0;
      std::map<Positions, double> sums;
      for (const TazrpConfig& c : tazrp::reachable_states(cs.y, xmax, cs.counts)) {
        auto it = kernel.find(c.x);
        if (it == kernel.end()) it = kernel.emplace(c.x, integrals::tazrp_kernel(cs.y, c.x, o.t, env, spec)).first;
        const double v = it->second.value * integrals::tazrp_multi_prefactor(c, o.q);
        worst = std::max(worst, std::abs(v - sol.probability(c)));
        imag = std::max(imag, it->second.imag_residual);
        sums[c.x] += v;
      }
      for (const auto& [x, s] : sums)
        marginal = std::max(marginal, std::abs(s - integrals::tazrp_transition(cs.y, x, o.t, env, spec).value));
      const std::string tag = " y=(" + join(cs.y) + ") N=(" + join(cs.counts) + (inhom ? ") inhomogeneous b" : ") b=1");
      r.bound("tazrp formula vs master equation" + tag, worst, 1e-6, std::to_string(kernel.size()) + " positions");
      r.bound("tazrp imaginary residual" + tag, imag, 1e-10);
      r.bound("tazrp species sum equals single-species formula" + tag, marginal, 1e-10);
    }
  }

  std::vector<Case> acases;
  if (o.n == 1) acases = {Case{{0}, {1}}};
  if (o.n == 2) acases = {Case{{1, 0}, {1, 1}}, Case{{1, 0}, {2}}};
  if (o.n == 3) acases = {Case{{2, 1, 0}, {1, 1, 1}}, Case{{2, 1, 0}, {1, 2}}};
  for (const Case& cs : acases) {
    const tazrp::QExchangeableInit init{cs.y, cs.counts};
    const auto sol = asep::solve_master_truncated(init, o.t, o.window, o.q, 1e-3);
    std::map<Positions, integrals::QuadResult> kernel;
    double worst = 0.0, imag = 0.0;
    Positions lo = cs.y, hi = cs.y;
    for (auto& v : lo) v -= 2;
    for (auto& v : hi) v += 2;
    for (const Positions& x : tazrp::sorted_box(lo, hi)) {
      bool strict = true;
      for (std::size_t i = 1; i < x.size(); ++i) strict = strict && x[i - 1] > x[i];
      if (!strict) continue;
      const auto res = integrals::asep_transition(cs.y, x, o.t, o.q, spec);
      imag = std::max(imag, res.imag_residual);
      for (const Permutation& s : coxeter::enumerate_DJ_inverse(configs::species_parabolic(cs.counts))) {
        const TazrpConfig c{x, cs.counts, s};
        worst = std::max(worst, std::abs(res.value * integrals::asep_multi_prefactor(c, o.q) - sol.probability(c)));
      }
      kernel.emplace(x, res);
    }
    const std::string tag = " y=(" + join(cs.y) + ") N=(" + join(cs.counts) + ") W=" + std::to_string(o.window);
    r.bound("asep formula vs truncated master equation" + tag, worst, 1e-4 + sol.eps_trunc,
            "eps_trunc=" + num(sol.eps_trunc) + ", " + std::to_string(kernel.size()) + " positions");
    r.bound("asep imaginary residual" + tag, imag, 1e-10);
  }
  return r;
}

// ---------------------------------------------------------------------------

Report monte_carlo(const Options& o) {
  Report r{"monte-carlo", {}};
  const int workers = o.workers > 0 ? o.workers : 1;
  auto compare = [&](const std::string& name, const markov::Empirical& emp,
                     const std::vector<std::pair<Occupation, double>>& exact) {
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& [s, p] : exact) {
      if (static_cast<double>(emp.n_traj) * p < 10.0) continue;
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(emp.n_traj));
      worst = std::max(worst, std::abs(emp.frequency(s) - p) / se);
      ++used;
    }
    r.bound(name, worst, 4.0, std::to_string(used) + " targets with n p >= 10, value in standard errors");
  };

  {
    tazrp::RateEnv env;
    env.q = o.q;
    const tazrp::QExchangeableInit init{{1, 0}, {1, 1}};
    const auto sol = tazrp::solve_master(init, o.t, {12, 12}, env);
    std::vector<std::pair<Occupation, double>> exact;
    for (std::size_t i = 0; i < sol.states.size(); ++i) exact.emplace_back(sol.states[i], sol.p[i]);
    const auto emp = tazrp::gillespie(init, o.t, o.trajectories, o.seed, env, workers);
    compare("tazrp y=(1,0) N=(1,1) within 4 standard errors", emp, exact);
    r.check("tazrp fixed seed reproduces across worker counts",
            emp == tazrp::gillespie(init, o.t, o.trajectories, o.seed, env, workers + 1));
  }
  {
    const tazrp::QExchangeableInit init{{1, 0}, {1, 1}};
    const auto sol = asep::solve_master_truncated(init, o.t, o.window, o.q, 1e-3);
    std::vector<std::pair<Occupation, double>> exact;
    for (std::size_t i = 0; i < sol.states.size(); ++i) exact.emplace_back(sol.states[i], sol.p[i]);
    const auto emp = asep::gillespie_asep(init, o.t, o.trajectories, o.seed, o.q, workers);
    compare("asep y=(1,0) N=(1,1) within 4 standard errors", emp, exact);
    r.check("asep fixed seed reproduces across worker counts",
            emp == asep::gillespie_asep(init, o.t, o.trajectories, o.seed, o.q, workers + 1));
  }
  {
    // One particle with b = 1 performs a Poisson(t) walk.
    tazrp::RateEnv env;
    env.q = o.q;
    const tazrp::QExchangeableInit init{{0}, {1}};
    const auto emp = tazrp::gillespie(init, o.t, o.trajectories, o.seed + 1, env, workers);
    const boost::math::poisson_distribution<double> pois(o.t);
    double chi2 = 0.0, tail = 1.0;
    int dof = 0;
    std::uint64_t counted = 0;
    for (int k = 0;; ++k) {
      const double p = boost::math::pdf(pois, k);
      if (static_cast<double>(emp.n_traj) * p < 5.0) break;
      Occupation s;
      s.n_species = 1;
      s.add(k, 1, 1);
      const double e = static_cast<double>(emp.n_traj) * p;
      const auto it = emp.counts.find(s);
      const double c = it == emp.counts.end() ? 0.0 : static_cast<double>(it->second);
      chi2 += (c - e) * (c - e) / e;
      counted += static_cast<std::uint64_t>(c);
      tail -= p;
      ++dof;
    }
    const double e = static_cast<double>(emp.n_traj) * tail;
    const double c = static_cast<double>(emp.n_traj - counted);
    chi2 += (c - e) * (c - e) / e;
    const boost::math::chi_squared_distribution<double> dist(dof);
    const double pvalue = boost::math::cdf(boost::math::complement(dist, chi2));
    r.check("single particle displacement is Poisson(t), chi-square p >= 1e-3", pvalue >= 1e-3,
            "p=" + num(pvalue) + ", " + std::to_string(dof) + " degrees of freedom");
  }
  return r;
}

// ---------------------------------------------------------------------------

Report run(const std::string& suite, const Options& o) {
  static const std::map<std::string, std::function<Report(const Options&)>> table{
      {"q-identities", q_identities},       {"coxeter", coxeter_suite},
      {"configs", configs_suite},           {"lumpability", lumpability},
      {"exchangeability", exchangeability}, {"stationarity", stationarity},
      {"formula-vs-oracle", formula_vs_oracle}, {"monte-carlo", monte_carlo}};
  if (suite == "all") {
    Report all{"all", {}};
    for (const std::string& name : suite_names()) all.append(table.at(name)(o));
    return all;
  }
  const auto it = table.find(suite);
  if (it == table.end()) throw DomainError("unknown verification suite: " + suite);
  return it->second(o);
}

}  // namespace qex::verify
