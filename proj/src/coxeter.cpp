#include "qex/coxeter.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qex/error.hpp"

namespace qex::coxeter {

Permutation Permutation::identity(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::from_oneline(const std::vector<int>& oneline) {
  const int n = static_cast<int>(oneline.size());
  std::vector<int> img(oneline.size());
  std::vector<bool> seen(oneline.size(), false);
  for (int i = 0; i < n; ++i) {
    int v = oneline[i];
    if (v < 1 || v > n || seen[v - 1]) throw DomainError("Permutation: not a bijection of 1..n");
    seen[v - 1] = true;
    img[i] = v - 1;
  }
  return Permutation(std::move(img));
}

Permutation Permutation::from_inverse_oneline(const std::vector<int>& inverse_oneline) {
  return from_oneline(inverse_oneline).inverse();
}

Permutation Permutation::from_word(int n, const std::vector<int>& word) {
  Permutation p = identity(n);
  for (int i : word) {
    if (i < 1 || i >= n) throw DomainError("Permutation::from_word: generator index out of range");
    p = p.times_simple(i);
  }
  return p;
}

Permutation Permutation::parse(std::string_view text, Notation notation) {
  std::vector<int> vals;
  if (text.find(',') != std::string_view::npos) {
    std::string s(text);
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw DomainError("Permutation::parse: bad entry '" + tok + "'");
      }
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw DomainError("Permutation::parse: bad digit in '" + std::string(text) + "'");
      vals.push_back(c - '0');
    }
  }
  return notation == Notation::OneLine ? from_oneline(vals) : from_inverse_oneline(vals);
}

std::vector<int> Permutation::oneline() const {
  std::vector<int> out(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) out[i] = img_[i] + 1;
  return out;
}

std::vector<int> Permutation::inverse_oneline() const { return inverse().oneline(); }

Permutation Permutation::inverse() const {
  std::vector<int> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (rhs.size() != size()) throw DomainError("Permutation: size mismatch in product");
  std::vector<int> out(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) out[i] = img_[rhs.img_[i]];
  return Permutation(std::move(out));
}

Permutation Permutation::times_simple(int i) const {
  Permutation p = *this;
  std::swap(p.img_[i - 1], p.img_[i]);
  return p;
}

Permutation Permutation::simple_times(int i) const {
  Permutation p = *this;
  for (int& v : p.img_) {
    if (v == i - 1)
      v = i;
    else if (v == i)
      v = i - 1;
  }
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<int> Permutation::reduced_word() const {
  std::vector<int> word;
  Permutation w = *this;
  Permutation winv = inverse();
  const int n = size();
  while (true) {
    int pick = 0;
    for (int i = n - 1; i >= 1; --i) {
      if (winv.img_[i - 1] > winv.img_[i]) {
        pick = i;
        break;
      }
    }
    if (pick == 0) break;
    word.push_back(pick);
    w = w.simple_times(pick);
    winv = winv.times_simple(pick);
  }
  return word;
}

std::string Permutation::to_string(Notation notation) const {
  const std::vector<int> vals = notation == Notation::OneLine ? oneline() : inverse_oneline();
  std::ostringstream os;
  const bool digits = size() <= 9;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!digits && i) os << ",";
    os << vals[i];
  }
  return os.str();
}

std::string word_to_string(const std::vector<int>& word) {
  if (word.empty()) return "e";
  std::ostringstream os;
  for (int i : word) os << "s" << i;
  return os.str();
}

int length(const Permutation& sigma) {
  const auto& img = sigma.zero_based();
  int inv = 0;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j)
      if (img[i] > img[j]) ++inv;
  return inv;
}

RootVec simple_root(int n, int i) {
  if (i < 1 || i >= n) throw DomainError("simple_root: index out of range");
  RootVec v(static_cast<std::size_t>(n - 1), 0);
  v[i - 1] = 1;
  return v;
}

namespace {

// Type-A roots are exactly the vectors +-(alpha_i + ... + alpha_j).
int root_sign(const RootVec& v) {
  std::size_t first = v.size(), last = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) {
      if (first == v.size()) first = i;
      last = i;
    }
  }
  if (first == v.size()) return 0;
  const long s = v[first];
  if (s != 1 && s != -1) return 0;
  for (std::size_t i = first; i <= last; ++i)
    if (v[i] != s) return 0;
  return static_cast<int>(s);
}

}  // namespace

bool is_root(const RootVec& v) { return root_sign(v) != 0; }
bool is_positive_root(const RootVec& v) { return root_sign(v) == 1; }
bool is_negative_root(const RootVec& v) { return root_sign(v) == -1; }

std::vector<RootVec> positive_roots(int n) {
  std::vector<RootVec> out;
  for (int i = 1; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      RootVec v(static_cast<std::size_t>(n - 1), 0);
      for (int k = i; k <= j; ++k) v[k - 1] = 1;
      out.push_back(std::move(v));
    }
  }
  return out;
}

RootVec reflect(int i, RootVec v) {
  const std::size_t idx = static_cast<std::size_t>(i - 1);
  long pairing = 2 * v[idx];
  if (idx > 0) pairing -= v[idx - 1];
  if (idx + 1 < v.size()) pairing -= v[idx + 1];
  v[idx] -= pairing;
  return v;
}

RootVec tau_apply(const Permutation& sigma, const RootVec& v) {
  if (static_cast<int>(v.size()) != sigma.size() - 1) throw DomainError("tau_apply: dimension mismatch");
  const std::vector<int> word = sigma.reduced_word();
  RootVec out = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = reflect(*it, std::move(out));
  return out;
}

RootVec tau_inverse_apply(const Permutation& sigma, const RootVec& v) {
  return tau_apply(sigma.inverse(), v);
}

Parabolic::Parabolic(const qcalc::Composition& m)
    : n_(m.total()), gen_(static_cast<std::size_t>(m.total()) + 1, false) {
  int pos = 1;
  for (int part : m.parts()) {
    for (int i = pos; i < pos + part - 1; ++i) gen_[i] = true;
    pos += part;
  }
}

Parabolic::Parabolic(int n, const std::set<int>& simple_indices)
    : n_(n), gen_(static_cast<std::size_t>(n) + 1, false) {
  for (int i : simple_indices) {
    if (i < 1 || i >= n) throw DomainError("Parabolic: simple index out of range");
    gen_[i] = true;
  }
}

Parabolic Parabolic::trivial(int n) { return Parabolic(n, {}); }

Parabolic Parabolic::full(int n) {
  std::set<int> all;
  for (int i = 1; i < n; ++i) all.insert(i);
  return Parabolic(n, all);
}

std::set<int> Parabolic::simple_indices() const {
  std::set<int> out;
  for (int i = 1; i < n_; ++i)
    if (gen_[i]) out.insert(i);
  return out;
}

qcalc::Composition Parabolic::composition() const {
  std::vector<int> parts;
  if (n_ == 0) return qcalc::Composition(parts);
  int run = 1;
  for (int i = 1; i < n_; ++i) {
    if (gen_[i]) {
      ++run;
    } else {
      parts.push_back(run);
      run = 1;
    }
  }
  parts.push_back(run);
  return qcalc::Composition(std::move(parts));
}

int Parabolic::block_of(int i) const {
  int b = 0;
  for (int j = 1; j < i; ++j)
    if (!gen_[j]) ++b;
  return b;
}

bool Parabolic::contains(const Permutation& sigma) const {
  if (sigma.size() != n_) return false;
  for (int i = 1; i <= n_; ++i)
    if (block_of(i) != block_of(sigma(i))) return false;
  return true;
}

bool is_left_distinguished(const Permutation& sigma, const Parabolic& j) {
  const int n = sigma.size();
  for (int i : j.simple_indices())
    if (!is_positive_root(tau_apply(sigma, simple_root(n, i)))) return false;
  return true;
}

bool is_left_distinguished_fast(const Permutation& sigma, const Parabolic& j) {
  const auto& img = sigma.zero_based();
  for (int i = 1; i < sigma.size(); ++i)
    if (j.has_simple(i) && img[i - 1] > img[i]) return false;
  return true;
}

bool is_right_distinguished(const Permutation& sigma, const Parabolic& j) {
  return is_left_distinguished_fast(sigma.inverse(), j);
}

bool is_double_distinguished(const Permutation& sigma, const Parabolic& j, const Parabolic& k) {
  return is_right_distinguished(sigma, j) && is_left_distinguished_fast(sigma, k);
}

DoubleReduction reduce_double(const Permutation& w, const Parabolic& j, const Parabolic& k) {
  const int n = w.size();
  if (j.n() != n || k.n() != n) throw DomainError("reduce_double: rank mismatch");
  DoubleReduction r{Permutation::identity(n), w, Permutation::identity(n)};
  Permutation dinv = w.inverse();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i < n && !changed; ++i) {
      if (j.has_simple(i) && dinv(i) > dinv(i + 1)) {
        r.d = r.d.simple_times(i);
        dinv = dinv.times_simple(i);
        r.x = r.x.times_simple(i);
        changed = true;
      }
    }
    for (int i = 1; i < n && !changed; ++i) {
      if (k.has_simple(i) && r.d(i) > r.d(i + 1)) {
        r.d = r.d.times_simple(i);
        dinv = dinv.simple_times(i);
        r.y = r.y.simple_times(i);
        changed = true;
      }
    }
  }
  return r;
}

Permutation min_double_rep(const Permutation& w, const Parabolic& j, const Parabolic& k) {
  return reduce_double(w, j, k).d;
}

Parabolic delta_L(const Permutation& d, const Parabolic& j, const Parabolic& k) {
  if (!is_double_distinguished(d, j, k)) throw DomainError("delta_L: d is not in D_{J,K}");
  const int n = d.size();
  std::set<int> out;
  for (int kk : k.simple_indices()) {
    const RootVec img = tau_apply(d, simple_root(n, kk));
    for (int i : j.simple_indices()) {
      if (img == simple_root(n, i)) out.insert(i);
    }
  }
  return Parabolic(n, out);
}

LeftCosetFactor factor_left_coset(const Permutation& x, const Parabolic& l) {
  LeftCosetFactor f{x, Permutation::identity(x.size())};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i < x.size(); ++i) {
      if (l.has_simple(i) && f.rep(i) > f.rep(i + 1)) {
        f.rep = f.rep.times_simple(i);
        f.sub = f.sub.simple_times(i);
        changed = true;
        break;
      }
    }
  }
  return f;
}

DoubleCosetDecomposition decompose_double(const Permutation& w, const Parabolic& j,
                                          const Parabolic& k) {
  const DoubleReduction r = reduce_double(w, j, k);
  const Parabolic l = delta_L(r.d, j, k);
  const LeftCosetFactor f = factor_left_coset(r.x, l);
  DoubleCosetDecomposition out{f.rep, r.d, r.d.inverse() * f.sub * r.d * r.y};
  if (out.a * out.d * out.b != w) throw ArithmeticError("decompose_double: w != a d b");
  if (!j.contains(out.a) || !is_left_distinguished_fast(out.a, l))
    throw ArithmeticError("decompose_double: a not in W_J cap D_L");
  if (!k.contains(out.b)) throw ArithmeticError("decompose_double: b not in W_K");
  if (length(w) != length(out.a) + length(out.d) + length(out.b))
    throw ArithmeticError("decompose_double: length is not additive");
  return out;
}

namespace {

void check_bound(int n) {
  if (n > kMaxEnumerationN)
    throw EnumerationBoundError("enumeration of S(" + std::to_string(n) + ") exceeds the bound N <= " +
                                std::to_string(kMaxEnumerationN));
}

template <class Pred>
std::vector<Permutation> filter_all(int n, Pred pred) {
  check_bound(n);
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<Permutation> out;
  do {
    Permutation p = Permutation::from_oneline(v);
    if (pred(p)) out.push_back(std::move(p));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace

std::vector<Permutation> enumerate_all(int n) {
  return filter_all(n, [](const Permutation&) { return true; });
}

std::vector<Permutation> enumerate_subgroup(const Parabolic& j) {
  return filter_all(j.n(), [&](const Permutation& p) { return j.contains(p); });
}

std::vector<Permutation> enumerate_DJ(const Parabolic& j) {
  return filter_all(j.n(), [&](const Permutation& p) { return is_left_distinguished_fast(p, j); });
}

std::vector<Permutation> enumerate_DJ_inverse(const Parabolic& j) {
  return filter_all(j.n(), [&](const Permutation& p) { return is_right_distinguished(p, j); });
}

std::vector<Permutation> enumerate_DJK(const Parabolic& j, const Parabolic& k) {
  return filter_all(j.n(), [&](const Permutation& p) { return is_double_distinguished(p, j, k); });
}

std::vector<Permutation> enumerate_WJ_cap_DL(const Parabolic& j, const Parabolic& l) {
  return filter_all(j.n(), [&](const Permutation& p) {
    return j.contains(p) && is_left_distinguished_fast(p, l);
  });
}

qcalc::QPoly length_generating_poly(const std::vector<Permutation>& elems) {
  std::vector<qcalc::BigInt> c;
  for (const auto& p : elems) {
    const std::size_t l = static_cast<std::size_t>(length(p));
    if (c.size() <= l) c.resize(l + 1);
    c[l] += 1;
  }
  return qcalc::QPoly(std::move(c));
}

MooImage moo_bijection(const Permutation& sigma0, const Parabolic& j, const Parabolic& k) {
  if (!is_left_distinguished_fast(sigma0, k)) throw DomainError("moo_bijection: sigma0 is not in D_K");
  const DoubleCosetDecomposition dec = decompose_double(sigma0, j, k);
  if (!dec.b.is_identity()) throw ArithmeticError("moo_bijection: b is not the identity for sigma0 in D_K");
  return {dec.a, dec.d};
}

Permutation moo_inverse(const Permutation& a, const Permutation& d, const Parabolic& j,
                        const Parabolic& k) {
  if (!is_double_distinguished(d, j, k)) throw DomainError("moo_inverse: d is not in D_{J,K}");
  const Parabolic l = delta_L(d, j, k);
  if (!j.contains(a) || !is_left_distinguished_fast(a, l))
    throw DomainError("moo_inverse: a is not in W_J cap D_L");
  Permutation sigma0 = a * d;
  if (!is_left_distinguished_fast(sigma0, k)) throw ArithmeticError("moo_inverse: a d is not in D_K");
  return sigma0;
}

}  // namespace qex::coxeter
