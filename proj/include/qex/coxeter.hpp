#pragma once

// Type-A Coxeter machinery on the symmetric group S(N): inversion length,
// the reflection representation on the simple-root lattice, Young (parabolic)
// subgroups, and distinguished single and double coset representatives.

#include <compare>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qex/qcalc.hpp"

namespace qex::coxeter {

/// Hard bound for the exhaustive enumerations below (8! = 40320 elements).
inline constexpr int kMaxEnumerationN = 8;

/// How a permutation is written as a digit/number sequence.
///  - OneLine: entry i is sigma(i).
///  - TwoLine: entry j is sigma^{-1}(j), the top row of the two-line array
///    over 1..N. This is the notation used for sigma in printed examples of
///    particle configurations ("species j sits at x_{sigma_j}").
enum class Notation { OneLine, TwoLine };

/// Element of S(N). Products compose right to left: (a * b)(i) = a(b(i)), so
/// left multiplication by s_i swaps the values i, i+1 and right
/// multiplication swaps the positions i, i+1.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int n);
  /// Values are 1-based; throws DomainError if not a bijection of 1..n.
  static Permutation from_oneline(const std::vector<int>& oneline);
  static Permutation from_inverse_oneline(const std::vector<int>& inverse_oneline);
  /// s_{w[0]} s_{w[1]} ... s_{w[k-1]} in S(n).
  static Permutation from_word(int n, const std::vector<int>& word);
  /// Accepts "21467358" (single digits, n <= 9) or "2,1,4,6".
  static Permutation parse(std::string_view text, Notation notation = Notation::OneLine);

  int size() const { return static_cast<int>(img_.size()); }
  /// sigma(i), 1-based in and out.
  int operator()(int i) const { return img_[i - 1] + 1; }
  std::vector<int> oneline() const;
  /// sigma_j = sigma^{-1}(j).
  std::vector<int> inverse_oneline() const;

  Permutation inverse() const;
  Permutation operator*(const Permutation& rhs) const;
  /// sigma * s_i.
  Permutation times_simple(int i) const;
  /// s_i * sigma.
  Permutation simple_times(int i) const;

  bool is_identity() const;
  /// Reduced word, taking the largest left descent first.
  std::vector<int> reduced_word() const;

  std::string to_string(Notation notation = Notation::OneLine) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

  const std::vector<int>& zero_based() const { return img_; }

 private:
  explicit Permutation(std::vector<int> img) : img_(std::move(img)) {}
  std::vector<int> img_;  // img_[i] = sigma(i+1) - 1
};

/// "s6s2", or "e" for the empty word.
std::string word_to_string(const std::vector<int>& word);

/// Number of inversions #{i<j : sigma(i) > sigma(j)}.
int length(const Permutation& sigma);

/// Coefficients over the simple roots alpha_1..alpha_{N-1}.
using RootVec = std::vector<long>;

RootVec simple_root(int n, int i);
bool is_root(const RootVec& v);
bool is_positive_root(const RootVec& v);
bool is_negative_root(const RootVec& v);
/// All N(N-1)/2 positive roots alpha_i + ... + alpha_j.
std::vector<RootVec> positive_roots(int n);

/// Image of v under the simple reflection s_i, using the type-A Cartan
/// matrix: s_i(alpha_j) = alpha_j - a_ij alpha_i.
RootVec reflect(int i, RootVec v);
/// tau_sigma(v), applying the simple reflections of a reduced word of sigma
/// right to left.
RootVec tau_apply(const Permutation& sigma, const RootVec& v);
RootVec tau_inverse_apply(const Permutation& sigma, const RootVec& v);

/// Young subgroup W_J of S(n) given by its set of simple generators Delta_J.
class Parabolic {
 public:
  Parabolic() = default;
  /// Delta_J = { i : positions i, i+1 lie in the same block of m }.
  explicit Parabolic(const qcalc::Composition& m);
  /// Directly from simple indices in 1..n-1; throws DomainError otherwise.
  Parabolic(int n, const std::set<int>& simple_indices);

  static Parabolic trivial(int n);
  static Parabolic full(int n);

  int n() const { return n_; }
  bool has_simple(int i) const { return i >= 1 && i < n_ && gen_[i]; }
  std::set<int> simple_indices() const;
  /// Block sizes in order; the composition that generates the same subgroup.
  qcalc::Composition composition() const;
  /// Block index (0-based) of position i (1-based).
  int block_of(int i) const;
  /// sigma in W_J, i.e. sigma maps every block onto itself.
  bool contains(const Permutation& sigma) const;

  friend bool operator==(const Parabolic&, const Parabolic&) = default;

 private:
  int n_ = 0;
  std::vector<bool> gen_;  // gen_[i] for i in 1..n-1
};

/// sigma in D_J: tau_sigma(Delta_J) is contained in the positive roots
/// (root-system criterion, evaluated literally).
bool is_left_distinguished(const Permutation& sigma, const Parabolic& j);
/// Same set as is_left_distinguished via the descent criterion
/// sigma(i) < sigma(i+1) for all i in Delta_J.
bool is_left_distinguished_fast(const Permutation& sigma, const Parabolic& j);
/// sigma in D_J^{-1} (minimal in its right coset W_J sigma).
bool is_right_distinguished(const Permutation& sigma, const Parabolic& j);
/// sigma in D_{J,K} = D_J^{-1} cap D_K.
bool is_double_distinguished(const Permutation& sigma, const Parabolic& j, const Parabolic& k);

/// w = x * d * y with x in W_J, y in W_K and d the minimal element of the
/// double coset. Found by greedy length reduction, lowest generator first,
/// left side before right side.
struct DoubleReduction {
  Permutation x;
  Permutation d;
  Permutation y;
};
DoubleReduction reduce_double(const Permutation& w, const Parabolic& j, const Parabolic& k);

Permutation min_double_rep(const Permutation& w, const Parabolic& j, const Parabolic& k);

/// Delta_L = Delta_J cap tau_d(Delta_K). Throws DomainError if d is not in D_{J,K}.
Parabolic delta_L(const Permutation& d, const Parabolic& j, const Parabolic& k);

/// w = a * d * b with d in D_{J,K}, a in W_J cap D_L, b in W_K and
/// l(w) = l(a) + l(d) + l(b).
struct DoubleCosetDecomposition {
  Permutation a;
  Permutation d;
  Permutation b;
};
/// Throws ArithmeticError if a postcondition fails.
DoubleCosetDecomposition decompose_double(const Permutation& w, const Parabolic& j,
                                          const Parabolic& k);

/// x = a * x' with a in D_L and x' in W_L (left-coset factorization).
struct LeftCosetFactor {
  Permutation rep;
  Permutation sub;
};
LeftCosetFactor factor_left_coset(const Permutation& x, const Parabolic& l);

// Exhaustive enumerations. Each throws EnumerationBoundError above
// kMaxEnumerationN. Results are sorted.
std::vector<Permutation> enumerate_all(int n);
std::vector<Permutation> enumerate_subgroup(const Parabolic& j);
std::vector<Permutation> enumerate_DJ(const Parabolic& j);
std::vector<Permutation> enumerate_DJ_inverse(const Parabolic& j);
std::vector<Permutation> enumerate_DJK(const Parabolic& j, const Parabolic& k);
std::vector<Permutation> enumerate_WJ_cap_DL(const Parabolic& j, const Parabolic& l);

/// Sum over elements of q^{length}.
qcalc::QPoly length_generating_poly(const std::vector<Permutation>& elems);

/// sigma0 in D_K  ->  (a, d) with sigma0 = a d, d in D_{J,K}, a in W_J cap D_L(d).
struct MooImage {
  Permutation a;
  Permutation d;
};
MooImage moo_bijection(const Permutation& sigma0, const Parabolic& j, const Parabolic& k);
/// Inverse map; throws DomainError when (a, d) is outside the image.
Permutation moo_inverse(const Permutation& a, const Permutation& d, const Parabolic& j,
                        const Parabolic& k);

}  // namespace qex::coxeter

template <>
struct std::hash<qex::coxeter::Permutation> {
  std::size_t operator()(const qex::coxeter::Permutation& p) const noexcept {
    std::size_t h = 0;
    for (int v : p.zero_based()) h = h * 131 + static_cast<std::size_t>(v) + 1;
    return h;
  }
};
