#pragma once

// Exact q-deformed arithmetic over Z[q].

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace qex::qcalc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer-coefficient polynomial in q. coeffs()[i] is the coefficient of
/// q^i; the highest stored coefficient is nonzero, the zero polynomial has no
/// coefficients.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<BigInt> coeffs);
  QPoly(std::initializer_list<long long> coeffs);

  static QPoly constant(const BigInt& c);
  static QPoly monomial(std::size_t degree, const BigInt& c = 1);

  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  BigInt coeff(std::size_t i) const;

  QPoly& operator+=(const QPoly& rhs);
  QPoly& operator-=(const QPoly& rhs);
  QPoly& operator*=(const QPoly& rhs);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(QPoly a, const QPoly& b) { return a *= b; }
  friend bool operator==(const QPoly&, const QPoly&) = default;

  /// Quotient and remainder over Q[q]; throws ArithmeticError when the
  /// quotient has non-integer coefficients. Throws DomainError on a zero divisor.
  std::pair<QPoly, QPoly> divmod(const QPoly& divisor) const;
  /// Quotient that must be exact; a nonzero remainder throws ArithmeticError.
  QPoly exact_div(const QPoly& divisor) const;

  double eval(double q) const;
  Rational eval(const Rational& q) const;

  bool has_nonnegative_coeffs() const;
  bool is_palindromic() const;

  std::string to_string() const;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

/// Ordered sequence of positive parts m_1, ..., m_r.
class Composition {
 public:
  Composition() = default;
  /// Throws DomainError if any part is < 1.
  explicit Composition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int total() const { return total_; }
  std::size_t size() const { return parts_.size(); }
  int operator[](std::size_t i) const { return parts_[i]; }

  friend bool operator==(const Composition&, const Composition&) = default;

  std::string to_string() const;

 private:
  std::vector<int> parts_;
  int total_ = 0;
};

/// Every composition of n, in lexicographic order of parts.
std::vector<Composition> compositions_of(int n);

QPoly q_int(unsigned k);
QPoly q_factorial(unsigned k);
QPoly q_multinomial(const Composition& m);
/// Poincare polynomial of the Young subgroup S(m_1) x ... x S(m_r).
QPoly poincare(const Composition& m);
/// (q; q)_k as a polynomial, prod_{i=1}^{k} (1 - q^i).
QPoly q_pochhammer_q(unsigned k);

double q_int_value(int k, double q);
double q_factorial_value(int k, double q);

/// (a; q)_k = prod_{i<k} (1 - q^i a).
double q_pochhammer(double a, unsigned k, double q);

/// Infinite symbol, truncated once |q^i a| drops below `tolerance`.
double q_pochhammer_inf(double a, double q, double tolerance = 1e-16);

}  // namespace qex::qcalc
