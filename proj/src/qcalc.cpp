#include "qex/qcalc.hpp"

#include <cmath>
#include <sstream>

#include "qex/error.hpp"

namespace qex::qcalc {

QPoly::QPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

QPoly::QPoly(std::initializer_list<long long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

QPoly QPoly::constant(const BigInt& c) { return QPoly(std::vector<BigInt>{c}); }

QPoly QPoly::monomial(std::size_t degree, const BigInt& c) {
  std::vector<BigInt> v(degree + 1);
  v[degree] = c;
  return QPoly(std::move(v));
}

void QPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt QPoly::coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }

QPoly& QPoly::operator+=(const QPoly& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  normalize();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  normalize();
  return *this;
}

QPoly& QPoly::operator*=(const QPoly& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<BigInt> out(coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(out);
  normalize();
  return *this;
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& divisor) const {
  if (divisor.is_zero()) throw DomainError("QPoly::divmod: division by the zero polynomial");
  std::vector<BigInt> rem = coeffs_;
  const std::size_t dn = divisor.coeffs_.size();
  const BigInt& lead = divisor.coeffs_.back();
  if (rem.size() < dn) return {QPoly{}, *this};
  std::vector<BigInt> quot(rem.size() - dn + 1);
  for (std::size_t k = quot.size(); k-- > 0;) {
    const BigInt& top = rem[k + dn - 1];
    if (top == 0) continue;
    if (top % lead != 0) throw ArithmeticError("QPoly::divmod: quotient is not integral");
    BigInt c = top / lead;
    quot[k] = c;
    for (std::size_t j = 0; j < dn; ++j) rem[k + j] -= c * divisor.coeffs_[j];
  }
  return {QPoly(std::move(quot)), QPoly(std::move(rem))};
}

QPoly QPoly::exact_div(const QPoly& divisor) const {
  auto [quot, rem] = divmod(divisor);
  if (!rem.is_zero())
    throw ArithmeticError("QPoly::exact_div: remainder " + rem.to_string() + " dividing " +
                          to_string() + " by " + divisor.to_string());
  return quot;
}

double QPoly::eval(double q) const {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * q + coeffs_[i].convert_to<double>();
  return acc;
}

Rational QPoly::eval(const Rational& q) const {
  Rational acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * q + Rational(coeffs_[i]);
  return acc;
}

bool QPoly::has_nonnegative_coeffs() const {
  for (const auto& c : coeffs_)
    if (c < 0) return false;
  return true;
}

bool QPoly::is_palindromic() const {
  for (std::size_t i = 0, j = coeffs_.size(); i < j--; ++i)
    if (coeffs_[i] != coeffs_[j]) return false;
  return true;
}

std::string QPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag;
    if (i >= 1) os << "q";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_) {
    if (p < 1) throw DomainError("Composition: parts must be positive");
    total_ += p;
  }
}

std::string Composition::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ")";
  return os.str();
}

std::vector<Composition> compositions_of(int n) {
  std::vector<Composition> out;
  if (n <= 0) return out;
  // bit i of mask set <=> cut between positions i+1 and i+2
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> parts;
    int run = 1;
    for (int i = 0; i < n - 1; ++i) {
      if (mask & (1u << i)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    out.emplace_back(std::move(parts));
  }
  return out;
}

QPoly q_int(unsigned k) {
  std::vector<BigInt> c(k, BigInt(1));
  return QPoly(std::move(c));
}

QPoly q_factorial(unsigned k) {
  QPoly acc = QPoly::constant(1);
  for (unsigned i = 1; i <= k; ++i) acc *= q_int(i);
  return acc;
}

QPoly poincare(const Composition& m) {
  QPoly acc = QPoly::constant(1);
  for (int p : m.parts()) acc *= q_factorial(static_cast<unsigned>(p));
  return acc;
}

QPoly q_multinomial(const Composition& m) {
  return q_factorial(static_cast<unsigned>(m.total())).exact_div(poincare(m));
}

QPoly q_pochhammer_q(unsigned k) {
  QPoly acc = QPoly::constant(1);
  for (unsigned i = 1; i <= k; ++i) acc *= QPoly::constant(1) - QPoly::monomial(i);
  return acc;
}

double q_int_value(int k, double q) {
  double acc = 0.0, pw = 1.0;
  for (int i = 0; i < k; ++i) {
    acc += pw;
    pw *= q;
  }
  return acc;
}

double q_factorial_value(int k, double q) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc *= q_int_value(i, q);
  return acc;
}

double q_pochhammer(double a, unsigned k, double q) {
  double acc = 1.0, pw = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    acc *= 1.0 - pw * a;
    pw *= q;
  }
  return acc;
}

double q_pochhammer_inf(double a, double q, double tolerance) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q_pochhammer_inf: q must lie in (0,1)");
  double acc = 1.0, term = a;
  while (std::abs(term) >= tolerance) {
    acc *= 1.0 - term;
    term *= q;
  }
  return acc;
}

}  // namespace qex::qcalc
