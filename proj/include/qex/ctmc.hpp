#pragma once

// Finite continuous-time Markov chains on an enumerated state set.

#include <cstddef>
#include <utility>
#include <vector>

namespace qex::ctmc {

/// Off-diagonal rates per row plus the total exit rate. The exit rate may
/// exceed the sum of listed rates: the difference is mass leaving the
/// enumerated set, which never returns.
template <class Real>
struct SparseGenerator {
  std::vector<std::vector<std::pair<std::size_t, Real>>> out;
  std::vector<Real> exit_rate;

  std::size_t size() const { return exit_rate.size(); }

  void resize(std::size_t n) {
    out.assign(n, {});
    exit_rate.assign(n, Real(0));
  }

  /// Rate of leaving the enumerated set from row i.
  Real leak(std::size_t i) const {
    Real s = exit_rate[i];
    for (const auto& [j, r] : out[i]) s -= r;
    return s;
  }

  /// p L as a row vector, with the diagonal equal to -exit_rate.
  std::vector<Real> left_multiply(const std::vector<Real>& p) const {
    std::vector<Real> r(size(), Real(0));
    for (std::size_t i = 0; i < size(); ++i) {
      if (p[i] == Real(0)) continue;
      r[i] -= p[i] * exit_rate[i];
      for (const auto& [j, rate] : out[i]) r[j] += p[i] * rate;
    }
    return r;
  }
};

/// States above this count use uniformization instead of a dense exponential.
inline constexpr std::size_t kDenseLimit = 2000;

enum class Method { Auto, Dense, Uniformization };

/// p0 exp(t L). Throws ConvergenceError if uniformization cannot reach `tol`.
std::vector<double> transient(const SparseGenerator<double>& gen, const std::vector<double>& p0, double t,
                              Method method = Method::Auto, double tol = 1e-14);

}  // namespace qex::ctmc
