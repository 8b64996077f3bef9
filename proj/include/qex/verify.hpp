#pragma once
// Self-contained verification suites. Each suite cross-checks one module
// against exhaustive enumeration, exact arithmetic or an independent
// numerical oracle, and reports every assertion separately.
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace qex::verify {

struct Assertion {
  std::string name;
  bool passed = false;
  /// Observed deviation or count, when the assertion is numeric.
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Report {
  std::string suite;
  std::vector<Assertion> assertions;

  bool passed() const;
  std::size_t failures() const;
  /// Exact check: passes iff `ok`.
  void check(std::string name, bool ok, std::string detail = {});
  /// Numeric check: passes iff value <= tolerance (NaN fails).
  void bound(std::string name, double value, double tolerance, std::string detail = {});
  void append(const Report& other);
  /// Deterministic: no timings, fixed key order.
  nlohmann::json to_json() const;
};

struct Options {
  /// Particle count for formula-vs-oracle (2 or 3).
  int n = 2;
  double t = 1.0;
  double q = 0.5;
  /// Initial quadrature nodes per circle.
  int points = 64;
  /// ASEP window half-width.
  int window = 14;
  std::uint64_t trajectories = 20000;
  std::uint64_t seed = 42;
  /// Largest N for exhaustive combinatorial suites.
  int max_n = 6;
  int workers = 0;
};

/// q-identities, coxeter, configs, lumpability, exchangeability,
/// stationarity, formula-vs-oracle, monte-carlo.
const std::vector<std::string>& suite_names();

Report q_identities(const Options& o);
Report coxeter_suite(const Options& o);
Report configs_suite(const Options& o);
Report lumpability(const Options& o);
Report exchangeability(const Options& o);
Report stationarity(const Options& o);
Report formula_vs_oracle(const Options& o);
Report monte_carlo(const Options& o);

/// Runs one suite by name, or every suite for "all". Throws DomainError for
/// an unknown name.
Report run(const std::string& suite, const Options& o);

}  // namespace qex::verify
