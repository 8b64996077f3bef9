#include "qex/ctmc.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qex/error.hpp"

namespace qex::ctmc {

namespace {

std::vector<double> dense(const SparseGenerator<double>& gen, const std::vector<double>& p0, double t) {
  const Eigen::Index n = static_cast<Eigen::Index>(gen.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    l(i, i) = -gen.exit_rate[i];
    for (const auto& [j, r] : gen.out[i]) l(i, static_cast<Eigen::Index>(j)) += r;
  }
  const Eigen::MatrixXd e = (l * t).exp();
  const Eigen::RowVectorXd p = Eigen::Map<const Eigen::RowVectorXd>(p0.data(), n) * e;
  return std::vector<double>(p.data(), p.data() + n);
}

// p exp(t L) = sum_k Poisson(k; lambda t) p P^k with P = I + L / lambda.
// Long intervals are split so that lambda * dt stays moderate.
std::vector<double> uniformize(const SparseGenerator<double>& gen, std::vector<double> p, double t, double tol) {
  double lambda = 0.0;
  for (double r : gen.exit_rate) lambda = std::max(lambda, r);
  if (lambda == 0.0 || t == 0.0) return p;
  lambda *= 1.02;
  const int chunks = std::max(1, static_cast<int>(std::ceil(lambda * t / 30.0)));
  const double dt = t / chunks;
  const double mean = lambda * dt;
  const double chunk_tol = tol / chunks;
  const std::size_t n = gen.size();

  for (int c = 0; c < chunks; ++c) {
    std::vector<double> term = p, next(n), acc(n, 0.0);
    double weight = std::exp(-mean);
    for (std::size_t i = 0; i < n; ++i) acc[i] = weight * term[i];
    int k = 0;
    // Remaining Poisson tail after term k is below weight * r / (1 - r), r = mean / (k + 1).
    auto tail = [&]() {
      const double r = mean / (k + 1);
      return r < 1.0 ? weight * r / (1.0 - r) : 1.0;
    };
    while (tail() > chunk_tol) {
      ++k;
      if (k > 100000) throw ConvergenceError("uniformization: Poisson series did not converge");
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (term[i] == 0.0) continue;
        next[i] += term[i] * (1.0 - gen.exit_rate[i] / lambda);
        for (const auto& [j, r] : gen.out[i]) next[j] += term[i] * r / lambda;
      }
      term.swap(next);
      weight *= mean / k;
      for (std::size_t i = 0; i < n; ++i) acc[i] += weight * term[i];
    }
    p.swap(acc);
  }
  return p;
}

}  // namespace

std::vector<double> transient(const SparseGenerator<double>& gen, const std::vector<double>& p0, double t,
                              Method method, double tol) {
  if (p0.size() != gen.size()) throw DomainError("transient: initial vector has the wrong size");
  if (t < 0) throw DomainError("transient: negative time");
  if (method == Method::Auto) method = gen.size() <= kDenseLimit ? Method::Dense : Method::Uniformization;
  return method == Method::Dense ? dense(gen, p0, t) : uniformize(gen, p0, t, tol);
}

}  // namespace qex::ctmc
