#pragma once

// N-fold contour integrals for exact transition probabilities, evaluated by
// the trapezoid rule on concentric circles (spectrally accurate for
// integrands analytic near the contour).

#include <complex>
#include <functional>
#include <vector>

#include "qex/configs.hpp"
#include "qex/coxeter.hpp"
#include "qex/tazrp.hpp"

namespace qex::integrals {

using cplx = std::complex<double>;
using configs::Position;
using configs::Positions;
using configs::TazrpConfig;

struct ContourSpec {
  /// 0 selects the model default (2 max b for TAZRP, min(0.5, 0.5/(1+q)) for ASEP).
  double radius = 0.0;
  /// Initial nodes per circle; doubled until the error estimate meets `tol`.
  int points = 64;
  int max_points = 512;
  /// Hard cap on points^N per evaluation.
  long long max_grid = 1LL << 24;
  double tol = 1e-10;
  /// 0 uses default_workers().
  int workers = 0;
};

struct QuadResult {
  double value = 0.0;
  /// |I_M - I_{M/2}|, the latter on the even-index sub-grid.
  double quad_error_estimate = 0.0;
  double imag_residual = 0.0;
  int M = 0;
};

/// S_{(beta,alpha)} = -(q w_beta - w_alpha) / (q w_alpha - w_beta).
cplx tazrp_S(cplx w_beta, cplx w_alpha, double q, double radius = 1.0);

/// printed epsilon(xi) = 1/xi + q xi - 1.
cplx asep_eps(cplx xi, double q);
/// S_{(beta,alpha)} = -(1 + q xa xb - (1+q) xa) / (1 + q xa xb - (1+q) xb).
cplx asep_S(cplx xi_alpha, cplx xi_beta, double q);

enum class Flavor { Tazrp, Asep };

/// Product of S over inversions: positions a < c with sigma(a) > sigma(c)
/// contribute S_{(sigma(a), sigma(c))}.
cplx a_sigma(const coxeter::Permutation& sigma, const std::vector<cplx>& w, double q, Flavor flavor);

/// prod_{k=m}^{n} f(k) for n >= m, 1 for n = m-1, prod_{k=n+1}^{m-1} 1/f(k) for n < m-1.
cplx extended_product(const std::function<cplx(long)>& f, long m, long n);

/// The symmetrized single-species integral with its sign and b prefactor,
/// before any combinatorial prefactor.
QuadResult tazrp_kernel(const Positions& y, const Positions& x, double t, const tazrp::RateEnv& env,
                        const ContourSpec& contour = {});

/// Single-species q-TAZRP transition probability.
QuadResult tazrp_transition(const Positions& y, const Positions& x, double t, const tazrp::RateEnv& env,
                            const ContourSpec& contour = {});

/// Multi-species probability of (x, sigma) from the q-exchangeable law at y.
QuadResult tazrp_multi_prob(const Positions& y, const TazrpConfig& c, double t, const tazrp::RateEnv& env,
                            const ContourSpec& contour = {});
/// Combinatorial factor q^{l(sigma)} prod_j [N_j]! / ([N]! prod_ij [L_ij]!) applied to the kernel.
double tazrp_multi_prefactor(const TazrpConfig& c, double q);

/// Single-species ASEP transition probability on Z.
QuadResult asep_transition(const Positions& y, const Positions& x, double t, double q,
                           const ContourSpec& contour = {});
QuadResult asep_multi_prob(const Positions& y, const TazrpConfig& c, double t, double q,
                           const ContourSpec& contour = {});
/// q^{l(sigma)} prod_j [N_j]! / [N]!.
double asep_multi_prefactor(const TazrpConfig& c, double q);

double default_asep_radius(double q);

}  // namespace qex::integrals
