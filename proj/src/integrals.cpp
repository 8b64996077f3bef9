#include "qex/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qex/error.hpp"
#include "qex/parallel.hpp"

namespace qex::integrals {

using coxeter::Permutation;

cplx tazrp_S(cplx w_beta, cplx w_alpha, double q, double radius) {
  const cplx den = q * w_alpha - w_beta;
  if (std::abs(den) < 1e-13 * radius) throw ContourError("tazrp_S: denominator vanishes on the contour");
  return -(q * w_beta - w_alpha) / den;
}

cplx asep_eps(cplx xi, double q) {
  if (xi == cplx(0.0)) throw DomainError("asep_eps: xi must be nonzero");
  return 1.0 / xi + q * xi - 1.0;
}

cplx asep_S(cplx xi_alpha, cplx xi_beta, double q) {
  const cplx prod = q * xi_alpha * xi_beta;
  const cplx den = 1.0 + prod - (1.0 + q) * xi_beta;
  if (std::abs(den) < 1e-13) throw ContourError("asep_S: denominator vanishes on the contour");
  return -(1.0 + prod - (1.0 + q) * xi_alpha) / den;
}

namespace {

struct PermData {
  std::vector<int> img;                      // 0-based one-line
  std::vector<std::pair<int, int>> inv;      // (beta, alpha), 0-based variable indices
};

std::vector<PermData> all_perm_data(int n) {
  std::vector<PermData> out;
  for (const Permutation& s : coxeter::enumerate_all(n)) {
    PermData d;
    d.img = s.zero_based();
    for (int a = 0; a < n; ++a)
      for (int c = a + 1; c < n; ++c)
        if (d.img[a] > d.img[c]) d.inv.emplace_back(d.img[a], d.img[c]);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

cplx a_sigma(const Permutation& sigma, const std::vector<cplx>& w, double q, Flavor flavor) {
  if (static_cast<int>(w.size()) != sigma.size()) throw DomainError("a_sigma: variable count mismatch");
  const auto& img = sigma.zero_based();
  double scale = 0.0;
  for (const cplx& v : w) scale = std::max(scale, std::abs(v));
  cplx a = 1.0;
  for (std::size_t p = 0; p < img.size(); ++p) {
    for (std::size_t c = p + 1; c < img.size(); ++c) {
      if (img[p] <= img[c]) continue;
      const cplx wb = w[img[p]], wa = w[img[c]];
      a *= flavor == Flavor::Tazrp ? tazrp_S(wb, wa, q, scale) : asep_S(wa, wb, q);
    }
  }
  return a;
}

cplx extended_product(const std::function<cplx(long)>& f, long m, long n) {
  cplx r = 1.0;
  if (n >= m) {
    for (long k = m; k <= n; ++k) r *= f(k);
    return r;
  }
  for (long k = n + 1; k <= m - 1; ++k) {
    const cplx v = f(k);
    if (v == cplx(0.0)) throw ArithmeticError("extended_product: zero factor in the reciprocal branch");
    r /= v;
  }
  return r;
}

namespace {

// Compensated complex accumulator.
struct Neumaier {
  double sr = 0, cr = 0, si = 0, ci = 0;
  static void add(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  void operator+=(cplx v) {
    add(sr, cr, v.real());
    add(si, ci, v.imag());
  }
  cplx value() const { return {sr + cr, si + ci}; }
};

// Integrand pieces on an M-point circle:
//   per(j, i, m): factor for position j carried by variable i at node m
//   common(m):    per-variable factor including the dw = i w dtheta measure
//   s(mb, ma):    two-body amplitude S_{(beta,alpha)}
struct Tables {
  int n = 0;
  int M = 0;
  std::vector<cplx> per, common, s;
  cplx per_at(int j, int i, int m) const { return per[(static_cast<std::size_t>(j) * n + i) * M + m]; }
};

using TableBuilder = std::function<Tables(int M)>;

// Returns (I_M, I_{M/2}) with (1/2 pi i)^N int f dw ~ M^{-N} sum f(w) prod w.
std::pair<cplx, cplx> grid_sum(const Tables& tb, const std::vector<PermData>& perms, int workers) {
  const int n = tb.n, M = tb.M;
  std::vector<cplx> full(static_cast<std::size_t>(M)), half(static_cast<std::size_t>(M));
  parallel_for(static_cast<std::uint64_t>(M), workers, [&](std::uint64_t b, std::uint64_t e, int) {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::uint64_t m1 = b; m1 < e; ++m1) {
      Neumaier f, h;
      std::fill(idx.begin(), idx.end(), 0);
      idx[0] = static_cast<int>(m1);
      while (true) {
        cplx sum = 0.0;
        for (const PermData& p : perms) {
          cplx a = 1.0;
          for (const auto& [be, al] : p.inv) a *= tb.s[static_cast<std::size_t>(idx[be]) * M + idx[al]];
          for (int j = 0; j < n; ++j) {
            const int i = p.img[j];
            a *= tb.per_at(j, i, idx[i]);
          }
          sum += a;
        }
        bool even = true;
        for (int j = 0; j < n; ++j) {
          sum *= tb.common[idx[j]];
          even = even && idx[j] % 2 == 0;
        }
        f += sum;
        if (even) h += sum;
        int k = 1;
        while (k < n && ++idx[k] == M) idx[k++] = 0;
        if (k >= n) break;
      }
      full[m1] = f.value();
      half[m1] = h.value();
    }
  });
  Neumaier f, h;
  for (int m = 0; m < M; ++m) {
    f += full[m];
    h += half[m];
  }
  const double scale = std::pow(static_cast<double>(M), n);
  return {f.value() / scale, h.value() * std::pow(2.0, n) / scale};
}

QuadResult integrate(int n, const TableBuilder& build, const ContourSpec& spec) {
  if (spec.points < 2 || (spec.points & (spec.points - 1)) != 0)
    throw DomainError("contour: the number of points must be a power of two");
  const int workers = spec.workers > 0 ? spec.workers : default_workers();
  const auto perms = all_perm_data(n);
  int M = spec.points;
  while (true) {
    if (std::pow(static_cast<double>(M), n) > static_cast<double>(spec.max_grid))
      throw ConvergenceError("contour: grid exceeds the configured size before convergence");
    const auto [full, half] = grid_sum(build(M), perms, workers);
    QuadResult r;
    r.value = full.real();
    r.imag_residual = std::abs(full.imag());
    r.quad_error_estimate = std::abs(full - half);
    r.M = M;
    if (r.quad_error_estimate <= spec.tol) return r;
    if (2 * M > spec.max_points)
      throw ConvergenceError("contour: error estimate " + std::to_string(r.quad_error_estimate) +
                             " above tolerance at M = " + std::to_string(M));
    M *= 2;
  }
}

std::vector<cplx> nodes(int M, double radius) {
  std::vector<cplx> w(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) w[m] = std::polar(radius, 2.0 * std::numbers::pi * m / M);
  return w;
}

void check_pair(const Positions& y, const Positions& x, bool strict) {
  if (y.size() != x.size() || y.empty()) throw DomainError("integrals: y and x must have the same nonzero length");
  for (std::size_t i = 1; i < y.size(); ++i) {
    const bool bad = strict ? (y[i] >= y[i - 1] || x[i] >= x[i - 1]) : (y[i] > y[i - 1] || x[i] > x[i - 1]);
    if (bad) throw DomainError(strict ? "integrals: positions must be strictly decreasing"
                                      : "integrals: positions must be weakly decreasing");
  }
}


double factorial_ratio_species(const TazrpConfig& c, double q) {
  double r = 1.0;
  for (int nj : c.species_counts) r *= qcalc::q_factorial_value(nj, q);
  return r / qcalc::q_factorial_value(c.size(), q);
}

}  // namespace

QuadResult tazrp_kernel(const Positions& y, const Positions& x, double t, const tazrp::RateEnv& env,
                        const ContourSpec& contour) {
  env.validate();
  check_pair(y, x, false);
  if (t < 0) throw DomainError("tazrp_kernel: negative time");
  const int n = static_cast<int>(y.size());
  const Position lo = std::min(*std::min_element(y.begin(), y.end()), *std::min_element(x.begin(), x.end())) - 1;
  const Position hi = std::max(*std::max_element(y.begin(), y.end()), *std::max_element(x.begin(), x.end())) + 1;
  double bmax = 0.0;
  for (Position k = lo; k <= hi; ++k) bmax = std::max(bmax, env.b_at(k));
  const double radius = contour.radius > 0 ? contour.radius : 2.0 * bmax;
  if (radius <= bmax) throw ContourError("tazrp contour must enclose every b_k");

  const double q = env.q;
  auto build = [&](int M) {
    Tables tb;
    tb.n = n;
    tb.M = M;
    const auto w = nodes(M, radius);
    tb.per.resize(static_cast<std::size_t>(n) * n * M);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) {
          auto f = [&](long k) {
            const double b = env.b_at(k);
            return cplx(b) / (b - w[m]);
          };
          tb.per[(static_cast<std::size_t>(j) * n + i) * M + m] = extended_product(f, y[i], x[j]);
        }
    tb.common.resize(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) tb.common[m] = w[m] * std::exp(-w[m] * t);
    tb.s.resize(static_cast<std::size_t>(M) * M);
    for (int mb = 0; mb < M; ++mb)
      for (int ma = 0; ma < M; ++ma) tb.s[static_cast<std::size_t>(mb) * M + ma] = tazrp_S(w[mb], w[ma], q, radius);
    return tb;
  };
  QuadResult r = integrate(n, build, contour);
  double pref = n % 2 ? -1.0 : 1.0;
  for (Position xj : x) pref /= env.b_at(xj);
  r.value *= pref;
  r.imag_residual *= std::abs(pref);
  r.quad_error_estimate *= std::abs(pref);
  return r;
}

namespace {

QuadResult scaled(QuadResult r, double f) {
  r.value *= f;
  r.imag_residual *= std::abs(f);
  r.quad_error_estimate *= std::abs(f);
  return r;
}

}  // namespace

QuadResult tazrp_transition(const Positions& y, const Positions& x, double t, const tazrp::RateEnv& env,
                            const ContourSpec& contour) {
  double f = 1.0;
  const qcalc::Composition m = configs::composition_of(x);
  for (int part : m.parts()) f /= qcalc::q_factorial_value(part, env.q);
  return scaled(tazrp_kernel(y, x, t, env, contour), f);
}

double tazrp_multi_prefactor(const TazrpConfig& c, double q) {
  double f = std::pow(q, coxeter::length(c.sigma)) * factorial_ratio_species(c, q);
  for (const auto& row : configs::l_counts(c))
    for (int l : row) f /= qcalc::q_factorial_value(l, q);
  return f;
}

QuadResult tazrp_multi_prob(const Positions& y, const TazrpConfig& c, double t, const tazrp::RateEnv& env,
                            const ContourSpec& contour) {
  configs::validate(c);
  return scaled(tazrp_kernel(y, c.x, t, env, contour), tazrp_multi_prefactor(c, env.q));
}

double default_asep_radius(double q) { return std::min(0.5, 0.5 / (1.0 + q)); }

QuadResult asep_transition(const Positions& y, const Positions& x, double t, double q, const ContourSpec& contour) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("asep_transition: q must lie in [0,1)");
  check_pair(y, x, true);
  if (t < 0) throw DomainError("asep_transition: negative time");
  const int n = static_cast<int>(y.size());
  const double r0 = contour.radius > 0 ? contour.radius : default_asep_radius(q);
  if (1.0 - (1.0 + q) * r0 - q * r0 * r0 <= 0.0)
    throw ContourError("asep contour radius too large: the amplitude denominator can vanish");
  auto build = [&](int M) {
    Tables tb;
    tb.n = n;
    tb.M = M;
    const auto xi = nodes(M, r0);
    tb.per.resize(static_cast<std::size_t>(n) * n * M);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m)
          tb.per[(static_cast<std::size_t>(j) * n + i) * M + m] =
              std::pow(xi[m], static_cast<int>(x[j] - y[i] - 1));
    tb.common.resize(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) tb.common[m] = xi[m] * std::exp((asep_eps(xi[m], q) - q) * t);
    tb.s.resize(static_cast<std::size_t>(M) * M);
    for (int mb = 0; mb < M; ++mb)
      for (int ma = 0; ma < M; ++ma) tb.s[static_cast<std::size_t>(mb) * M + ma] = asep_S(xi[ma], xi[mb], q);
    return tb;
  };
  return integrate(n, build, contour);
}

double asep_multi_prefactor(const TazrpConfig& c, double q) {
  return std::pow(q, coxeter::length(c.sigma)) * factorial_ratio_species(c, q);
}

QuadResult asep_multi_prob(const Positions& y, const TazrpConfig& c, double t, double q, const ContourSpec& contour) {
  configs::validate_asep(c);
  return scaled(asep_transition(y, c.x, t, q, contour), asep_multi_prefactor(c, q));
}

}  // namespace qex::integrals
