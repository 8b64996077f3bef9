// Command-line front end: coset decompositions, exact and simulated
// transition probabilities, stationarity residuals and verification suites.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qex/asep.hpp"
#include "qex/configs.hpp"
#include "qex/coxeter.hpp"
#include "qex/error.hpp"
#include "qex/integrals.hpp"
#include "qex/markov.hpp"
#include "qex/parallel.hpp"
#include "qex/qcalc.hpp"
#include "qex/tazrp.hpp"
#include "qex/verify.hpp"

namespace {

using namespace qex;
using configs::Occupation;
using configs::Position;
using configs::Positions;
using configs::TazrpConfig;
using coxeter::Notation;
using coxeter::Permutation;

constexpr int kUsage = 2;
constexpr int kFailed = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared model parameters; invariants checked before any computation.
struct RunConfig {
  double q = 0.5;
  double t = 1.0;
  std::string b_path;
  int m = 64;
  int window = 14;
  std::uint64_t traj = 100000;
  std::uint64_t seed = 42;
  int workers = 0;
  std::string out_path;
  std::string notation = "two-line";

  void validate() const {
    if (!(q > 0.0 && q < 1.0)) throw UsageError("--q must lie in (0,1)");
    if (!(t >= 0.0)) throw UsageError("--t must be nonnegative");
    if (m < 16 || m > 512 || (m & (m - 1)) != 0) throw UsageError("--m must be a power of two in [16,512]");
    if (window < 1) throw UsageError("--window must be positive");
  }
  Notation sigma_notation() const {
    if (notation == "two-line") return Notation::TwoLine;
    if (notation == "one-line") return Notation::OneLine;
    throw UsageError("--notation must be two-line or one-line");
  }
  int worker_count() const { return workers > 0 ? workers : default_workers(); }
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// { "<site>": rate, ... }; absent sites keep b = 1.
tazrp::RateEnv rate_env(const RunConfig& rc) {
  tazrp::RateEnv env;
  env.q = rc.q;
  if (!rc.b_path.empty()) {
    const nlohmann::json j = read_json(rc.b_path);
    if (!j.is_object()) throw UsageError("b file must map sites to rates");
    for (const auto& [site, rate] : j.items()) env.b[std::stoll(site)] = rate.get<double>();
  }
  env.validate();
  return env;
}

// { "y": [...], "species_counts": [...], "weighting": "literal" | "projected" }
tazrp::QExchangeableInit read_init(const std::string& path) {
  const nlohmann::json j = read_json(path);
  tazrp::QExchangeableInit init;
  try {
    init.y = j.at("y").get<Positions>();
    init.species_counts = j.at("species_counts").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  const std::string w = j.value("weighting", "literal");
  if (w == "projected") init.weighting = tazrp::InitWeight::Projected;
  else if (w != "literal") throw UsageError("weighting must be literal or projected");
  return init;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void csv_header(std::ostream& os, int n, bool with_stderr) {
  for (int i = 1; i <= n; ++i) os << "x" << i << ",";
  for (int i = 1; i <= n; ++i) os << "sigma" << i << ",";
  os << "probability" << (with_stderr ? ",stderr" : "") << "\n";
}

void csv_row(std::ostream& os, const TazrpConfig& c, double p, std::optional<double> se) {
  for (Position v : c.x) os << v << ",";
  for (int v : c.sigma.inverse_oneline()) os << v << ",";
  os << fmt(p);
  if (se) os << "," << fmt(*se);
  os << "\n";
}

void write_master(std::ostream& os, const markov::StateIndex& states, const std::vector<double>& p, int n) {
  csv_header(os, n, false);
  for (std::size_t i = 0; i < states.size(); ++i) csv_row(os, configs::from_occupation(states[i]), p[i], std::nullopt);
}

void write_empirical(std::ostream& os, const markov::Empirical& emp, int n) {
  csv_header(os, n, true);
  for (const auto& [s, count] : emp.counts) csv_row(os, configs::from_occupation(s), emp.frequency(s), emp.std_error(s));
}

void write_quad(std::ostream& os, const integrals::QuadResult& r) {
  const nlohmann::json j{{"value", r.value},
                         {"quad_error_estimate", r.quad_error_estimate},
                         {"imag_residual", r.imag_residual},
                         {"M", r.M}};
  os << j.dump(2) << "\n";
}

Positions bumped(Positions y, Position by) {
  for (auto& v : y) v += by;
  return y;
}

qcalc::Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return qcalc::Rational(std::stoll(s));
    const long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw UsageError("--q has a zero denominator");
    qcalc::Rational r(std::stoll(s.substr(0, slash)));
    r /= den;
    return r;
  } catch (const std::invalid_argument&) {
    throw UsageError("--q must be a rational like 1/2");
  } catch (const std::out_of_range&) {
    throw UsageError("--q must be a rational like 1/2");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated transition probabilities for multi-species q-TAZRP and ASEP"};
  app.require_subcommand(1);
  RunConfig rc;

  auto model_flags = [&rc](CLI::App* c) {
    c->add_option("--q", rc.q, "asymmetry parameter in (0,1)");
    c->add_option("--t", rc.t, "time");
    c->add_option("--out", rc.out_path, "output file (default stdout)");
  };

  // coxeter decompose
  auto* cox = app.add_subcommand("coxeter", "symmetric group cosets");
  cox->require_subcommand(1);
  auto* dec = cox->add_subcommand("decompose", "w = a d b with d minimal in W_J w W_K");
  int dec_n = 0;
  std::vector<int> dec_j, dec_k;
  std::string dec_w;
  dec->add_option("--n", dec_n, "group rank N")->required();
  dec->add_option("--j", dec_j, "left composition")->required()->delimiter(',');
  dec->add_option("--k", dec_k, "right composition")->required()->delimiter(',');
  dec->add_option("--w", dec_w, "permutation")->required();
  dec->add_option("--notation", rc.notation, "two-line (default) or one-line");

  // tazrp
  auto* tz = app.add_subcommand("tazrp", "multi-species q-TAZRP");
  tz->require_subcommand(1);
  Positions py, px;
  std::string psigma;
  std::vector<int> pspecies;
  auto prob_flags = [&](CLI::App* c) {
    c->add_option("--y", py, "start positions, weakly decreasing")->required()->delimiter(',');
    c->add_option("--x", px, "target positions")->required()->delimiter(',');
    c->add_option("--sigma", psigma, "target permutation; default identity");
    c->add_option("--species", pspecies, "species counts; default all distinct")->delimiter(',');
    c->add_option("--m", rc.m, "initial quadrature nodes per circle");
    c->add_option("--notation", rc.notation, "two-line (default) or one-line");
    model_flags(c);
  };
  auto* tz_prob = tz->add_subcommand("prob", "contour-integral probability");
  prob_flags(tz_prob);
  tz_prob->add_option("--b", rc.b_path, "JSON map site -> rate");
  std::string init_path;
  Position reach = 4;
  auto* tz_master = tz->add_subcommand("master", "forward equation on the reachable box");
  tz_master->add_option("--init", init_path, "initial law JSON")->required();
  tz_master->add_option("--b", rc.b_path, "JSON map site -> rate");
  tz_master->add_option("--reach", reach, "box is y <= x <= y + reach");
  model_flags(tz_master);
  auto* tz_mc = tz->add_subcommand("mc", "Gillespie simulation");
  tz_mc->add_option("--init", init_path, "initial law JSON")->required();
  tz_mc->add_option("--b", rc.b_path, "JSON map site -> rate");
  tz_mc->add_option("--traj", rc.traj, "trajectories");
  tz_mc->add_option("--seed", rc.seed, "seed");
  tz_mc->add_option("--workers", rc.workers, "threads (default QEX_WORKERS or 1)");
  model_flags(tz_mc);

  // asep
  auto* as = app.add_subcommand("asep", "multi-species ASEP");
  as->require_subcommand(1);
  auto* as_prob = as->add_subcommand("prob", "contour-integral probability on Z");
  prob_flags(as_prob);
  auto* as_master = as->add_subcommand("master", "forward equation on a lossy window");
  as_master->add_option("--init", init_path, "initial law JSON")->required();
  as_master->add_option("--window", rc.window, "window half-width W");
  model_flags(as_master);
  auto* as_mc = as->add_subcommand("mc", "Gillespie simulation on Z");
  as_mc->add_option("--init", init_path, "initial law JSON")->required();
  as_mc->add_option("--traj", rc.traj, "trajectories");
  as_mc->add_option("--seed", rc.seed, "seed");
  as_mc->add_option("--workers", rc.workers, "threads (default QEX_WORKERS or 1)");
  model_flags(as_mc);
  auto* as_stat = as->add_subcommand("stationary", "exact residual of nu L on fully occupied intervals");
  int st_n = 0;
  std::vector<int> st_intervals;
  std::string st_q = "1/2";
  as_stat->add_option("--n", st_n, "particle count")->required();
  as_stat->add_option("--intervals", st_intervals, "interval lengths")->required()->delimiter(',');
  as_stat->add_option("--q", st_q, "rational q");
  as_stat->add_option("--out", rc.out_path, "output file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "verification suites");
  std::string suite;
  verify::Options vo;
  ver->add_option("suite", suite, "q-identities, coxeter, configs, lumpability, exchangeability, stationarity, "
                                  "formula-vs-oracle, monte-carlo or all")
      ->required();
  ver->add_option("--n", vo.n, "particle count for formula-vs-oracle");
  ver->add_option("--t", vo.t, "time");
  ver->add_option("--q", vo.q, "asymmetry parameter");
  ver->add_option("--m", vo.points, "initial quadrature nodes per circle");
  ver->add_option("--window", vo.window, "ASEP window half-width");
  ver->add_option("--traj", vo.trajectories, "trajectories for monte-carlo");
  ver->add_option("--seed", vo.seed, "seed for monte-carlo");
  ver->add_option("--max-n", vo.max_n, "largest N for exhaustive suites");
  ver->add_option("--workers", vo.workers, "threads");
  ver->add_option("--out", rc.out_path, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (dec->parsed()) {
      const Notation nt = rc.sigma_notation();
      const Permutation w = Permutation::parse(dec_w, nt);
      if (w.size() != dec_n) throw UsageError("--w does not have N entries");
      const coxeter::Parabolic j{qcalc::Composition(dec_j)}, k{qcalc::Composition(dec_k)};
      if (j.n() != dec_n || k.n() != dec_n) throw UsageError("compositions must sum to N");
      const auto d = coxeter::decompose_double(w, j, k);
      Output out(rc.out_path);
      out.os() << "w=" << w.to_string(nt) << " a=" << coxeter::word_to_string(d.a.reduced_word())
               << " d=" << d.d.to_string(nt) << " b=" << coxeter::word_to_string(d.b.reduced_word())
               << " l(w)=" << coxeter::length(w) << " l(a)=" << coxeter::length(d.a)
               << " l(d)=" << coxeter::length(d.d) << " l(b)=" << coxeter::length(d.b) << "\n";
      return 0;
    }

    if (tz_prob->parsed() || as_prob->parsed()) {
      rc.validate();
      const Notation nt = rc.sigma_notation();
      const int n = static_cast<int>(px.size());
      if (pspecies.empty()) pspecies.assign(static_cast<std::size_t>(n), 1);
      const Permutation s = psigma.empty() ? Permutation::identity(n) : Permutation::parse(psigma, nt);
      integrals::ContourSpec spec;
      spec.points = rc.m;
      const TazrpConfig c{px, pspecies, s};
      Output out(rc.out_path);
      if (tz_prob->parsed()) write_quad(out.os(), integrals::tazrp_multi_prob(py, c, rc.t, rate_env(rc), spec));
      else write_quad(out.os(), integrals::asep_multi_prob(py, c, rc.t, rc.q, spec));
      return 0;
    }

    if (tz_master->parsed()) {
      rc.validate();
      if (reach < 0) throw UsageError("--reach must be nonnegative");
      const auto init = read_init(init_path);
      const auto sol = tazrp::solve_master(init, rc.t, bumped(init.y, reach), rate_env(rc));
      Output out(rc.out_path);
      write_master(out.os(), sol.states, sol.p, static_cast<int>(init.y.size()));
      std::cerr << "escaped=" << fmt(sol.escaped) << "\n";
      return 0;
    }

    if (tz_mc->parsed()) {
      rc.validate();
      const auto init = read_init(init_path);
      const auto emp = tazrp::gillespie(init, rc.t, rc.traj, rc.seed, rate_env(rc), rc.worker_count());
      Output out(rc.out_path);
      write_empirical(out.os(), emp, static_cast<int>(init.y.size()));
      return 0;
    }

    if (as_master->parsed()) {
      rc.validate();
      const auto init = read_init(init_path);
      const auto sol = asep::solve_master_truncated(init, rc.t, rc.window, rc.q);
      Output out(rc.out_path);
      write_master(out.os(), sol.states, sol.p, static_cast<int>(init.y.size()));
      std::cerr << "eps_trunc=" << fmt(sol.eps_trunc) << " escaped=" << fmt(sol.escaped) << "\n";
      return 0;
    }

    if (as_mc->parsed()) {
      rc.validate();
      const auto init = read_init(init_path);
      const auto emp = asep::gillespie_asep(init, rc.t, rc.traj, rc.seed, rc.q, rc.worker_count());
      Output out(rc.out_path);
      write_empirical(out.os(), emp, static_cast<int>(init.y.size()));
      return 0;
    }

    if (as_stat->parsed()) {
      using qcalc::Rational;
      const Rational q = parse_rational(st_q);
      if (!(q > 0 && q < 1)) throw UsageError("--q must lie in (0,1)");
      int total = 0;
      for (int l : st_intervals) {
        if (l < 1) throw UsageError("interval lengths must be positive");
        total += l;
      }
      if (total != st_n) throw UsageError("interval lengths must sum to --n");
      const auto zone = asep::LatticeSubset::blocks(st_intervals);
      const auto k = asep::position_blocks(zone);
      std::map<Permutation, Rational> c;
      Rational z(0);
      const auto reps = coxeter::enumerate_DJ(k);
      for (const Permutation& tau : reps) z += asep::power(q, coxeter::length(tau));
      for (const Permutation& tau : reps) c[tau] = asep::power(q, coxeter::length(tau)) / z;
      const auto meas = asep::blocked_measure<Rational>(c, k, q);
      std::vector<Occupation> occ;
      for (const auto& [s, w] : meas) occ.push_back(asep::occupation_of(s, zone));
      const markov::StateIndex idx(occ);
      std::vector<Rational> v(idx.size(), Rational(0));
      for (const auto& [s, w] : meas) v[idx.find(asep::occupation_of(s, zone))] = w;
      const Rational res = asep::stationarity_residual<Rational>(idx, v, q, zone);
      const nlohmann::json j{{"n", st_n},
                             {"intervals", st_intervals},
                             {"q", q.str()},
                             {"states", idx.size()},
                             {"residual", res.str()},
                             {"stationary", res == 0}};
      Output out(rc.out_path);
      out.os() << j.dump(2) << "\n";
      return res == 0 ? 0 : kFailed;
    }

    if (ver->parsed()) {
      const auto names = verify::suite_names();
      if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw UsageError("unknown suite " + suite);
      const verify::Report rep = verify::run(suite, vo);
      Output out(rc.out_path);
      out.os() << rep.to_json().dump(2) << "\n";
      return rep.passed() ? 0 : kFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return kFailed;
  }
  return kUsage;
}
