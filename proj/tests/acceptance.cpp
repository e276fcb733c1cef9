// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "psn/erm.hpp"
#include "psn/kernels.hpp"
#include "psn/rates.hpp"
#include "psn/sampling.hpp"
#include "psn/solver.hpp"
#include "sources.hpp"
#include "test_support.hpp"

using namespace psn;
using psn::testing::bitwise_equal;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SpectralInterval enumerated_spectrum(const CurvaturePair& pair, const SamplingScheme& s) {
  return rate_spectrum(pair, expected_lifted_inverse(pair.smoothness(), s).mean);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// 1. Mean one-step contraction of f - f* on rho(8, 0.5) under parallel (2,2)-nice sampling.
Outcome contraction_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 8;
  std::mt19937_64 eng(2024);
  const QuadraticObjective f(make_rho_matrix(n, 0.5), psn::testing::random_vector(static_cast<Eigen::Index>(n), eng));
  const SamplingScheme scheme(SamplingKind::parallel_nice, n, 2, 2);
  const RateReport r = rate_report(f.curvature(), scheme, expected_lifted_inverse(f.matrix(), scheme));
  const Vector x = psn::testing::random_vector(static_cast<Eigen::Index>(n), eng);
  const double gap = f.exact_gap(x);
  SeedStream stream(7);
  const int trials = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double ratio = f.exact_gap(psn_step(x, f, draw(scheme, stream), r.b)) / gap;
    sum += ratio;
    sum_sq += ratio * ratio;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / (trials - 1));
  const double limit = 1.0 - r.sigma_p + 3.0 * se;
  const double elapsed = seconds_since(t0);
  return {mean <= limit && elapsed < 10.0,
          fmt("mean %.6f <= %.6f", mean, limit) + fmt(" (sigma_p %.6f, %.2fs)", r.sigma_p, elapsed)};
}

// 2. sigma_p(1, 1) == sigma_1, and the c = 1 parallel trace equals the serial Newton trace.
Outcome serial_reduction() {
  const SymmetricMatrix m = make_tridiagonal(10, 0.3);
  const SamplingScheme nice(SamplingKind::nice, 10, 3);
  const double s1 = sigma1(CurvaturePair::quadratic(m), expected_lifted_inverse(m, nice).mean);
  bool ok = sigma_p(1, 1.0, s1) == s1;
  std::mt19937_64 eng(3);
  const QuadraticObjective f(m, psn::testing::random_vector(10, eng));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SolverConfig cfg;
    cfg.scheme = SamplingScheme(SamplingKind::parallel_nice, 10, 3, 1);
    cfg.b_policy = FixedB{1.0};
    cfg.tolerance = 1e-10;
    cfg.seed = seed;
    cfg.refresh_interval = 1;
    cfg.record_iterates = true;
    const IterationTrace psn = run(f, cfg);
    ok = ok && psn.converged();
    SeedStream stream(seed);
    Vector x = Vector::Zero(10);
    for (std::size_t k = 1; k < psn.iterates.size(); ++k) {
      x = sn_step(x, f, draw(nice, stream).sets[0]);
      ok = ok && bitwise_equal(x, psn.iterates[k]);
    }
    // the default incremental driver agrees between the parallel c = 1 scheme and the serial one
    cfg.refresh_interval = SolverConfig{}.refresh_interval;
    const IterationTrace a = run(f, cfg);
    cfg.scheme = nice;
    const IterationTrace b = run(f, cfg);
    ok = ok && bitwise_equal(a.x, b.x) && a.records.size() == b.records.size();
    for (std::size_t k = 0; ok && k < a.records.size(); ++k) ok = a.records[k].grad_norm == b.records[k].grad_norm;
  }
  return {ok, "3 seeds, bitwise"};
}

// 3. rho closed forms against enumeration.
Outcome rho_closed_forms_match() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t n = 4; n <= 10; ++n) {
    for (std::size_t tau = 2; tau <= 4; ++tau) {
      for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const RhoAnalysis a = rho_closed_forms(n, tau, rho);
        const auto s = enumerated_spectrum(CurvaturePair::quadratic(make_rho_matrix(n, rho)),
                                           SamplingScheme(SamplingKind::nice, n, tau));
        worst = std::max({worst, std::abs(a.sigma1 - s.lower), std::abs(a.theta - s.upper)});
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-10 && elapsed < 30.0, fmt("max difference %.3g (%.2fs)", worst, elapsed)};
}

// 4. 0 < sigma_1 <= theta <= 1 on random pairs G <= M.
Outcome sandwich() {
  std::mt19937_64 eng(4);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 5);
    const SymmetricMatrix m = psn::testing::random_pd(n, eng);
    const CurvaturePair pair(m, psn::testing::random_below(m, eng));
    for (auto kind : {SamplingKind::nice, SamplingKind::list}) {
      const auto s = enumerated_spectrum(pair, SamplingScheme(kind, n, 2));
      if (!(0.0 < s.lower && s.lower <= s.upper && s.upper <= 1.0 + 1e-9)) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " violations in 200 checks"};
}

bool subset_of(unsigned a, unsigned b) { return (a & ~b) == 0; }

IndexSet from_mask(unsigned mask, std::size_t n) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (1u << i)) v.push_back(i);
  }
  return IndexSet(std::move(v));
}

// 5. (M_S)^{-1} <= (M^{-1})_S and (M_S')^{-1} <= (M_S)^{-1} for S' in S.
Outcome psd_ordering() {
  std::mt19937_64 eng(5);
  double worst = 0.0;
  std::size_t checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    const SymmetricMatrix m = psn::testing::random_pd(n, eng, 0.1);
    const SymmetricMatrix minv = inverse_pd(m);
    const unsigned full = (1u << n) - 1;
    std::vector<SymmetricMatrix> lifted(full + 1);
    for (unsigned s = 1; s <= full; ++s) lifted[s] = lifted_inverse(m, from_mask(s, n));
    auto gap = [](const SymmetricMatrix& lo, const SymmetricMatrix& hi) {
      return eigen_extremes(Matrix(hi.dense() - lo.dense())).lower;
    };
    for (unsigned s = 1; s <= full; ++s) {
      worst = std::min(worst, gap(lifted[s], lifted_submatrix(minv, from_mask(s, n))));
      ++checks;
      for (unsigned sub = (s - 1) & s; sub > 0; sub = (sub - 1) & s) {
        if (!subset_of(sub, s)) continue;
        worst = std::min(worst, gap(lifted[sub], lifted[s]));
        ++checks;
      }
    }
  }
  return {worst >= -1e-9, fmt("min eigenvalue %.3g over ", worst) + std::to_string(checks) + " pairs"};
}

// 6. Exact 2-list theta of T(alpha) against 2/((1-alpha)n).
Outcome tridiagonal_bound() {
  bool ok = true;
  double worst_equality = 0.0;
  for (std::size_t n = 5; n <= 64; ++n) {
    const SamplingScheme list(SamplingKind::list, n, 2);
    for (int k = 0; k <= 5; ++k) {
      const double alpha = 0.1 * k;
      const SymmetricMatrix t = make_tridiagonal(n, alpha);
      const double theta = enumerated_spectrum(CurvaturePair::quadratic(t), list).upper;
      const double bound = tridiag_theta_bound(alpha, n);
      ok = ok && theta <= bound * (1.0 + 1e-12);
      if (k == 0) worst_equality = std::max(worst_equality, std::abs(theta - bound));
    }
  }
  return {ok && worst_equality <= 1e-12, fmt("alpha=0 max |theta - bound| %.3g", worst_equality)};
}

// 7. List theta on the heat matrix against (tau/n) cond and 8.4/n.
Outcome condition_bound() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {50u, 200u, 1000u}) {
    const SymmetricMatrix h = make_heat_matrix(n);
    const SamplingScheme list(SamplingKind::list, n, 5);
    const double theta = enumerated_spectrum(CurvaturePair::quadratic(h), list).upper;
    const double exact = theta_cond_bound(5, n, h);
    const double gersh = theta_cond_bound(5, n, h, ConditionSource::gershgorin);
    const double chosen = 8.4 / static_cast<double>(n);
    ok = ok && theta <= exact * (1.0 + 1e-12) && exact <= chosen && gersh <= chosen * (1.0 + 1e-12);
    if (!detail.empty()) detail += "; ";
    detail += fmt("n=%g: n*theta=%.4f", static_cast<double>(n), theta * n) + fmt(" n*bound=%.4f", exact * n);
  }
  return {ok, detail};
}

// 8. Dense random 40x40 data: sigma_3 flat in tau c while sigma_p at b* grows with c.
Outcome pcdm_structure() {
  std::mt19937_64 eng(8);
  const Matrix a = psn::testing::random_matrix(40, 40, eng);
  const SymmetricMatrix m(Matrix(a.transpose() * a));
  const CurvaturePair pair = CurvaturePair::quadratic(m);
  const SamplingScheme base(SamplingKind::parallel_nice, 40, 3, 1);
  const ExpectedInverse e = expected_lifted_inverse(m, base);
  double first = -1.0, spread = 0.0, previous_sp = 0.0;
  bool increasing = true;
  for (std::size_t c : {1u, 2u, 4u, 8u}) {
    const double s3 = pcdm_constants(pair, &a, 3 * c).sigma3;
    if (first < 0) first = s3;
    spread = std::max(spread, std::abs(s3 - first));
    const double sp = rate_report(pair, base.with_workers(c), e).sigma_p;
    increasing = increasing && sp > previous_sp;
    previous_sp = sp;
  }
  return {spread <= 1e-12 && increasing, fmt("sigma3 spread %.3g", spread)};
}

// 9. Heat system n = 1000: mean iterations fall from c = 1 to c = 4 over 5 seeds.
Outcome heat_solve() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 1000;
  const psn::cli::QuadraticSource src = psn::cli::generate_quadratic("heat:1000", 0);
  std::vector<double> mean(5, 0.0);
  bool converged = true;
  for (std::size_t c = 1; c <= 4; ++c) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SolverConfig cfg;
      cfg.scheme = SamplingScheme(SamplingKind::parallel_list, n, 5, c);
      cfg.b_policy = AutoB{ThetaValue{8.4 / n}};
      cfg.tolerance = 1e-8;
      cfg.seed = seed;
      cfg.cache_blocks = true;
      const IterationTrace t = run(src.objective, cfg);
      converged = converged && t.converged() && src.objective.gradient(t.x).norm() <= 1e-8;
      mean[c] += static_cast<double>(t.iterations()) / 5.0;
    }
  }
  const bool decreasing = mean[1] > mean[2] && mean[2] > mean[3] && mean[3] > mean[4];
  const double elapsed = seconds_since(t0);
  return {converged && decreasing && elapsed < 60.0,
          fmt("mean iterations c=1 %.1f, c=4 %.1f", mean[1], mean[4]) + fmt(" (%.2fs)", elapsed)};
}

// 10. Ridge dual: final w against the closed form, weak duality at every record.
Outcome ridge_oracle() {
  const LibsvmData data = psn::cli::generate_erm_data("ridge:20,5", 10);
  const ErmProblem p(data.features, data.labels, LossKind::squared, 0.1);
  ErmConfig cfg;
  cfg.scheme = SamplingScheme(SamplingKind::parallel_nice, 20, 2, 4);
  cfg.b_policy = AutoB{ThetaExact{}};
  cfg.gap_tolerance = 1e-14;
  const ErmTrace t = run_erm(p, cfg);
  const double n = 20.0;
  Matrix h = p.features() * p.features().transpose() / n;
  h.diagonal().array() += p.lambda();
  const Vector w_star = solve_pd(SymmetricMatrix(h), p.features() * p.labels() / n);
  const double err = (t.state.w - w_star).norm();
  bool weak = true;
  for (const ErmRecord& r : t.records) weak = weak && r.primal >= r.dual;
  return {t.converged() && err <= 1e-6 && weak, fmt("|w - w*| %.3g", err) + (weak ? ", weak duality holds" : ", weak duality fails")};
}

// 11. E[<A A_S1 x, A_S2 x>] over independent S1, S2 equals <A E[A_S] x, E[A_S] x>.
Outcome tower_property() {
  std::mt19937_64 eng(11);
  const SamplingScheme s(SamplingKind::nice, 5, 2);
  const auto sets = enumerate_sets(s);
  const double count = static_cast<double>(sets.size());
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SymmetricMatrix a = psn::testing::random_symmetric(5, eng);
    const Vector x = psn::testing::random_vector(5, eng);
    double lhs = 0.0;
    Matrix mean = Matrix::Zero(5, 5);
    for (const auto& s1 : sets) {
      const Matrix a1 = lifted_submatrix(a, s1).dense();
      mean += a1;
      for (const auto& s2 : sets) lhs += (a.dense() * a1 * x).dot(lifted_submatrix(a, s2).dense() * x);
    }
    lhs /= count * count;
    mean /= count;
    const double rhs = (a.dense() * mean * x).dot(mean * x);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= 1e-12, fmt("max |lhs - rhs| %.3g", worst)};
}

// 12. Every CLI command is byte-identical across re-runs and thread counts.
Outcome determinism() {
  const std::vector<std::string> commands = {
      "solve --gen dense:30,30 --scheme parallel-nice:tau=3 --c 1,2,4 --theta exact --tol 1e-2 --seed 4",
      "heat --gen heat:200 --c 1,2 --seed 9",
      "rates --gen tridiag:12,0.3 --scheme parallel-list:tau=2 --c 1,2,4 --seed 2",
      "compare-pcdm --gen sparse:20,20,0.3 --scheme parallel-nice:tau=2 --c 1,2,4 --seed 2",
      "rates --gen rho:40,0.4 --scheme parallel-nice:tau=3 --c 1,4 --monte-carlo 2000 --seed 5",
      "rho --n 16 --c 1,2,4 --check",
      "tridiag --n 5-9 --alpha 0,0.5",
      "erm --gen logistic:40,4 --c 1,3 --theta exact --tol 1e-5 --seed 6",
      "erm --gen ridge:20,5 --c 2 --theta bound --scheme parallel-list:tau=2 --tol 1e-10 --seed 6",
  };
  int failures = 0;
  for (const auto& cmd : commands) {
    const auto base = psn::testing::run_cli(cmd);
    bool same = base.exit_code == 0 && !base.out.empty();
    for (const char* threads : {"", " --threads 1", " --threads 4"}) {
      const auto again = psn::testing::run_cli(cmd + threads);
      same = same && again.exit_code == base.exit_code && again.out == base.out;
    }
    if (!same) {
      ++failures;
      std::printf("  differs: %s\n", cmd.c_str());
    }
  }
  return {failures == 0, std::to_string(commands.size() - static_cast<std::size_t>(failures)) + "/" +
                             std::to_string(commands.size()) + " commands stable"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"contraction rate", contraction_rate},
      {"serial reduction", serial_reduction},
      {"rho closed forms", rho_closed_forms_match},
      {"sandwich", sandwich},
      {"psd ordering", psd_ordering},
      {"tridiagonal bound", tridiagonal_bound},
      {"condition bound", condition_bound},
      {"pcdm structure", pcdm_structure},
      {"heat solve", heat_solve},
      {"ridge oracle", ridge_oracle},
      {"tower property", tower_property},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
