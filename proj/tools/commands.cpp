#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <ostream>

#include "psn/csv.hpp"
#include "psn/erm.hpp"
#include "psn/kernels.hpp"
#include "psn/libsvm.hpp"
#include "psn/rates.hpp"
#include "psn/solver.hpp"
#include "sources.hpp"

namespace psn::cli {

namespace {

std::optional<double> parse_number(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) return std::nullopt;
  return v;
}

ExpectationMode expectation_mode(std::size_t monte_carlo, std::uint64_t seed) {
  if (monte_carlo == 0) return Enumerate{};
  return MonteCarlo{monte_carlo, seed};
}

ThetaSource parse_theta(const std::string& text, std::size_t monte_carlo, std::uint64_t seed) {
  if (text == "exact") return ThetaExact{expectation_mode(monte_carlo, seed)};
  if (text == "bound") return ThetaBound{};
  const auto v = parse_number(text);
  if (!v || !(*v > 0.0 && *v <= 1.0)) throw DomainError("--theta must be exact, bound or a value in (0, 1]");
  return ThetaValue{*v};
}

// --b auto with several workers needs an explicit theta source: exact, bound or a value.
BPolicy parse_b(const std::string& text, const std::string& theta, std::size_t monte_carlo, std::uint64_t seed,
                const std::vector<std::size_t>& grid) {
  if (text == "auto") {
    const bool needs_theta = std::any_of(grid.begin(), grid.end(), [](std::size_t c) { return c > 1; });
    if (theta.empty()) {
      if (needs_theta) throw DomainError("--b auto needs --theta exact|bound|VALUE");
      return AutoB{ThetaValue{1.0}};
    }
    return AutoB{parse_theta(theta, monte_carlo, seed)};
  }
  if (!theta.empty()) throw DomainError("--theta only applies to --b auto");
  const auto v = parse_number(text);
  if (!v || !(*v >= 1.0) || !std::isfinite(*v)) throw DomainError("--b must be auto or a value >= 1");
  return FixedB{*v};
}

void require_one_source(const std::string& a, const std::string& b, const char* names) {
  if (a.empty() == b.empty()) throw DomainError(std::string("exactly one of ") + names + " is required");
}

SamplingScheme scheme_for(const SamplingScheme& base, std::size_t c) {
  return c == base.c ? base : base.with_workers(c);
}

std::vector<std::size_t> c_grid(const std::string& text, const SamplingScheme& base) {
  return text.empty() ? std::vector<std::size_t>{base.c} : parse_size_list(text);
}

void note_dependent_sets(const SamplingScheme& scheme) {
  if (!scheme.independent_sets()) {
    std::cerr << "psn: note: non-overlapping sets are not independent; its constants come from one constituent set\n";
  }
}

void apply_threads(const CommonOptions& common) {
  if (common.threads < 0) throw DomainError("--threads must be non-negative");
  kernels::set_threads(common.threads);
}

}  // namespace

int cmd_solve(const CommonOptions& common, const SolveOptions& opts, std::ostream& out) {
  require_one_source(opts.matrix, opts.gen, "--matrix/--gen");
  if (!opts.rhs.empty() && opts.matrix.empty()) throw DomainError("--rhs needs --matrix");
  if (!(opts.tol >= 0.0)) throw DomainError("--tol must be non-negative");
  if (opts.max_iter == 0) throw DomainError("--max-iter must be positive");
  apply_threads(common);
  const QuadraticSource source = opts.matrix.empty() ? generate_quadratic(opts.gen, common.seed)
                                                     : load_quadratic(opts.matrix, opts.rhs, common.seed);
  const SamplingScheme base = SamplingScheme::parse(opts.scheme, source.objective.dim());
  const auto grid = c_grid(opts.c, base);
  const BPolicy b = parse_b(opts.b, opts.theta, opts.monte_carlo, common.seed, grid);
  note_dependent_sets(base);

  write_trace_csv_header(out);
  bool all_converged = true;
  for (std::size_t c : grid) {
    SolverConfig cfg;
    cfg.scheme = scheme_for(base, c);
    cfg.b_policy = b;
    cfg.tolerance = opts.tol;
    cfg.max_iterations = opts.max_iter;
    cfg.seed = common.seed;
    cfg.cache_blocks = opts.cache;
    cfg.execution = opts.serial ? Execution::serial : Execution::parallel;
    const IterationTrace trace = run(source.objective, cfg);
    write_trace_csv(out, trace, c, common.timing);
    if (!trace.converged()) {
      all_converged = false;
      std::cerr << "psn: c=" << c << " did not reach tolerance " << csv_number(opts.tol) << " in "
                << opts.max_iter << " iterations\n";
    }
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_rates(const CommonOptions& common, const RatesOptions& opts, std::ostream& out) {
  require_one_source(opts.matrix, opts.gen, "--matrix/--gen");
  apply_threads(common);
  const ExpectationMode mode = expectation_mode(opts.monte_carlo, common.seed);
  std::optional<double> theta_value;
  const bool theta_bound = opts.theta == "bound";
  if (opts.theta != "exact" && !theta_bound) {
    theta_value = parse_number(opts.theta);
    if (!theta_value || !(*theta_value > 0.0 && *theta_value <= 1.0)) {
      throw DomainError("--theta must be exact, bound or a value in (0, 1]");
    }
  }

  const QuadraticSource source = opts.matrix.empty() ? generate_quadratic(opts.gen, common.seed, false)
                                                     : load_quadratic(opts.matrix, "", common.seed, false);
  const CurvaturePair& pair = source.objective.curvature();
  const std::size_t n = pair.dim();
  const SamplingScheme base = SamplingScheme::parse(opts.scheme, n);
  const auto grid = parse_size_list(opts.c);
  if (theta_bound) {
    if (!base.list_based()) throw DomainError("--theta bound needs a list sampling");
    theta_value = std::min(1.0, theta_cond_bound(base.tau, n, pair.smoothness()));
  }

  note_dependent_sets(base);
  const ExpectedInverse expected = expected_lifted_inverse(pair.smoothness(), base, mode);
  out << "scheme,n,tau,c,tau_c,sigma1,theta,lambda,b_min,sigma_p,sigma3,sigma_b,speedup\n";
  for (std::size_t c : grid) {
    const SamplingScheme scheme = scheme_for(base, c);
    const RateReport r = rate_report(pair, scheme, expected, theta_value);
    const std::size_t tau_c = scheme.tau * c;
    std::optional<double> sigma3;
    std::optional<double> sigma_b;
    if (tau_c <= n) {
      const Matrix* data = source.data ? &*source.data : nullptr;
      const PcdmConstants p = pcdm_constants(pair, data, tau_c, data == nullptr);
      sigma3 = p.sigma3;
      sigma_b = p.sigma_b;
    }
    out << to_string(scheme.kind) << ',' << n << ',' << scheme.tau << ',' << c << ',' << tau_c << ','
        << csv_number(r.sigma1) << ',' << csv_number(r.theta) << ',' << csv_number(r.lambda) << ','
        << csv_number(r.b_min) << ',' << csv_number(r.sigma_p) << ',' << csv_number(sigma3) << ','
        << csv_number(sigma_b) << ',' << csv_number(r.speedup) << '\n';
  }
  return kExitOk;
}

int cmd_rho(const CommonOptions& common, const RhoOptions& opts, std::ostream& out) {
  apply_threads(common);
  const auto rhos = parse_double_list(opts.rho);
  const auto grid = parse_size_list(opts.c);
  out << "n,tau,rho,c,sigma1,theta,b_min,sigma_p,speedup";
  if (opts.check) out << ",sigma1_enumerated,theta_enumerated";
  out << '\n';
  for (double rho : rhos) {
    const RhoAnalysis a = rho_closed_forms(opts.n, opts.tau, rho);
    std::optional<SpectralInterval> enumerated;
    if (opts.check) {
      const SymmetricMatrix m = make_rho_matrix(opts.n, rho);
      const SamplingScheme nice(SamplingKind::nice, opts.n, opts.tau);
      enumerated = rate_spectrum(CurvaturePair::quadratic(m), expected_lifted_inverse(m, nice).mean);
    }
    for (std::size_t c : grid) {
      const double b_min = b_threshold(c, 1.0, a.theta);
      const double sp = sigma_p(c, b_min, a.sigma1, b_min);
      out << opts.n << ',' << opts.tau << ',' << csv_number(rho) << ',' << c << ',' << csv_number(a.sigma1) << ','
          << csv_number(a.theta) << ',' << csv_number(b_min) << ',' << csv_number(sp) << ','
          << csv_number(sp / a.sigma1);
      if (enumerated) out << ',' << csv_number(enumerated->lower) << ',' << csv_number(enumerated->upper);
      out << '\n';
    }
  }
  return kExitOk;
}

int cmd_tridiag(const CommonOptions& common, const TridiagOptions& opts, std::ostream& out) {
  apply_threads(common);
  const auto sizes = parse_size_list(opts.n);
  const auto alphas = parse_double_list(opts.alpha);
  for (std::size_t n : sizes) {
    if (n < 3) throw DomainError("--n values must be at least 3");
  }
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw DomainError("--alpha values must lie in [0, 0.5]");
  }
  out << "n,alpha,sigma1,theta,bound,holds\n";
  for (std::size_t n : sizes) {
    const SamplingScheme list(SamplingKind::list, n, 2);
    for (double alpha : alphas) {
      const SymmetricMatrix t = make_tridiagonal(n, alpha);
      const SpectralInterval s = rate_spectrum(CurvaturePair::quadratic(t), expected_lifted_inverse(t, list).mean);
      const double bound = tridiag_theta_bound(alpha, n);
      const bool holds = s.upper <= bound * (1.0 + 1e-12);
      out << n << ',' << csv_number(alpha) << ',' << csv_number(s.lower) << ',' << csv_number(s.upper) << ','
          << csv_number(bound) << ',' << (holds ? "true" : "false") << '\n';
    }
  }
  return kExitOk;
}

int cmd_erm(const CommonOptions& common, const ErmOptions& opts, std::ostream& out) {
  require_one_source(opts.data, opts.gen, "--data/--gen");
  if (!(opts.tol >= 0.0) || !(opts.grad_tol >= 0.0)) throw DomainError("tolerances must be non-negative");
  if (opts.max_iter == 0) throw DomainError("--max-iter must be positive");
  if (opts.record_every == 0) throw DomainError("--record-every must be positive");
  apply_threads(common);
  std::string loss_name = opts.loss;
  if (loss_name.empty()) loss_name = opts.gen.rfind("ridge", 0) == 0 ? "squared" : "logistic";
  const LossKind loss = parse_loss(loss_name);
  LibsvmData data = opts.data.empty() ? generate_erm_data(opts.gen, common.seed)
                                      : read_libsvm(opts.data, opts.min_features);
  const ErmProblem problem = make_erm_problem(std::move(data), loss, opts.lambda, opts.smoothing);
  const SamplingScheme base = SamplingScheme::parse(opts.scheme, problem.samples());
  const auto grid = c_grid(opts.c, base);
  const BPolicy b = parse_b(opts.b, opts.theta, opts.monte_carlo, common.seed, grid);
  note_dependent_sets(base);

  write_erm_csv_header(out);
  bool all_converged = true;
  for (std::size_t c : grid) {
    ErmConfig cfg;
    cfg.scheme = scheme_for(base, c);
    cfg.b_policy = b;
    cfg.gap_tolerance = opts.tol;
    cfg.grad_tolerance = opts.grad_tol;
    cfg.max_iterations = opts.max_iter;
    cfg.seed = common.seed;
    cfg.record_every = opts.record_every;
    cfg.execution = opts.serial ? Execution::serial : Execution::parallel;
    const ErmTrace trace = run_erm(problem, cfg);
    write_erm_csv(out, trace, c, common.timing);
    if (!trace.converged()) {
      all_converged = false;
      std::cerr << "psn: c=" << c << " did not reach the gap tolerance in " << opts.max_iter << " iterations\n";
    }
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

}  // namespace psn::cli
