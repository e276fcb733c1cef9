#include "psn/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "psn/csv.hpp"
#include "psn/kernels.hpp"
#include "psn/rates.hpp"

namespace psn {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<Vector> solve_blocks(const SymmetricMatrix& m, const SampleDraw& draw, const Vector& g,
                                 Execution execution, const kernels::BlockCache* cache) {
  return execution == Execution::parallel ? kernels::omp::block_solves(m, draw.sets, g, cache)
                                          : kernels::serial::block_solves(m, draw.sets, g, cache);
}

// sum_i lift(h_i), accumulated in set order so every execution mode agrees bit for bit.
Vector lift_sum(const SampleDraw& draw, const std::vector<Vector>& blocks, std::size_t n) {
  Vector d = Vector::Zero(idx(n));
  for (std::size_t i = 0; i < draw.sets.size(); ++i) {
    const IndexSet& s = draw.sets[i];
    for (std::size_t a = 0; a < s.size(); ++a) d(idx(s[a])) += blocks[i](idx(a));
  }
  return d;
}

void check_point(const Vector& x, const SmoothObjective& objective) {
  if (static_cast<std::size_t>(x.size()) != objective.dim()) throw DomainError("x has the wrong dimension");
}

double theta_for(const CurvaturePair& pair, const SamplingScheme& scheme, const ThetaSource& source) {
  if (const auto* v = std::get_if<ThetaValue>(&source)) {
    if (!(v->value > 0.0 && v->value <= 1.0)) throw DomainError("theta must lie in (0, 1]");
    return v->value;
  }
  if (std::holds_alternative<ThetaBound>(source)) {
    if (!scheme.list_based()) throw DomainError("the condition-number bound on theta needs a list sampling");
    if (!pair.is_quadratic()) throw DomainError("the condition-number bound on theta needs M == G");
    return std::min(1.0, theta_cond_bound(scheme.tau, scheme.n, pair.smoothness()));
  }
  const auto& exact = std::get<ThetaExact>(source);
  const ExpectedInverse e = expected_lifted_inverse(pair.smoothness(), scheme, exact.mode);
  return theta(pair, e.mean);
}

}  // namespace

void SolverConfig::validate() const {
  scheme.validate();
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
  if (max_iterations == 0) throw DomainError("max_iterations must be positive");
  if (refresh_interval == 0) throw DomainError("refresh_interval must be positive");
  if (divergence_window == 0) throw DomainError("divergence_window must be positive");
  if (cache_blocks && !scheme.list_based()) throw DomainError("block caching needs a list sampling");
  if (const auto* fixed = std::get_if<FixedB>(&b_policy)) {
    if (!(fixed->value >= 1.0) || !std::isfinite(fixed->value)) throw DomainError("b must be at least 1");
  }
}

Aggregation resolve_aggregation(const SmoothObjective& objective, const SolverConfig& config) {
  config.validate();
  if (config.scheme.n != objective.dim()) throw DomainError("sampling dimension does not match the objective");
  return resolve_aggregation(objective.curvature(), config.scheme, config.b_policy);
}

Aggregation resolve_aggregation(const CurvaturePair& pair, const SamplingScheme& scheme, const BPolicy& policy) {
  Aggregation agg;
  if (const auto* fixed = std::get_if<FixedB>(&policy)) {
    if (!(fixed->value >= 1.0) || !std::isfinite(fixed->value)) throw DomainError("b must be at least 1");
    agg.b = fixed->value;
    return agg;
  }
  if (scheme.c == 1) return agg;  // b_min = 1 whatever theta is

  const auto& automatic = std::get<AutoB>(policy);
  agg.lambda = lambda_ratio(pair);
  agg.theta = theta_for(pair, scheme, automatic.theta);
  agg.b_min = b_threshold(scheme.c, *agg.lambda, *agg.theta);
  agg.b = *agg.b_min;
  return agg;
}

Vector sn_step(const Vector& x, const SmoothObjective& objective, const IndexSet& s) {
  check_point(x, objective);
  const Vector g = objective.gradient(x);
  const Vector z = BlockFactor(objective.curvature().smoothness(), s).solve_gathered(g);
  Vector out = x;
  for (std::size_t a = 0; a < s.size(); ++a) out(idx(s[a])) -= z(idx(a));
  return out;
}

Vector psn_step(const Vector& x, const SmoothObjective& objective, const SampleDraw& draw, double b,
                Execution execution) {
  check_point(x, objective);
  if (!(b >= 1.0)) throw DomainError("psn_step: b must be at least 1");
  if (draw.sets.empty()) throw DomainError("psn_step: empty draw");
  const Vector g = objective.gradient(x);
  const auto blocks = solve_blocks(objective.curvature().smoothness(), draw, g, execution, nullptr);
  return x - lift_sum(draw, blocks, objective.dim()) / b;
}

IterationTrace run(const SmoothObjective& objective, const SolverConfig& config, Vector x0) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const Aggregation agg = resolve_aggregation(objective, config);
  const std::size_t n = objective.dim();
  const SymmetricMatrix& m = objective.curvature().smoothness();

  std::optional<kernels::BlockCache> cache;
  if (config.cache_blocks) cache = kernels::BlockCache::for_list_windows(m, config.scheme.tau);
  const kernels::BlockCache* cache_ptr = cache ? &*cache : nullptr;

  IterationTrace trace;
  trace.b = agg.b;
  trace.x = x0.size() == 0 ? Vector::Zero(idx(n)) : std::move(x0);
  check_point(trace.x, objective);

  const std::optional<double> f_star = objective.optimal_value();
  SmoothObjective::Evaluation eval = objective.evaluate(trace.x);
  auto record = [&](std::size_t k) {
    IterationRecord r;
    r.k = k;
    if (f_star) r.f_gap = eval.value - *f_star;
    r.grad_norm = eval.gradient.norm();
    r.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
    trace.records.push_back(r);
    if (config.record_iterates) trace.iterates.push_back(trace.x);
    return r.grad_norm;
  };

  if (record(0) <= config.tolerance) {
    trace.status = RunStatus::converged;
    return trace;
  }

  SeedStream stream(config.seed);
  std::size_t increases = 0;
  for (std::size_t k = 1; k <= config.max_iterations; ++k) {
    const SampleDraw d = draw(config.scheme, stream);
    const auto blocks = solve_blocks(m, d, eval.gradient, config.execution, cache_ptr);
    const Vector delta = -(lift_sum(d, blocks, n) / agg.b);
    trace.x += delta;

    const double previous = eval.value;
    if (k % config.refresh_interval == 0) {
      eval = objective.evaluate(trace.x);
    } else {
      objective.update(eval, trace.x, delta, d.support());
    }
    if (!std::isfinite(eval.value)) throw DivergenceError("objective became non-finite at iteration " + std::to_string(k));
    increases = eval.value > previous ? increases + 1 : 0;
    if (increases >= config.divergence_window) {
      throw DivergenceError("objective increased for " + std::to_string(increases) +
                            " consecutive iterations (b = " + csv_number(agg.b) + ")");
    }

    if (eval.gradient.norm() <= config.tolerance && config.refresh_interval > 1) {
      eval = objective.evaluate(trace.x);  // confirm on a fresh gradient
    }
    if (record(k) <= config.tolerance) {
      trace.status = RunStatus::converged;
      return trace;
    }
  }
  trace.status = RunStatus::max_iterations;
  return trace;
}

void write_trace_csv_header(std::ostream& out) { out << "c,iteration,f_gap,grad_norm,elapsed_seconds\n"; }

void write_trace_csv(std::ostream& out, const IterationTrace& trace, std::size_t c, bool timing) {
  for (const IterationRecord& r : trace.records) {
    out << c << ',' << r.k << ',' << csv_number(r.f_gap) << ',' << csv_number(r.grad_norm) << ',';
    if (timing) out << csv_number(r.elapsed_seconds);
    out << '\n';
  }
}

}  // namespace psn
