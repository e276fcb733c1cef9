#include "psn/erm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "psn/csv.hpp"
#include "psn/kernels.hpp"

namespace psn {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) { return t > 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

// 1 / (1 + exp(-u))
double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double logistic_second(double z, double y, double eps) {
  const double s = sigmoid(y * z);
  return s * (1.0 - s) + eps;
}

// Solves phi'(z) = s for the smoothed logistic loss. phi' - eps z lies in (-1, 1), so the
// root is bracketed by [(s-1)/eps, (s+1)/eps]; Newton steps leaving the bracket are
// replaced by bisection.
double logistic_argmax(double s, double y, double eps) {
  double lo = (s - 1.0) / eps;
  double hi = (s + 1.0) / eps;
  double z = std::clamp(0.0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double r = loss_derivative(LossKind::logistic, z, y, eps) - s;
    if (r == 0.0) return z;
    if (r > 0) hi = z; else lo = z;
    double next = z - r / logistic_second(z, y, eps);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-15 * (1.0 + std::abs(z))) return next;
    z = next;
  }
  return z;
}

}  // namespace

std::string_view to_string(LossKind kind) { return kind == LossKind::squared ? "squared" : "logistic"; }

LossKind parse_loss(std::string_view text) {
  if (text == "squared") return LossKind::squared;
  if (text == "logistic") return LossKind::logistic;
  throw DomainError("unknown loss '" + std::string(text) + "' (expected squared or logistic)");
}

double loss_value(LossKind kind, double z, double y, double eps) {
  if (kind == LossKind::squared) return 0.5 * (z - y) * (z - y);
  return softplus_neg(y * z) + 0.5 * eps * z * z;
}

double loss_derivative(LossKind kind, double z, double y, double eps) {
  if (kind == LossKind::squared) return z - y;
  return -y * sigmoid(-y * z) + eps * z;
}

double conjugate_argmax(LossKind kind, double s, double y, double eps) {
  if (kind == LossKind::squared) return s + y;
  return logistic_argmax(s, y, eps);
}

double conjugate_value(LossKind kind, double s, double y, double eps) {
  if (kind == LossKind::squared) return 0.5 * s * s + s * y;
  const double z = logistic_argmax(s, y, eps);
  return s * z - loss_value(kind, z, y, eps);
}

// ---------------------------------------------------------------- problem

ErmProblem::ErmProblem(Matrix features, Vector labels, LossKind loss, double lambda, double smoothing)
    : a_(std::move(features)), y_(std::move(labels)), loss_(loss), lambda_(lambda), smoothing_(smoothing) {
  if (a_.cols() == 0) throw DomainError("ErmProblem: no datapoints");
  if (a_.cols() != y_.size()) throw DomainError("ErmProblem: feature columns and labels disagree in count");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw DomainError("ErmProblem: lambda must be positive");
  if (!a_.allFinite() || !y_.allFinite()) throw DomainError("ErmProblem: non-finite data");
  if (loss_ == LossKind::logistic) {
    if (!(smoothing_ > 0.0)) {
      throw DomainError("ErmProblem: logistic loss is not strongly convex without a positive smoothing");
    }
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
      if (y_(i) != 1.0 && y_(i) != -1.0) throw DomainError("ErmProblem: logistic labels must be -1 or +1");
    }
  }
}

double ErmProblem::gamma() const noexcept { return loss_ == LossKind::squared ? 1.0 : smoothing_; }

double ErmProblem::loss_smoothness() const noexcept { return loss_ == LossKind::squared ? 1.0 : 0.25 + smoothing_; }

double ErmProblem::primal(const Vector& w) const {
  if (w.size() != a_.rows()) throw DomainError("primal: w has the wrong dimension");
  const Vector z = a_.transpose() * w;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += loss_value(loss_, z(i), y_(i), smoothing_);
  return sum / static_cast<double>(samples()) + 0.5 * lambda_ * w.squaredNorm();
}

// ---------------------------------------------------------------- dual state

DualState DualState::from_dual(const ErmProblem& problem, Vector alpha) {
  if (static_cast<std::size_t>(alpha.size()) != problem.samples()) throw DomainError("DualState: alpha has the wrong length");
  DualState s;
  s.alpha = std::move(alpha);
  s.alpha_bar = s.recomputed_average(problem);
  s.w = primal_from_dual(s.alpha_bar);
  return s;
}

Vector DualState::recomputed_average(const ErmProblem& problem) const {
  return problem.features() * alpha / (problem.lambda() * static_cast<double>(problem.samples()));
}

SymmetricMatrix smoothness_matrix(const ErmProblem& problem) {
  const double n = static_cast<double>(problem.samples());
  const Matrix& a = problem.features();
  Matrix x = a.transpose() * a / (problem.lambda() * n * n);
  x.diagonal().array() += 1.0 / (problem.gamma() * n);
  return SymmetricMatrix(0.5 * (x + x.transpose()));
}

Matrix smoothness_block(const ErmProblem& problem, const IndexSet& s) {
  s.validate(problem.samples());
  const double n = static_cast<double>(problem.samples());
  const Matrix& a = problem.features();
  Matrix cols(a.rows(), idx(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) cols.col(idx(k)) = a.col(idx(s[k]));
  Matrix block = cols.transpose() * cols / (problem.lambda() * n * n);
  block.diagonal().array() += 1.0 / (problem.gamma() * n);
  return block;
}

CurvaturePair dual_curvature(const ErmProblem& problem) {
  SymmetricMatrix x = smoothness_matrix(problem);
  if (problem.loss() == LossKind::squared) return CurvaturePair::quadratic(std::move(x));
  const double n = static_cast<double>(problem.samples());
  const Matrix& a = problem.features();
  Matrix g = a.transpose() * a / (problem.lambda() * n * n);
  g.diagonal().array() += 1.0 / (problem.loss_smoothness() * n);
  return CurvaturePair(std::move(x), SymmetricMatrix(0.5 * (g + g.transpose())));
}

Vector primal_from_dual(const Vector& alpha_bar) { return alpha_bar; }

double dual_objective(const ErmProblem& problem, const DualState& state) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < state.alpha.size(); ++i) {
    sum += conjugate_value(problem.loss(), -state.alpha(i), problem.labels()(i), problem.smoothing());
  }
  return -sum / static_cast<double>(problem.samples()) - 0.5 * problem.lambda() * state.alpha_bar.squaredNorm();
}

double dual_gradient_entry(const ErmProblem& problem, const DualState& state, std::size_t i) {
  const auto ii = idx(i);
  const double n = static_cast<double>(problem.samples());
  const double z = conjugate_argmax(problem.loss(), -state.alpha(ii), problem.labels()(ii), problem.smoothing());
  return (problem.features().col(ii).dot(state.w) - z) / n;
}

Vector dual_gradient(const ErmProblem& problem, const DualState& state) {
  Vector g(idx(problem.samples()));
  for (std::size_t i = 0; i < problem.samples(); ++i) g(idx(i)) = dual_gradient_entry(problem, state, i);
  return g;
}

Vector block_subproblem(const ErmProblem& problem, const DualState& state, const IndexSet& s) {
  s.validate(problem.samples());
  Vector g = Vector::Zero(idx(problem.samples()));
  for (std::size_t i : s) g(idx(i)) = dual_gradient_entry(problem, state, i);
  const Vector z = BlockFactor(s, smoothness_block(problem, s)).solve_gathered(g);
  Vector h = Vector::Zero(idx(problem.samples()));
  for (std::size_t a = 0; a < s.size(); ++a) h(idx(s[a])) = -z(idx(a));
  return h;
}

// ---------------------------------------------------------------- driver

void ErmConfig::validate() const {
  scheme.validate();
  if (!(gap_tolerance >= 0.0) || !(grad_tolerance >= 0.0)) throw DomainError("tolerances must be non-negative");
  if (max_iterations == 0) throw DomainError("max_iterations must be positive");
  if (record_every == 0) throw DomainError("record_every must be positive");
}

Aggregation resolve_erm_aggregation(const ErmProblem& problem, const ErmConfig& config) {
  config.validate();
  if (config.scheme.n != problem.samples()) throw DomainError("sampling dimension does not match the number of datapoints");
  if (const auto* fixed = std::get_if<FixedB>(&config.b_policy)) {
    if (!(fixed->value >= 1.0) || !std::isfinite(fixed->value)) throw DomainError("b must be at least 1");
    return Aggregation{fixed->value, {}, {}, {}};
  }
  if (config.scheme.c == 1) return Aggregation{};
  return resolve_aggregation(dual_curvature(problem), config.scheme, config.b_policy);
}

ErmTrace run_erm(const ErmProblem& problem, const ErmConfig& config) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const Aggregation agg = resolve_erm_aggregation(problem, config);
  const std::size_t n = problem.samples();
  const double scale = 1.0 / (problem.lambda() * static_cast<double>(n));
  const Matrix& a = problem.features();
  const kernels::BlockBuilder blocks = [&problem](const IndexSet& s) { return smoothness_block(problem, s); };

  ErmTrace trace;
  trace.b = agg.b;
  trace.state = DualState::from_dual(problem, Vector::Zero(idx(n)));
  DualState& st = trace.state;

  std::size_t increases = 0;
  double last_dual = -std::numeric_limits<double>::infinity();
  auto record = [&](std::size_t k) {
    ErmRecord r;
    r.k = k;
    r.primal = problem.primal(st.w);
    r.dual = dual_objective(problem, st);
    r.gap = r.primal - r.dual;
    r.grad_norm = dual_gradient(problem, st).norm();
    r.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
    trace.records.push_back(r);
    if (!std::isfinite(r.primal) || !std::isfinite(r.dual)) {
      throw DivergenceError("objective became non-finite at iteration " + std::to_string(k));
    }
    increases = r.dual < last_dual ? increases + 1 : 0;
    last_dual = r.dual;
    if (increases >= 100) throw DivergenceError("dual objective decreased at 100 consecutive records");
    return r.gap <= config.gap_tolerance || (config.grad_tolerance > 0 && r.grad_norm <= config.grad_tolerance);
  };

  if (record(0)) {
    trace.status = RunStatus::converged;
    return trace;
  }

  SeedStream stream(config.seed);
  Vector g = Vector::Zero(idx(n));
  for (std::size_t k = 1; k <= config.max_iterations; ++k) {
    const SampleDraw d = draw(config.scheme, stream);
    const IndexSet support = d.support();
    for (std::size_t i : support) g(idx(i)) = dual_gradient_entry(problem, st, i);
    const auto z = config.execution == Execution::parallel ? kernels::omp::block_solves(blocks, d.sets, g)
                                                           : kernels::serial::block_solves(blocks, d.sets, g);
    // Dual update alpha += (1/b) sum_j h_j with h_j = -z_j lifted, summed in set order.
    Vector sum = Vector::Zero(idx(n));
    for (std::size_t j = 0; j < d.sets.size(); ++j) {
      for (std::size_t p = 0; p < d.sets[j].size(); ++p) sum(idx(d.sets[j][p])) -= z[j](idx(p));
    }
    for (std::size_t i : support) {
      const double delta = sum(idx(i)) / agg.b;
      st.alpha(idx(i)) += delta;
      st.alpha_bar.noalias() += a.col(idx(i)) * (delta * scale);
      g(idx(i)) = 0.0;
    }
    st.w = primal_from_dual(st.alpha_bar);

    const bool last = k == config.max_iterations;
    if ((k % config.record_every == 0 || last) && record(k)) {
      trace.status = RunStatus::converged;
      return trace;
    }
  }
  trace.status = RunStatus::max_iterations;
  return trace;
}

void write_erm_csv_header(std::ostream& out) { out << "c,iteration,primal,dual,gap,grad_norm,elapsed_seconds\n"; }

void write_erm_csv(std::ostream& out, const ErmTrace& trace, std::size_t c, bool timing) {
  for (const ErmRecord& r : trace.records) {
    out << c << ',' << r.k << ',' << csv_number(r.primal) << ',' << csv_number(r.dual) << ',' << csv_number(r.gap)
        << ',' << csv_number(r.grad_norm) << ',';
    if (timing) out << csv_number(r.elapsed_seconds);
    out << '\n';
  }
}

}  // namespace psn
