#pragma once

// Dual empirical risk minimization.
//
//   P(w) = (1/n) sum_i phi_i(a_i^T w) + (lambda/2) ||w||^2
//   D(a) = -(1/n) sum_i phi_i*(-a_i) - (lambda/2) ||abar||^2,   abar = A a / (lambda n)
//
// The method minimizes F = -D, whose Hessian is bounded by
// X = A^T A / (lambda n^2) + D(gamma)^{-1} / n, and reports w = abar.

#include <cstdint>
#include <vector>

#include "psn/matrix.hpp"
#include "psn/rates.hpp"
#include "psn/solver.hpp"

namespace psn {

enum class LossKind { squared, logistic };

std::string_view to_string(LossKind kind);
LossKind parse_loss(std::string_view text);

/// phi(z) = 1/2 (z - y)^2, or log(1 + exp(-y z)) + (eps/2) z^2 for logistic.
double loss_value(LossKind kind, double z, double y, double smoothing);
double loss_derivative(LossKind kind, double z, double y, double smoothing);
/// Point where phi'(z) = s, i.e. the gradient of phi* at s.
double conjugate_argmax(LossKind kind, double s, double y, double smoothing);
double conjugate_value(LossKind kind, double s, double y, double smoothing);

class ErmProblem {
 public:
  /// features is d x n with one datapoint per column. smoothing is the logistic eps.
  ErmProblem(Matrix features, Vector labels, LossKind loss, double lambda, double smoothing = 1e-3);

  const Matrix& features() const noexcept { return a_; }
  const Vector& labels() const noexcept { return y_; }
  LossKind loss() const noexcept { return loss_; }
  double lambda() const noexcept { return lambda_; }
  double smoothing() const noexcept { return smoothing_; }
  std::size_t samples() const noexcept { return static_cast<std::size_t>(a_.cols()); }
  std::size_t features_dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }

  /// Strong convexity constant of each phi_i.
  double gamma() const noexcept;
  /// Smoothness constant of each phi_i.
  double loss_smoothness() const noexcept;

  double primal(const Vector& w) const;

 private:
  Matrix a_;
  Vector y_;
  LossKind loss_;
  double lambda_;
  double smoothing_;
};

struct DualState {
  Vector alpha;      ///< n
  Vector alpha_bar;  ///< d, maintained incrementally
  Vector w;          ///< d

  static DualState from_dual(const ErmProblem& problem, Vector alpha);
  /// abar recomputed from scratch.
  Vector recomputed_average(const ErmProblem& problem) const;
};

/// A^T A / (lambda n^2) + D(gamma)^{-1} / n.
SymmetricMatrix smoothness_matrix(const ErmProblem& problem);
/// The principal block X_SS, built without forming X.
Matrix smoothness_block(const ErmProblem& problem, const IndexSet& s);
/// (X, G) where G uses the loss smoothness in place of gamma; X == G for squared loss.
CurvaturePair dual_curvature(const ErmProblem& problem);

/// grad g*: the identity for g = 1/2 ||.||^2.
Vector primal_from_dual(const Vector& alpha_bar);

double dual_objective(const ErmProblem& problem, const DualState& state);
/// Gradient of F = -D: (1/n) A^T w + psi'(alpha) with psi_i(a) = phi_i*(-a) / n.
Vector dual_gradient(const ErmProblem& problem, const DualState& state);
double dual_gradient_entry(const ErmProblem& problem, const DualState& state, std::size_t i);

/// h supported on s with X_SS h_S = -(grad F)_S.
Vector block_subproblem(const ErmProblem& problem, const DualState& state, const IndexSet& s);

struct ErmConfig {
  SamplingScheme scheme;
  BPolicy b_policy = AutoB{};
  double gap_tolerance = 1e-8;
  double grad_tolerance = 0.0;       ///< on ||grad F||; 0 disables the criterion
  std::size_t max_iterations = 100000;
  std::uint64_t seed = 0;
  Execution execution = Execution::parallel;
  std::size_t record_every = 1;      ///< evaluate P and D every this many iterations

  void validate() const;
};

struct ErmRecord {
  std::size_t k = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double grad_norm = 0.0;
  double elapsed_seconds = 0.0;
};

struct ErmTrace {
  std::vector<ErmRecord> records;
  RunStatus status = RunStatus::max_iterations;
  DualState state;
  double b = 1.0;

  std::size_t iterations() const noexcept { return records.empty() ? 0 : records.back().k; }
  bool converged() const noexcept { return status == RunStatus::converged; }
};

/// Resolves b with M replaced by X.
Aggregation resolve_erm_aggregation(const ErmProblem& problem, const ErmConfig& config);

ErmTrace run_erm(const ErmProblem& problem, const ErmConfig& config);

void write_erm_csv_header(std::ostream& out);
void write_erm_csv(std::ostream& out, const ErmTrace& trace, std::size_t c, bool timing);

}  // namespace psn
