#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "psn/objective.hpp"
#include "psn/sampling.hpp"

namespace psn {

// How theta is obtained when b is chosen automatically.
struct ThetaExact {
  ExpectationMode mode = Enumerate{};
};
/// (tau/n) cond(M), clamped to 1; list samplings of quadratics only.
struct ThetaBound {};
struct ThetaValue {
  double value = 1.0;
};
using ThetaSource = std::variant<ThetaExact, ThetaBound, ThetaValue>;

struct FixedB {
  double value = 1.0;
};
/// b = (c-1) lambda theta + 1.
struct AutoB {
  ThetaSource theta = ThetaExact{};
};
using BPolicy = std::variant<FixedB, AutoB>;

enum class Execution { parallel, serial };

struct SolverConfig {
  SamplingScheme scheme;
  BPolicy b_policy = AutoB{};
  double tolerance = 1e-8;            ///< on ||grad f||
  std::size_t max_iterations = 100000;
  std::uint64_t seed = 0;
  bool cache_blocks = false;          ///< pre-factorize every window (list kinds)
  Execution execution = Execution::parallel;
  std::size_t refresh_interval = 1024;  ///< full gradient recomputation period; 1 disables updates
  std::size_t divergence_window = 100;  ///< consecutive increases of f before giving up
  bool record_iterates = false;

  void validate() const;
};

struct Aggregation {
  double b = 1.0;
  std::optional<double> theta;
  std::optional<double> lambda;
  std::optional<double> b_min;
};

/// Resolves the divisor b for the configured scheme on this objective.
Aggregation resolve_aggregation(const SmoothObjective& objective, const SolverConfig& config);
Aggregation resolve_aggregation(const CurvaturePair& pair, const SamplingScheme& scheme, const BPolicy& policy);

struct IterationRecord {
  std::size_t k = 0;
  std::optional<double> f_gap;
  double grad_norm = 0.0;
  double elapsed_seconds = 0.0;
};

enum class RunStatus { converged, max_iterations };

struct IterationTrace {
  std::vector<IterationRecord> records;  ///< k = 0, 1, ..., final
  std::vector<Vector> iterates;          ///< only with record_iterates
  RunStatus status = RunStatus::max_iterations;
  Vector x;
  double b = 1.0;

  std::size_t iterations() const noexcept { return records.empty() ? 0 : records.back().k; }
  bool converged() const noexcept { return status == RunStatus::converged; }
};

/// One serial stochastic Newton step x - (M_S)^{-1} grad f(x) lifted to R^n.
Vector sn_step(const Vector& x, const SmoothObjective& objective, const IndexSet& s);

/// x - (1/b) sum_i (M_{S_i})^{-1} grad f(x) lifted, with the sum taken in set order.
Vector psn_step(const Vector& x, const SmoothObjective& objective, const SampleDraw& draw, double b,
                Execution execution = Execution::parallel);

/// Runs the method from x0 (zero when empty) until ||grad f|| <= tolerance.
/// Throws DivergenceError when f has increased divergence_window times in a row.
IterationTrace run(const SmoothObjective& objective, const SolverConfig& config, Vector x0 = Vector());

/// Trace CSV rows; elapsed_seconds stays empty unless timing is set.
void write_trace_csv(std::ostream& out, const IterationTrace& trace, std::size_t c, bool timing);
void write_trace_csv_header(std::ostream& out);

}  // namespace psn
