#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psn/matrix.hpp"
#include "psn/sampling.hpp"

namespace psn {

/// Smoothness model M and strong-convexity model G of an objective, G <= M.
class CurvaturePair {
 public:
  /// Both must be positive definite with G <= M (up to 1e-9 relative to ||M||).
  CurvaturePair(SymmetricMatrix smoothness, SymmetricMatrix convexity);
  /// M == G, the quadratic case.
  static CurvaturePair quadratic(SymmetricMatrix m);

  const SymmetricMatrix& smoothness() const noexcept { return m_; }
  const SymmetricMatrix& convexity() const noexcept { return g_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  bool is_quadratic() const noexcept { return quadratic_; }

 private:
  CurvaturePair(SymmetricMatrix m, SymmetricMatrix g, bool quadratic);
  SymmetricMatrix m_;
  SymmetricMatrix g_;
  bool quadratic_ = false;
};

/// Extreme eigenvalues of G^{1/2} E[(M_S)^{-1}] G^{1/2}: lower is sigma_1, upper is theta.
SpectralInterval rate_spectrum(const CurvaturePair& pair, const SymmetricMatrix& expected_inverse);
double sigma1(const CurvaturePair& pair, const SymmetricMatrix& expected_inverse);
double theta(const CurvaturePair& pair, const SymmetricMatrix& expected_inverse);

/// lambda_max(G^{-1/2} M G^{-1/2}); exactly 1 for quadratics.
double lambda_ratio(const CurvaturePair& pair);

/// Smallest admissible aggregation divisor, (c-1) lambda theta + 1.
double b_threshold(std::size_t c, double lambda, double theta);

/// Parallel rate c sigma_1 / b. Throws DomainError when b < b_min.
double sigma_p(std::size_t c, double b, double sigma1, double b_min = 1.0);

enum class ConditionSource { eigenvalues, gershgorin };

/// (tau/n) cond(M), valid for list samplings when M == G.
double theta_cond_bound(std::size_t tau, std::size_t n, const SymmetricMatrix& m,
                        ConditionSource source = ConditionSource::eigenvalues);

/// 2 / ((1 - alpha) n) for T(alpha) under 2-list sampling.
double tridiag_theta_bound(double alpha, std::size_t n);

/// cond of the rho-matrix from its spectrum, (n rho - rho + 1) / (1 - rho).
double rho_condition_number(std::size_t n, double rho);

struct RhoAnalysis {
  std::size_t n = 0;
  std::size_t tau = 0;
  double rho = 0.0;
  double a_tau = 0.0;  ///< diagonal entry of the inverted tau x tau rho-matrix
  double b_tau = 0.0;  ///< off-diagonal entry of the same inverse
  double rho_n = 0.0;  ///< off-diagonal of E[(M_S)^{-1}] after normalizing its diagonal to 1
  double sigma1 = 0.0;
  double theta = 0.0;
};

/// Closed forms for the rho-matrix under tau-nice sampling, M == G.
RhoAnalysis rho_closed_forms(std::size_t n, std::size_t tau, double rho);

struct RateReport {
  std::string scheme;
  std::size_t n = 0;
  std::size_t tau = 0;
  std::size_t c = 1;
  double sigma1 = 0.0;
  double theta = 0.0;
  double lambda = 1.0;
  double b_min = 1.0;
  double b = 1.0;
  double sigma_p = 0.0;
  double speedup = 1.0;      ///< sigma_p / sigma_1
  bool exact = true;         ///< expectation enumerated rather than sampled
  bool independent = true;   ///< the c sets of a draw are mutually independent
};

/// Bundles the constants for a scheme with c workers. theta_override replaces theta in b_min
/// (never sigma_1); b defaults to b_min.
RateReport rate_report(const CurvaturePair& pair, const SamplingScheme& scheme,
                       const ExpectedInverse& expected, std::optional<double> theta_override = {},
                       std::optional<double> b = {});

struct PcdmConstants {
  Vector v;                           ///< ESO weights, one per coordinate
  Vector p;                           ///< inclusion probabilities tau_c / n
  std::vector<IndexSet> support_sets; ///< J_j = {i : A_ji != 0}; empty in dense worst case
  double sigma3 = 0.0;
  double sigma_b = 0.0;               ///< sigma_3 with every v_i = lambda_max(A^T A)
};

/// Rate constants of parallel coordinate descent with tau_c-nice sampling, M = A^T A.
/// Pass the data matrix A (m x n), or data == nullptr with dense_worst_case to assume |J_j| = n.
PcdmConstants pcdm_constants(const CurvaturePair& pair, const Matrix* data, std::size_t tau_c,
                             bool dense_worst_case = false);

}  // namespace psn
