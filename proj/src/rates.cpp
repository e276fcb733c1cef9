#include "psn/rates.hpp"

#include <algorithm>
#include <cmath>

namespace psn {

// ---------------------------------------------------------------- CurvaturePair

CurvaturePair::CurvaturePair(SymmetricMatrix m, SymmetricMatrix g, bool quadratic)
    : m_(std::move(m)), g_(std::move(g)), quadratic_(quadratic) {}

CurvaturePair::CurvaturePair(SymmetricMatrix smoothness, SymmetricMatrix convexity)
    : m_(std::move(smoothness)), g_(std::move(convexity)) {
  if (m_.dim() != g_.dim()) throw DomainError("CurvaturePair: dimension mismatch");
  if (!m_.positive_definite()) throw DomainError("CurvaturePair: M is not positive definite");
  if (!g_.positive_definite()) throw DomainError("CurvaturePair: G is not positive definite");
  const double scale = std::max(1.0, m_.dense().cwiseAbs().maxCoeff());
  if (!psd_order_holds(g_, m_, 1e-9 * scale)) throw DomainError("CurvaturePair: G <= M does not hold");
  quadratic_ = m_.dense() == g_.dense();
}

CurvaturePair CurvaturePair::quadratic(SymmetricMatrix m) {
  if (!m.positive_definite()) throw DomainError("CurvaturePair: M is not positive definite");
  SymmetricMatrix g = m;
  return CurvaturePair(std::move(m), std::move(g), true);
}

// ---------------------------------------------------------------- sigma_1, theta, lambda

SpectralInterval rate_spectrum(const CurvaturePair& pair, const SymmetricMatrix& expected_inverse) {
  if (expected_inverse.dim() != pair.dim()) throw DomainError("rate_spectrum: dimension mismatch");
  if (!expected_inverse.positive_definite()) {
    throw DomainError("rate_spectrum: E[(M_S)^-1] is not positive definite (improper sampling?)");
  }
  return eigen_extremes(congruence(sqrt_psd(pair.convexity()), expected_inverse));
}

double sigma1(const CurvaturePair& pair, const SymmetricMatrix& expected_inverse) {
  return rate_spectrum(pair, expected_inverse).lower;
}

double theta(const CurvaturePair& pair, const SymmetricMatrix& expected_inverse) {
  return rate_spectrum(pair, expected_inverse).upper;
}

double lambda_ratio(const CurvaturePair& pair) {
  if (pair.is_quadratic()) return 1.0;
  return eigen_extremes(congruence(inv_sqrt_pd(pair.convexity()), pair.smoothness())).upper;
}

double b_threshold(std::size_t c, double lambda, double theta) {
  return static_cast<double>(c - 1) * lambda * theta + 1.0;
}

double sigma_p(std::size_t c, double b, double sigma1, double b_min) {
  if (c < 1) throw DomainError("sigma_p: c must be at least 1");
  if (!(b >= b_min)) {
    throw DomainError("sigma_p: b = " + std::to_string(b) + " is below the threshold " + std::to_string(b_min));
  }
  return static_cast<double>(c) * sigma1 / b;
}

// ---------------------------------------------------------------- bounds

double theta_cond_bound(std::size_t tau, std::size_t n, const SymmetricMatrix& m, ConditionSource source) {
  if (n == 0 || tau == 0 || tau > n) throw DomainError("theta_cond_bound: need 1 <= tau <= n");
  const SpectralInterval s = source == ConditionSource::eigenvalues ? eigen_extremes(m) : gershgorin_bounds(m);
  if (!(s.lower > 0.0)) throw DomainError("theta_cond_bound: spectrum bound does not exclude zero");
  return static_cast<double>(tau) / static_cast<double>(n) * s.condition();
}

double tridiag_theta_bound(double alpha, std::size_t n) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw DomainError("tridiag_theta_bound: alpha must lie in [0, 1/2]");
  if (n < 3) throw DomainError("tridiag_theta_bound: n must be at least 3");
  return 2.0 / ((1.0 - alpha) * static_cast<double>(n));
}

double rho_condition_number(std::size_t n, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho_condition_number: rho must lie in (0,1)");
  const double dn = static_cast<double>(n);
  return (dn * rho - rho + 1.0) / (1.0 - rho);
}

RhoAnalysis rho_closed_forms(std::size_t n, std::size_t tau, double rho) {
  if (tau < 2 || tau > n) throw DomainError("rho_closed_forms: need 2 <= tau <= n");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho_closed_forms: rho must lie in (0,1)");
  const double dn = static_cast<double>(n);
  const double dt = static_cast<double>(tau);

  RhoAnalysis r;
  r.n = n;
  r.tau = tau;
  r.rho = rho;
  const double denom = (1.0 - rho) * ((dt - 1.0) * rho + 1.0);
  r.a_tau = ((dt - 2.0) * rho + 1.0) / denom;
  r.b_tau = -rho / denom;
  r.rho_n = (dt - 1.0) * r.b_tau / ((dn - 1.0) * r.a_tau);

  // M and the normalized E[(M_S)^{-1}] are both of the form aI + bJ, so they share
  // eigenvectors: the all-ones direction and its complement.
  const double scale = dt * r.a_tau / dn;
  const double on_complement = (1.0 - rho) * (1.0 - r.rho_n);
  const double on_ones = (dn * rho - rho + 1.0) * (dn * r.rho_n - r.rho_n + 1.0);
  r.sigma1 = std::min(on_complement, on_ones) * scale;
  r.theta = std::max(on_complement, on_ones) * scale;
  return r;
}

// ---------------------------------------------------------------- reports

RateReport rate_report(const CurvaturePair& pair, const SamplingScheme& scheme,
                       const ExpectedInverse& expected, std::optional<double> theta_override,
                       std::optional<double> b) {
  const SpectralInterval spec = rate_spectrum(pair, expected.mean);
  RateReport r;
  r.scheme = scheme.to_string();
  r.n = scheme.n;
  r.tau = scheme.tau;
  r.c = scheme.c;
  r.sigma1 = spec.lower;
  r.theta = theta_override.value_or(spec.upper);
  r.lambda = lambda_ratio(pair);
  r.b_min = b_threshold(r.c, r.lambda, r.theta);
  r.b = b.value_or(r.b_min);
  r.sigma_p = sigma_p(r.c, r.b, r.sigma1, r.b_min);
  r.speedup = r.sigma_p / r.sigma1;
  r.exact = expected.exact;
  r.independent = scheme.independent_sets();
  return r;
}

PcdmConstants pcdm_constants(const CurvaturePair& pair, const Matrix* data, std::size_t tau_c,
                             bool dense_worst_case) {
  const std::size_t n = pair.dim();
  if (tau_c < 1 || tau_c > n) throw DomainError("pcdm_constants: tau_c must lie in [1, n]");
  if (!data && !dense_worst_case) {
    throw DomainError("pcdm_constants: need the data matrix A or the dense worst-case flag");
  }
  if (data && static_cast<std::size_t>(data->cols()) != n) {
    throw DomainError("pcdm_constants: A must have n columns");
  }

  const auto nn = static_cast<Eigen::Index>(n);
  const double dn = static_cast<double>(n);
  const double dtc = static_cast<double>(tau_c);
  const double denom = static_cast<double>(std::max<std::size_t>(n - 1, 1));
  PcdmConstants out;
  out.p = Vector::Constant(nn, dtc / dn);
  out.v = Vector::Zero(nn);

  double lambda_max_ata = 0.0;
  if (data) {
    const Matrix& a = *data;
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      std::vector<std::size_t> support;
      for (Eigen::Index i = 0; i < a.cols(); ++i) {
        if (a(j, i) != 0.0) support.push_back(static_cast<std::size_t>(i));
      }
      const double weight = 1.0 + (static_cast<double>(support.size()) - 1.0) * (dtc - 1.0) / denom;
      for (std::size_t i : support) {
        const auto ii = static_cast<Eigen::Index>(i);
        out.v(ii) += weight * a(j, ii) * a(j, ii);
      }
      out.support_sets.emplace_back(std::move(support));
    }
    lambda_max_ata = eigen_extremes(Matrix(a.transpose() * a)).upper;
  } else {
    // |J_j| = n for every row: the weight collapses to tau_c and v_i = tau_c M_ii.
    out.v = dtc * pair.smoothness().dense().diagonal();
    lambda_max_ata = eigen_extremes(pair.smoothness()).upper;
  }
  if (!(out.v.minCoeff() > 0.0)) throw DomainError("pcdm_constants: some coordinate has v_i = 0 (empty column of A)");

  const SymmetricMatrix root = sqrt_psd(pair.convexity());
  const Vector scaled = out.p.cwiseQuotient(out.v);
  out.sigma3 = eigen_extremes(congruence(root, SymmetricMatrix::diagonal(scaled))).lower;
  const Vector scaled_b = out.p / lambda_max_ata;
  out.sigma_b = eigen_extremes(congruence(root, SymmetricMatrix::diagonal(scaled_b))).lower;
  return out;
}

}  // namespace psn
