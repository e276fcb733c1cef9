#pragma once

#include <optional>

#include "psn/matrix.hpp"
#include "psn/rates.hpp"

namespace psn {

/// Smooth strongly convex objective with curvature models M (smoothness) and G (strong convexity).
/// Implementations must be safe for concurrent const use.
class SmoothObjective {
 public:
  struct Evaluation {
    double value = 0.0;
    Vector gradient;
  };

  virtual ~SmoothObjective() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual const CurvaturePair& curvature() const = 0;
  virtual std::optional<double> optimal_value() const { return std::nullopt; }

  virtual Evaluation evaluate(const Vector& x) const { return {value(x), gradient(x)}; }

  /// Brings eval up to date after x moved to x_new by delta, which vanishes outside support.
  /// The default re-evaluates from scratch.
  virtual void update(Evaluation& eval, const Vector& x_new, const Vector& delta, const IndexSet& support) const;

  /// f(x) - f* when the optimum is known.
  virtual std::optional<double> suboptimality(const Vector& x) const;
};

/// f(x) = 1/2 x^T M x - q^T x + constant, with M == G.
class QuadraticObjective final : public SmoothObjective {
 public:
  /// When with_optimum is set the minimizer is computed with a dense Cholesky solve.
  QuadraticObjective(SymmetricMatrix m, Vector q, double constant = 0.0, bool with_optimum = true);

  /// 1/2 ||X x - y||^2.
  static QuadraticObjective least_squares(const Matrix& x, const Vector& y, bool with_optimum = true);

  std::size_t dim() const override { return pair_.dim(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  const CurvaturePair& curvature() const override { return pair_; }
  std::optional<double> optimal_value() const override { return f_star_; }

  Evaluation evaluate(const Vector& x) const override;
  /// O(n |support|): gradient += M delta restricted to the support columns.
  void update(Evaluation& eval, const Vector& x_new, const Vector& delta, const IndexSet& support) const override;
  std::optional<double> suboptimality(const Vector& x) const override;

  const SymmetricMatrix& matrix() const noexcept { return pair_.smoothness(); }
  const Vector& linear_term() const noexcept { return q_; }
  const std::optional<Vector>& minimizer() const noexcept { return x_star_; }
  /// 1/2 (x - x*)^T M (x - x*), accurate near the optimum where f(x) - f* cancels.
  double exact_gap(const Vector& x) const;

 private:
  CurvaturePair pair_;
  Vector q_;
  double constant_ = 0.0;
  std::optional<Vector> x_star_;
  std::optional<double> f_star_;
};

}  // namespace psn
