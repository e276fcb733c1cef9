#include "psn/objective.hpp"

namespace psn {

void SmoothObjective::update(Evaluation& eval, const Vector& x_new, const Vector&, const IndexSet&) const {
  eval = evaluate(x_new);
}

std::optional<double> SmoothObjective::suboptimality(const Vector& x) const {
  if (const auto f_star = optimal_value()) return value(x) - *f_star;
  return std::nullopt;
}

QuadraticObjective::QuadraticObjective(SymmetricMatrix m, Vector q, double constant, bool with_optimum)
    : pair_(CurvaturePair::quadratic(std::move(m))), q_(std::move(q)), constant_(constant) {
  if (static_cast<std::size_t>(q_.size()) != pair_.dim()) {
    throw DomainError("QuadraticObjective: linear term has the wrong length");
  }
  if (with_optimum) {
    x_star_ = solve_pd(pair_.smoothness(), q_);
    f_star_ = constant_ - 0.5 * q_.dot(*x_star_);
  }
}

QuadraticObjective QuadraticObjective::least_squares(const Matrix& x, const Vector& y, bool with_optimum) {
  if (x.rows() != y.size()) throw DomainError("least_squares: X and y disagree on the number of rows");
  const Matrix gram = x.transpose() * x;
  return QuadraticObjective(SymmetricMatrix(gram), x.transpose() * y, 0.5 * y.squaredNorm(), with_optimum);
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(matrix().dense() * x) - q_.dot(x) + constant_;
}

Vector QuadraticObjective::gradient(const Vector& x) const { return matrix().dense() * x - q_; }

SmoothObjective::Evaluation QuadraticObjective::evaluate(const Vector& x) const {
  Evaluation e;
  e.gradient = matrix().dense() * x - q_;
  // f = 1/2 x^T (g + q) - q^T x
  e.value = 0.5 * x.dot(e.gradient) - 0.5 * q_.dot(x) + constant_;
  return e;
}

void QuadraticObjective::update(Evaluation& eval, const Vector&, const Vector& delta, const IndexSet& support) const {
  const Matrix& m = matrix().dense();
  // f(x + d) = f(x) + g^T d + 1/2 d^T M d, using the old gradient.
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t a : support) {
    const auto i = static_cast<Eigen::Index>(a);
    linear += eval.gradient(i) * delta(i);
    double row = 0.0;
    for (std::size_t b : support) {
      const auto j = static_cast<Eigen::Index>(b);
      row += m(i, j) * delta(j);
    }
    quad += delta(i) * row;
  }
  eval.value += linear + 0.5 * quad;
  for (std::size_t a : support) {
    const auto i = static_cast<Eigen::Index>(a);
    eval.gradient.noalias() += m.col(i) * delta(i);
  }
}

std::optional<double> QuadraticObjective::suboptimality(const Vector& x) const {
  if (!f_star_) return std::nullopt;
  return value(x) - *f_star_;
}

double QuadraticObjective::exact_gap(const Vector& x) const {
  if (!x_star_) throw DomainError("QuadraticObjective: minimizer not computed");
  const Vector e = x - *x_star_;
  return 0.5 * e.dot(matrix().dense() * e);
}

}  // namespace psn
