#include "psn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace psn {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DomainError(std::string(what) + ": matrix is not square");
  }
}

}  // namespace

// ---------------------------------------------------------------- IndexSet

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw DomainError("IndexSet: duplicate index");
  }
}

IndexSet IndexSet::full(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  IndexSet s;
  s.indices_ = std::move(all);
  return s;
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

void IndexSet::validate(std::size_t n) const {
  if (indices_.empty()) throw DomainError("IndexSet: empty set");
  if (indices_.back() >= n) {
    throw DomainError("IndexSet: index " + std::to_string(indices_.back()) +
                      " out of range for dimension " + std::to_string(n));
  }
}

std::string IndexSet::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t a = 0; a < indices_.size(); ++a) {
    if (a) out << ',';
    out << indices_[a];
  }
  out << '}';
  return out.str();
}

// ---------------------------------------------------------------- SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(const Matrix& entries) {
  require_square(entries, "SymmetricMatrix");
  if (entries.size() > 0) {
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-10 * scale)) {
      throw DomainError("SymmetricMatrix: input is not symmetric (max |a_ij - a_ji| = " +
                        std::to_string(asym) + ")");
    }
  }
  // (a + a^T) / 2 is exactly symmetric since floating-point addition commutes.
  entries_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  return SymmetricMatrix(Matrix::Identity(idx(n), idx(n)));
}

SymmetricMatrix SymmetricMatrix::zero(std::size_t n) {
  return SymmetricMatrix(Matrix::Zero(idx(n), idx(n)));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
  return SymmetricMatrix(Matrix(d.asDiagonal()));
}

bool SymmetricMatrix::positive_definite() const {
  if (entries_.size() == 0) return false;
  Eigen::LLT<Matrix> llt(entries_);
  return llt.info() == Eigen::Success;
}

// ---------------------------------------------------------------- slicing

SymmetricMatrix principal_submatrix(const SymmetricMatrix& m, const IndexSet& s) {
  s.validate(m.dim());
  const std::size_t k = s.size();
  Matrix block(idx(k), idx(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) block(idx(a), idx(b)) = m(s[a], s[b]);
  }
  return SymmetricMatrix(block);
}

Matrix embed(const Matrix& block, const IndexSet& s, std::size_t n) {
  s.validate(n);
  if (block.rows() != idx(s.size()) || block.cols() != idx(s.size())) {
    throw DomainError("embed: block size does not match index set");
  }
  Matrix out = Matrix::Zero(idx(n), idx(n));
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s.size(); ++b) out(idx(s[a]), idx(s[b])) = block(idx(a), idx(b));
  }
  return out;
}

SymmetricMatrix lifted_submatrix(const SymmetricMatrix& m, const IndexSet& s) {
  return SymmetricMatrix(embed(principal_submatrix(m, s).dense(), s, m.dim()));
}

SymmetricMatrix lifted_inverse(const SymmetricMatrix& m, const IndexSet& s) {
  BlockFactor factor(m, s);
  return SymmetricMatrix(embed(factor.inverse(), s, m.dim()));
}

Vector restrict_vector(const Vector& h, const IndexSet& s) {
  if (s.empty()) throw DomainError("restrict_vector: empty set");
  s.validate(static_cast<std::size_t>(h.size()));
  Vector out = Vector::Zero(h.size());
  for (std::size_t i : s) out(idx(i)) = h(idx(i));
  return out;
}

Vector gather(const Vector& h, const IndexSet& s) {
  s.validate(static_cast<std::size_t>(h.size()));
  Vector out(idx(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a) out(idx(a)) = h(idx(s[a]));
  return out;
}

// ---------------------------------------------------------------- BlockFactor

BlockFactor::BlockFactor(const SymmetricMatrix& m, IndexSet s) : set_(std::move(s)) {
  set_.validate(m.dim());
  const std::size_t k = set_.size();
  Matrix block(idx(k), idx(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) block(idx(a), idx(b)) = m(set_[a], set_[b]);
  }
  factorize(block);
}

BlockFactor::BlockFactor(IndexSet s, const Matrix& block) : set_(std::move(s)) {
  if (set_.empty()) throw DomainError("BlockFactor: empty index set");
  if (block.rows() != idx(set_.size()) || block.cols() != idx(set_.size())) {
    throw DomainError("BlockFactor: block size does not match the index set");
  }
  factorize(block);
}

void BlockFactor::factorize(const Matrix& block) {
  ldlt_.compute(block);
  double rcond = 0.0;
  if (ldlt_.info() == Eigen::Success) {
    // LDLT tolerates exact zero pivots, so check D as well as the rcond estimate.
    const auto d = ldlt_.vectorD().cwiseAbs();
    rcond = d.minCoeff() > 1e-14 * d.maxCoeff() ? ldlt_.rcond() : 0.0;
  }
  if (!(rcond > 1e-14)) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(block, Eigen::EigenvaluesOnly);
    const auto abs_ev = eig.eigenvalues().cwiseAbs();
    const double cond = abs_ev.minCoeff() > 0 ? abs_ev.maxCoeff() / abs_ev.minCoeff()
                                               : std::numeric_limits<double>::infinity();
    throw SingularBlockError("singular principal block " + set_.to_string() +
                                 " (condition estimate " + std::to_string(cond) + ")",
                             set_.to_string(), cond);
  }
}

Vector BlockFactor::solve(const Vector& rhs) const { return ldlt_.solve(rhs); }

Vector BlockFactor::solve_gathered(const Vector& g) const {
  Vector rhs(idx(set_.size()));
  for (std::size_t a = 0; a < set_.size(); ++a) rhs(idx(a)) = g(idx(set_[a]));
  return ldlt_.solve(rhs);
}

Matrix BlockFactor::inverse() const {
  const auto k = idx(set_.size());
  Matrix inv = ldlt_.solve(Matrix::Identity(k, k));
  return 0.5 * (inv + inv.transpose());
}

// ---------------------------------------------------------------- generators

SymmetricMatrix make_rho_matrix(std::size_t n, double rho) {
  if (n == 0) throw DomainError("make_rho_matrix: n must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("make_rho_matrix: rho must lie in (0,1)");
  Matrix m = Matrix::Constant(idx(n), idx(n), rho);
  m.diagonal().setOnes();
  return SymmetricMatrix(m);
}

SymmetricMatrix make_tridiagonal(std::size_t n, double alpha) {
  if (n == 0) throw DomainError("make_tridiagonal: n must be positive");
  // T(1/2) is still positive definite for every finite n: lambda_min = 1 - cos(pi/(n+1)).
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw DomainError("make_tridiagonal: alpha must lie in [0, 1/2]");
  }
  Matrix m = Matrix::Identity(idx(n), idx(n));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m(idx(i), idx(i + 1)) = alpha;
    m(idx(i + 1), idx(i)) = alpha;
  }
  return SymmetricMatrix(m);
}

SymmetricMatrix make_heat_matrix(std::size_t n, double r) {
  if (n == 0) throw DomainError("make_heat_matrix: n must be positive");
  if (!(r > 0.0)) throw DomainError("make_heat_matrix: r must be positive");
  const double diag = 1.0 + 2.5 * r;
  const double first = -4.0 / 3.0 * r;
  const double second = r / 12.0;
  Matrix m = Matrix::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    m(idx(i), idx(i)) = diag;
    if (i + 1 < n) m(idx(i), idx(i + 1)) = m(idx(i + 1), idx(i)) = first;
    if (i + 2 < n) m(idx(i), idx(i + 2)) = m(idx(i + 2), idx(i)) = second;
  }
  return SymmetricMatrix(m);
}

// ---------------------------------------------------------------- spectra

SpectralInterval eigen_extremes(const Matrix& symmetric) {
  require_square(symmetric, "eigen_extremes");
  if (symmetric.size() == 0) throw DomainError("eigen_extremes: empty matrix");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigen_extremes: eigensolver did not converge");
  const auto& ev = eig.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

SpectralInterval eigen_extremes(const SymmetricMatrix& m) { return eigen_extremes(m.dense()); }

SpectralInterval gershgorin_bounds(const SymmetricMatrix& m) {
  const Matrix& a = m.dense();
  if (a.size() == 0) throw DomainError("gershgorin_bounds: empty matrix");
  SpectralInterval out{std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double radius = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    out.lower = std::min(out.lower, a(i, i) - radius);
    out.upper = std::max(out.upper, a(i, i) + radius);
  }
  return out;
}

bool psd_order_holds(const SymmetricMatrix& a, const SymmetricMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DomainError("psd_order_holds: dimension mismatch");
  return eigen_extremes(Matrix(b.dense() - a.dense())).lower >= -tol;
}

SymmetricMatrix spectral_apply(const SymmetricMatrix& m, double (*f)(double), double floor) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(m.dense());
  if (eig.info() != Eigen::Success) throw NumericalError("spectral_apply: eigensolver did not converge");
  Vector mapped = eig.eigenvalues();
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(std::max(mapped(i), floor));
  const Matrix& v = eig.eigenvectors();
  return SymmetricMatrix(Matrix(v * mapped.asDiagonal() * v.transpose()));
}

SymmetricMatrix sqrt_psd(const SymmetricMatrix& m) {
  return spectral_apply(m, [](double x) { return std::sqrt(x); }, 1e-14);
}

SymmetricMatrix inv_sqrt_pd(const SymmetricMatrix& m) {
  if (!m.positive_definite()) throw DomainError("inv_sqrt_pd: matrix is not positive definite");
  return spectral_apply(m, [](double x) { return 1.0 / std::sqrt(x); }, 1e-14);
}

SymmetricMatrix inverse_pd(const SymmetricMatrix& m) {
  Eigen::LLT<Matrix> llt(m.dense());
  if (llt.info() != Eigen::Success) throw NumericalError("inverse_pd: matrix is not positive definite");
  const auto n = static_cast<Eigen::Index>(m.dim());
  return SymmetricMatrix(Matrix(llt.solve(Matrix::Identity(n, n))));
}

SymmetricMatrix congruence(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("congruence: dimension mismatch");
  const Matrix prod = a.dense() * b.dense() * a.dense();
  return SymmetricMatrix(Matrix(0.5 * (prod + prod.transpose())));
}

Vector solve_pd(const SymmetricMatrix& m, const Vector& q) {
  if (static_cast<std::size_t>(q.size()) != m.dim()) throw DomainError("solve_pd: dimension mismatch");
  Eigen::LLT<Matrix> llt(m.dense());
  if (llt.info() != Eigen::Success) throw NumericalError("solve_pd: matrix is not positive definite");
  Vector x = llt.solve(q);
  // One step of iterative refinement keeps the residual at roundoff level for moderately
  // conditioned systems.
  const Vector r = q - m.dense() * x;
  x += llt.solve(r);
  return x;
}

}  // namespace psn
