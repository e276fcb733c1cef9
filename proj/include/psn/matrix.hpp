#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psn/error.hpp"

namespace psn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sorted set of distinct coordinates.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> indices);
  /// Sorts the input; duplicates are a DomainError.
  explicit IndexSet(std::vector<std::size_t> indices);

  static IndexSet full(std::size_t n);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t operator[](std::size_t a) const { return indices_[a]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  bool contains(std::size_t i) const;

  /// Throws DomainError if empty or any index >= n.
  void validate(std::size_t n) const;

  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

struct SpectralInterval {
  double lower = 0.0;
  double upper = 0.0;

  double condition() const { return upper / lower; }
  bool contains(const SpectralInterval& other, double tol = 0.0) const {
    return lower <= other.lower + tol && other.upper <= upper + tol;
  }
};

/// Dense symmetric matrix. Immutable; entries are exactly symmetric.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Accepts matrices symmetric up to a relative 1e-10 and stores the exact symmetric part.
  explicit SymmetricMatrix(const Matrix& entries);

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix zero(std::size_t n);
  static SymmetricMatrix diagonal(const Vector& d);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& dense() const noexcept { return entries_; }

  /// Cholesky succeeds.
  bool positive_definite() const;

 private:
  Matrix entries_;
};

// Slicing.

/// |S| x |S| block M_SS.
SymmetricMatrix principal_submatrix(const SymmetricMatrix& m, const IndexSet& s);
/// n x n matrix keeping M_ij for i,j in S, zero elsewhere.
SymmetricMatrix lifted_submatrix(const SymmetricMatrix& m, const IndexSet& s);
/// Inverse of M_SS placed back on rows/cols S, zero elsewhere.
SymmetricMatrix lifted_inverse(const SymmetricMatrix& m, const IndexSet& s);
/// Embeds an |S| x |S| block into an n x n zero matrix.
Matrix embed(const Matrix& block, const IndexSet& s, std::size_t n);
/// h with coordinates outside S zeroed.
Vector restrict_vector(const Vector& h, const IndexSet& s);
/// (h_i)_{i in S} as an |S|-vector.
Vector gather(const Vector& h, const IndexSet& s);

/// Factorization of a principal block, reused for repeated solves with the same set.
class BlockFactor {
 public:
  /// Throws SingularBlockError when M_SS is numerically singular.
  BlockFactor(const SymmetricMatrix& m, IndexSet s);
  /// Factorizes an already extracted |S| x |S| block.
  BlockFactor(IndexSet s, const Matrix& block);

  const IndexSet& set() const noexcept { return set_; }
  /// Solves M_SS z = rhs for an |S|-vector rhs.
  Vector solve(const Vector& rhs) const;
  /// Solves M_SS z = g_S, gathering from a full-length g.
  Vector solve_gathered(const Vector& g) const;
  /// (M_SS)^{-1} as a dense |S| x |S| block.
  Matrix inverse() const;

 private:
  void factorize(const Matrix& block);
  IndexSet set_;
  Eigen::LDLT<Matrix> ldlt_;
};

// Special matrices.

/// Unit diagonal, every off-diagonal entry rho; rho in (0,1).
SymmetricMatrix make_rho_matrix(std::size_t n, double rho);
/// Unit diagonal, first off-diagonals alpha; alpha in [0, 1/2].
SymmetricMatrix make_tridiagonal(std::size_t n, double alpha);
/// Implicit five-point heat-equation step: 1 + 5r/2 on the diagonal, -4r/3 and r/12 on
/// the first and second off-diagonals; stencil entries past the boundary are dropped.
SymmetricMatrix make_heat_matrix(std::size_t n, double r = 0.1);

// Spectra.

/// Extreme eigenvalues from a full symmetric eigendecomposition.
SpectralInterval eigen_extremes(const SymmetricMatrix& m);
SpectralInterval eigen_extremes(const Matrix& symmetric);
/// Union of Gershgorin discs.
SpectralInterval gershgorin_bounds(const SymmetricMatrix& m);
/// lambda_min(B - A) >= -tol, i.e. A <= B in the Loewner order.
bool psd_order_holds(const SymmetricMatrix& a, const SymmetricMatrix& b, double tol = 1e-9);

/// Spectral function f applied to a symmetric matrix; eigenvalues are clamped below at floor first.
SymmetricMatrix spectral_apply(const SymmetricMatrix& m, double (*f)(double), double floor);
/// M^{1/2} with eigenvalues clamped at 1e-14.
SymmetricMatrix sqrt_psd(const SymmetricMatrix& m);
/// M^{-1/2}; throws DomainError if M is not positive definite.
SymmetricMatrix inv_sqrt_pd(const SymmetricMatrix& m);
/// M^{-1} of a positive-definite matrix.
SymmetricMatrix inverse_pd(const SymmetricMatrix& m);
/// Symmetric product A B A (the middle factor may be any symmetric matrix).
SymmetricMatrix congruence(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// Solves M x = q for positive-definite M; throws NumericalError otherwise.
Vector solve_pd(const SymmetricMatrix& m, const Vector& q);

}  // namespace psn
