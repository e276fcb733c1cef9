#pragma once

// Data-parallel kernels shared by the sampling, solver and ERM code.
//
// Every kernel has a serial reference in psn::kernels::serial and an OpenMP version in
// psn::kernels::omp. Both run the same per-item arithmetic and combine partial results in
// the same fixed order, so their outputs are bit-identical for any thread count. The
// tests compare the two directly; bench/ times them against each other.

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "psn/matrix.hpp"

namespace psn::kernels {

/// Physical worker threads for the omp kernels. Results do not depend on this value.
void set_threads(int threads);
int threads();

/// Read-only cache of block factorizations keyed by index set.
class BlockCache {
 public:
  BlockCache() = default;
  /// Factorizes every cyclic window {s, s+1, ..., s+tau-1 mod n} of M.
  static BlockCache for_list_windows(const SymmetricMatrix& m, std::size_t tau);

  void insert(BlockFactor factor);
  /// nullptr when the set has not been cached.
  const BlockFactor* find(const IndexSet& s) const;
  std::size_t size() const noexcept { return factors_.size(); }

 private:
  std::map<IndexSet, BlockFactor> factors_;
};

/// Produces the principal block M_SS, for operators that are never stored densely.
using BlockBuilder = std::function<Matrix(const IndexSet&)>;

namespace serial {

/// z_i = (M_{S_i S_i})^{-1} g_{S_i}, one |S_i|-vector per set.
std::vector<Vector> block_solves(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                 const Vector& g, const BlockCache* cache = nullptr);
std::vector<Vector> block_solves(const BlockBuilder& blocks, std::span<const IndexSet> sets, const Vector& g);

/// sum += sum_i (M_{S_i})^{-1}; if sum_squares is given it also accumulates the entry-wise squares.
void accumulate_lifted_inverses(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                Matrix& sum, Matrix* sum_squares = nullptr);

}  // namespace serial

namespace omp {

std::vector<Vector> block_solves(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                 const Vector& g, const BlockCache* cache = nullptr);
std::vector<Vector> block_solves(const BlockBuilder& blocks, std::span<const IndexSet> sets, const Vector& g);

void accumulate_lifted_inverses(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                Matrix& sum, Matrix* sum_squares = nullptr);

}  // namespace omp

namespace detail {
// Arithmetic shared by both drivers, defined once so both see the same instructions.
Vector solve_one(const SymmetricMatrix& m, const IndexSet& s, const Vector& g, const BlockCache* cache);
Vector solve_built(const BlockBuilder& blocks, const IndexSet& s, const Vector& g);
Matrix inverse_block(const SymmetricMatrix& m, const IndexSet& s);
void scatter_add(const Matrix& block, const IndexSet& s, Matrix& sum, Matrix* sum_squares);
}  // namespace detail

}  // namespace psn::kernels
