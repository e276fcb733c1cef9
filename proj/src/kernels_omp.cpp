#include <omp.h>

#include <exception>

#include "psn/kernels.hpp"

namespace psn::kernels {

namespace {
int g_threads = 0;  // 0: OpenMP default

int active_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

// Exceptions may not leave a parallel region. Each item records its own failure and the
// lowest-indexed one is rethrown afterwards, which is what the serial loop would throw.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}
}  // namespace

void set_threads(int threads) { g_threads = threads; }

int threads() { return active_threads(); }

namespace omp {

std::vector<Vector> block_solves(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                 const Vector& g, const BlockCache* cache) {
  const auto count = static_cast<long>(sets.size());
  std::vector<Vector> out(sets.size());
  std::vector<std::exception_ptr> errors(sets.size());
#pragma omp parallel for schedule(static) num_threads(active_threads()) if (count > 1)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = detail::solve_one(m, sets[static_cast<std::size_t>(i)], g, cache);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

std::vector<Vector> block_solves(const BlockBuilder& blocks, std::span<const IndexSet> sets, const Vector& g) {
  const auto count = static_cast<long>(sets.size());
  std::vector<Vector> out(sets.size());
  std::vector<std::exception_ptr> errors(sets.size());
#pragma omp parallel for schedule(static) num_threads(active_threads()) if (count > 1)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = detail::solve_built(blocks, sets[static_cast<std::size_t>(i)], g);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

void accumulate_lifted_inverses(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                Matrix& sum, Matrix* sum_squares) {
  const auto count = static_cast<long>(sets.size());
  std::vector<Matrix> blocks(sets.size());
  std::vector<std::exception_ptr> errors(sets.size());
#pragma omp parallel for schedule(static) num_threads(active_threads()) if (count > 1)
  for (long i = 0; i < count; ++i) {
    try {
      blocks[static_cast<std::size_t>(i)] = detail::inverse_block(m, sets[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  // Scatter in set order so the sums match the serial reference exactly.
  for (std::size_t i = 0; i < sets.size(); ++i) detail::scatter_add(blocks[i], sets[i], sum, sum_squares);
}

}  // namespace omp

}  // namespace psn::kernels
