#include "psn/kernels.hpp"

namespace psn::kernels {

BlockCache BlockCache::for_list_windows(const SymmetricMatrix& m, std::size_t tau) {
  const std::size_t n = m.dim();
  if (tau == 0 || tau > n) throw DomainError("BlockCache: window size must lie in [1, n]");
  BlockCache cache;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> window(tau);
    for (std::size_t k = 0; k < tau; ++k) window[k] = (s + k) % n;
    cache.insert(BlockFactor(m, IndexSet(std::move(window))));
    if (tau == n) break;  // every window is the full set
  }
  return cache;
}

void BlockCache::insert(BlockFactor factor) {
  IndexSet key = factor.set();
  factors_.insert_or_assign(std::move(key), std::move(factor));
}

const BlockFactor* BlockCache::find(const IndexSet& s) const {
  const auto it = factors_.find(s);
  return it == factors_.end() ? nullptr : &it->second;
}

namespace detail {

Vector solve_one(const SymmetricMatrix& m, const IndexSet& s, const Vector& g, const BlockCache* cache) {
  if (cache) {
    if (const BlockFactor* f = cache->find(s)) return f->solve_gathered(g);
  }
  return BlockFactor(m, s).solve_gathered(g);
}

Vector solve_built(const BlockBuilder& blocks, const IndexSet& s, const Vector& g) {
  return BlockFactor(s, blocks(s)).solve_gathered(g);
}

Matrix inverse_block(const SymmetricMatrix& m, const IndexSet& s) { return BlockFactor(m, s).inverse(); }

void scatter_add(const Matrix& block, const IndexSet& s, Matrix& sum, Matrix* sum_squares) {
  const auto k = s.size();
  for (std::size_t b = 0; b < k; ++b) {
    const auto col = static_cast<Eigen::Index>(s[b]);
    for (std::size_t a = 0; a < k; ++a) {
      const auto row = static_cast<Eigen::Index>(s[a]);
      const double v = block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      sum(row, col) += v;
      if (sum_squares) (*sum_squares)(row, col) += v * v;
    }
  }
}

}  // namespace detail

namespace serial {

std::vector<Vector> block_solves(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                 const Vector& g, const BlockCache* cache) {
  std::vector<Vector> out;
  out.reserve(sets.size());
  for (const IndexSet& s : sets) out.push_back(detail::solve_one(m, s, g, cache));
  return out;
}

std::vector<Vector> block_solves(const BlockBuilder& blocks, std::span<const IndexSet> sets, const Vector& g) {
  std::vector<Vector> out;
  out.reserve(sets.size());
  for (const IndexSet& s : sets) out.push_back(detail::solve_built(blocks, s, g));
  return out;
}

void accumulate_lifted_inverses(const SymmetricMatrix& m, std::span<const IndexSet> sets,
                                Matrix& sum, Matrix* sum_squares) {
  for (const IndexSet& s : sets) detail::scatter_add(detail::inverse_block(m, s), s, sum, sum_squares);
}

}  // namespace serial

}  // namespace psn::kernels
