#include <gtest/gtest.h>

#include <random>

#include "psn/kernels.hpp"
#include "psn/sampling.hpp"
#include "test_support.hpp"

using namespace psn;
using psn::testing::bitwise_equal;

namespace {

std::vector<IndexSet> some_sets(std::size_t n, std::size_t tau, std::size_t count, std::uint64_t seed) {
  SeedStream stream(seed);
  const SamplingScheme s(SamplingKind::parallel_nice, n, tau, count);
  return draw(s, stream).sets;
}

class ThreadGuard {
 public:
  ~ThreadGuard() { kernels::set_threads(0); }
};

}  // namespace

TEST(Kernels, BlockSolvesMatchSerialForAnyThreadCount) {
  ThreadGuard guard;
  std::mt19937_64 eng(1);
  const SymmetricMatrix m = psn::testing::random_pd(30, eng);
  const Vector g = psn::testing::random_vector(30, eng);
  const auto sets = some_sets(30, 5, 16, 2);
  const auto ref = kernels::serial::block_solves(m, sets, g);
  for (int t : {1, 2, 3, 8}) {
    kernels::set_threads(t);
    const auto out = kernels::omp::block_solves(m, sets, g);
    ASSERT_EQ(out.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_TRUE(bitwise_equal(out[i], ref[i])) << "threads " << t;
  }
}

TEST(Kernels, BlockSolvesSolveTheBlocks) {
  std::mt19937_64 eng(2);
  const SymmetricMatrix m = psn::testing::random_pd(12, eng);
  const Vector g = psn::testing::random_vector(12, eng);
  const auto sets = some_sets(12, 4, 3, 3);
  const auto z = kernels::omp::block_solves(m, sets, g);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Vector r = principal_submatrix(m, sets[i]).dense() * z[i] - gather(g, sets[i]);
    EXPECT_LT(r.norm(), 1e-10);
  }
}

TEST(Kernels, BuilderOverloadAgreesWithMatrixOverload) {
  ThreadGuard guard;
  std::mt19937_64 eng(3);
  const SymmetricMatrix m = psn::testing::random_pd(15, eng);
  const Vector g = psn::testing::random_vector(15, eng);
  const auto sets = some_sets(15, 3, 6, 4);
  const kernels::BlockBuilder blocks = [&](const IndexSet& s) { return principal_submatrix(m, s).dense(); };
  const auto ref = kernels::serial::block_solves(m, sets, g);
  const auto serial = kernels::serial::block_solves(blocks, sets, g);
  for (int t : {1, 4}) {
    kernels::set_threads(t);
    const auto par = kernels::omp::block_solves(blocks, sets, g);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      EXPECT_TRUE(bitwise_equal(par[i], serial[i]));
      EXPECT_LT((serial[i] - ref[i]).norm(), 1e-12);
    }
  }
}

TEST(Kernels, CacheGivesTheSameSolves) {
  const SymmetricMatrix m = make_heat_matrix(40);
  const auto cache = kernels::BlockCache::for_list_windows(m, 5);
  EXPECT_EQ(cache.size(), 40u);
  EXPECT_NE(cache.find(list_window(40, 5, 38)), nullptr);
  EXPECT_EQ(cache.find(IndexSet({0, 2})), nullptr);
  std::mt19937_64 eng(4);
  const Vector g = psn::testing::random_vector(40, eng);
  SeedStream stream(5);
  const auto sets = draw(SamplingScheme(SamplingKind::parallel_list, 40, 5, 4), stream).sets;
  const auto cached = kernels::omp::block_solves(m, sets, g, &cache);
  const auto plain = kernels::serial::block_solves(m, sets, g);
  for (std::size_t i = 0; i < sets.size(); ++i) EXPECT_TRUE(bitwise_equal(cached[i], plain[i]));
}

TEST(Kernels, AccumulatedInversesMatchSerial) {
  ThreadGuard guard;
  std::mt19937_64 eng(6);
  const SymmetricMatrix m = psn::testing::random_pd(10, eng);
  const auto sets = enumerate_sets(SamplingScheme(SamplingKind::nice, 10, 3));
  Matrix ref = Matrix::Zero(10, 10), ref_sq = Matrix::Zero(10, 10);
  kernels::serial::accumulate_lifted_inverses(m, sets, ref, &ref_sq);
  Matrix direct = Matrix::Zero(10, 10);
  for (const auto& s : sets) direct += lifted_inverse(m, s).dense();
  EXPECT_LT((ref - direct).cwiseAbs().maxCoeff(), 1e-10);
  for (int t : {1, 2, 5}) {
    kernels::set_threads(t);
    Matrix sum = Matrix::Zero(10, 10), sq = Matrix::Zero(10, 10);
    kernels::omp::accumulate_lifted_inverses(m, sets, sum, &sq);
    EXPECT_EQ(sum, ref);
    EXPECT_EQ(sq, ref_sq);
  }
}

TEST(Kernels, SingularBlockPropagatesFromWorkers) {
  Matrix a = Matrix::Identity(4, 4);
  a(0, 1) = a(1, 0) = 1.0;  // rows 0 and 1 coincide on {0, 1}
  const SymmetricMatrix m(a);
  const std::vector<IndexSet> sets = {IndexSet({2, 3}), IndexSet({0, 1})};
  const Vector g = Vector::Ones(4);
  EXPECT_THROW(kernels::omp::block_solves(m, sets, g), SingularBlockError);
  EXPECT_THROW(kernels::serial::block_solves(m, sets, g), SingularBlockError);
}
