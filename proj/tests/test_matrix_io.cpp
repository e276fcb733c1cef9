#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "psn/matrix_io.hpp"
#include "test_support.hpp"

using namespace psn;

TEST(MatrixMarket, ArrayRoundTripIsExact) {
  std::mt19937_64 eng(3);
  const SymmetricMatrix m = psn::testing::random_pd(6, eng);
  for (auto format : {MatrixMarketFormat::array, MatrixMarketFormat::coordinate}) {
    std::stringstream s;
    write_matrix_market(s, m, format);
    const Matrix back = read_matrix_market(s);
    EXPECT_EQ(back, m.dense());
  }
}

TEST(MatrixMarket, GeneralDenseRoundTrip) {
  std::mt19937_64 eng(4);
  const Matrix a = psn::testing::random_matrix(3, 5, eng);
  std::stringstream s;
  write_matrix_market(s, a);
  EXPECT_EQ(read_matrix_market(s), a);
}

TEST(MatrixMarket, SymmetricCoordinateMirrorsLowerTriangle) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 4\n"
      "1 1 2.0\n"
      "2 1 -1.0\n"
      "2 2 2.0\n"
      "3 3 1.5\n");
  const Matrix m = read_matrix_market(in);
  EXPECT_DOUBLE_EQ(m(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(m(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(m(2, 2), 1.5);
  EXPECT_DOUBLE_EQ(m(0, 2), 0.0);
}

TEST(MatrixMarket, RejectsMalformedInput) {
  const char* bad[] = {
      "",
      "not a banner\n1 1\n1\n",
      "%%MatrixMarket matrix array complex general\n1 1\n1\n",
      "%%MatrixMarket matrix array real general\n2 2\n1\n2\n",
      "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
      "%%MatrixMarket matrix array real symmetric\n2 3\n1\n",
      "%%MatrixMarket matrix array real general\n1 1\nabc\n",
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(read_matrix_market(in), DomainError) << text;
  }
}

TEST(MatrixMarket, MissingFileIsDomainError) {
  EXPECT_THROW(read_matrix_market(std::string("/nonexistent/m.mtx")), DomainError);
}

TEST(VectorFile, RoundTripAndComments) {
  Vector v(3);
  v << 1.0 / 3.0, -2.5e-300, 7.0;
  std::stringstream s;
  write_vector(s, v);
  EXPECT_EQ(read_vector(s), v);

  std::istringstream in("# header\n1\n\n% note\n2.5\n");
  const Vector w = read_vector(in);
  ASSERT_EQ(w.size(), 2);
  EXPECT_DOUBLE_EQ(w(1), 2.5);

  std::istringstream bad("1\n2 3\n");
  EXPECT_THROW(read_vector(bad), DomainError);
}
