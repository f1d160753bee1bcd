#include "trieig/matgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "trieig/matrix_market.hpp"
#include "trieig/rational.hpp"

namespace trieig {
namespace {

TriMatrix Dense(std::size_t n, Shape shape, std::vector<double> rows) {
  return TriMatrix(n, shape, std::move(rows));
}

// The 5x5 example matrices, lower and flipped.
const TriMatrix kExampleA = Dense(5, Shape::Lower,
                                  {1, 0, 0, 0, 0,     //
                                   -5, 2, 0, 0, 0,    //
                                   -5, -5, 3, 0, 0,   //
                                   -5, -5, -5, 4, 0,  //
                                   -5, -5, -5, -5, 5});
const TriMatrix kExampleAFlipped = Dense(5, Shape::Upper,
                                         {5, -5, -5, -5, -5,  //
                                          0, 4, -5, -5, -5,   //
                                          0, 0, 3, -5, -5,    //
                                          0, 0, 0, 2, -5,     //
                                          0, 0, 0, 0, 1});

TEST(MatgenTest, BuildAExample) {
  EXPECT_EQ(build_A({5, 0, 1, 5, Shape::Lower}), kExampleA);
  EXPECT_EQ(build_A({5, 0, 1, 5, Shape::Upper}), kExampleAFlipped);
}

TEST(MatgenTest, BuildADiagonalWhenCIsZero) {
  const TriMatrix a = build_A({3, 7, 2, 0, Shape::Lower});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(a(i, j), i == j ? 9.0 + 2.0 * i : 0.0);
      EXPECT_FALSE(std::signbit(a(i, j)));
    }
  }
}

TEST(MatgenTest, BuildAEntriesMatchDefinition) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 50; ++t) {
    const MatrixParams p{1 + rng() % 12, u(rng), u(rng), u(rng), Shape::Lower};
    const TriMatrix a = build_A(p);
    for (std::size_t i = 0; i < p.m; ++i) {
      for (std::size_t j = 0; j < p.m; ++j) {
        const double expected = i < j ? 0.0 : i == j ? p.a + static_cast<double>(j + 1) * p.b : -p.c;
        EXPECT_EQ(a(i, j), expected);
      }
    }
  }
}

TEST(MatgenTest, FlipIsInvolutionAndReversesDiagonal) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 30; ++t) {
    const MatrixParams p{1 + rng() % 9, u(rng), u(rng), u(rng), Shape::Lower};
    const TriMatrix a = build_A(p);
    const TriMatrix f = flip(a);
    EXPECT_EQ(f.shape(), Shape::Upper);
    EXPECT_EQ(flip(f), a);
    for (std::size_t i = 0; i < p.m; ++i) EXPECT_EQ(f(i, i), a(p.m - 1 - i, p.m - 1 - i));
  }
  const TriMatrix id = Dense(3, Shape::Lower, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(flip(id), Dense(3, Shape::Upper, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
}

TEST(MatgenTest, TriMatrixRejectsWrongSideEntries) {
  EXPECT_THROW(Dense(2, Shape::Lower, {1, 2, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Dense(2, Shape::Upper, {1, 0, 2, 1}), std::invalid_argument);
  EXPECT_THROW(Dense(2, Shape::Upper, {1, 0, 0}), std::invalid_argument);
}

TEST(MatgenTest, EigvecSubsystemExamples) {
  const MatrixParams p{5, 0, 1, 5};
  const GeneralSystem s1 = build_eigvec_subsystem(p, 1);
  EXPECT_EQ(s1.d, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(s1.c, 5.0);
  EXPECT_EQ(build_eigvec_subsystem(p, 4).d, std::vector<double>{1});
  EXPECT_TRUE(build_eigvec_subsystem(p, 5).d.empty());

  const GeneralSystem s2 = build_eigvec_subsystem({6, 3, 2, 10}, 2);
  EXPECT_EQ(s2.d, (std::vector<double>{2, 4, 6, 8}));
  EXPECT_EQ(s2.c, 10.0);

  EXPECT_THROW(build_eigvec_subsystem({5, 0, 0, 5}, 1), std::domain_error);
  EXPECT_THROW(build_eigvec_subsystem(p, 0), std::out_of_range);
  EXPECT_THROW(build_eigvec_subsystem(p, 6), std::out_of_range);
}

TEST(MatgenTest, ParamsValidation) {
  EXPECT_THROW(build_A({0, 0, 1, 1}), std::invalid_argument);
  EXPECT_THROW(build_A({3, 0, HUGE_VAL, 1}), std::invalid_argument);
}

TEST(MatgenTest, GammaRatio) {
  const GammaRatio g = GammaRatio::from_params({5, 0, 1, 5});
  ASSERT_TRUE(g.is_exact());
  EXPECT_EQ(g.exact_value(), 5);

  const GammaRatio tenth = GammaRatio::from_params({5, 0, 0.3, 0.1});
  ASSERT_TRUE(tenth.is_exact());
  EXPECT_EQ(tenth.exact_value(), Rational(1, 3));

  const GammaRatio irrational = GammaRatio::from_params({5, 0, 1, M_PI});
  EXPECT_FALSE(irrational.is_exact());
  EXPECT_EQ(irrational.value(), M_PI);
  EXPECT_THROW(irrational.exact_value(), std::logic_error);
  EXPECT_THROW(GammaRatio::from_params({5, 0, 0, 1}), std::domain_error);
}

TEST(RationalTest, RecoverSmallRational) {
  EXPECT_EQ(*recover_small_rational(0.1), Rational(1, 10));
  EXPECT_EQ(*recover_small_rational(-2.5), Rational(-5, 2));
  EXPECT_EQ(*recover_small_rational(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(*recover_small_rational(600.0), 600);
  EXPECT_FALSE(recover_small_rational(M_PI).has_value());
  EXPECT_EQ(recover_or_exact(M_PI), exact_from_double(M_PI));
}

TEST(RationalTest, ToExtRoundsCorrectly) {
  // 1/3 rounds to the double nearest 1/3.
  EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_double(Rational(-22, 7)), -22.0 / 7.0);
  // 2^53 + 1 is a tie; ties go to even.
  const mpz_class tie = (mpz_class(1) << 53) + 1;
  EXPECT_EQ(to_double(Rational(tie)), 9007199254740992.0);
  const mpz_class up = (mpz_class(1) << 53) + 3;
  EXPECT_EQ(to_double(Rational(up)), 9007199254740996.0);
  // Far beyond double range.
  const mpz_class big = mpz_class(3) << 5000;
  EXPECT_EQ(to_ext(Rational(big)), ExtScalar(3.0).ldexp(5000));
  EXPECT_THROW(to_double(Rational(big)), std::range_error);
}

TEST(MatrixMarketTest, ArrayOutputLayout) {
  std::ostringstream out;
  write_matrix_market(out, build_A({2, 0, 1, 5}), MarketLayout::Array);
  EXPECT_EQ(out.str(),
            "%%MatrixMarket matrix array real general\n% shape: lower\n2 2\n1\n-5\n0\n2\n");
}

TEST(MatrixMarketTest, CoordinateOutputLayout) {
  std::ostringstream out;
  write_matrix_market(out, build_A({2, 0, 1, 5, Shape::Upper}), MarketLayout::Coordinate, "m=2");
  EXPECT_EQ(out.str(),
            "%%MatrixMarket matrix coordinate real general\n% shape: upper\n% m=2\n2 2 3\n"
            "1 1 2\n1 2 -5\n2 2 1\n");
}

TEST(MatrixMarketProperty, RoundTripIsBitExact) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 40; ++t) {
    MatrixParams p{1 + rng() % 10, u(rng), u(rng) / 3.0, u(rng) / 7.0, t % 2 ? Shape::Upper : Shape::Lower};
    if (t % 5 == 0) p.c = 0.0;  // -0.0 below the diagonal must survive
    const TriMatrix a = build_A(p);
    for (auto layout : {MarketLayout::Array, MarketLayout::Coordinate}) {
      std::stringstream io;
      write_matrix_market(io, a, layout);
      const TriMatrix back = read_matrix_market(io);
      ASSERT_EQ(back.size(), a.size());
      EXPECT_EQ(back.shape(), a.shape());
      for (std::size_t k = 0; k < a.entries().size(); ++k) {
        EXPECT_EQ(std::signbit(back.entries()[k]), std::signbit(a.entries()[k]));
        EXPECT_EQ(back.entries()[k], a.entries()[k]);
      }
    }
  }
}

TEST(MatrixMarketTest, ReaderErrors) {
  std::istringstream bad_header("%%MatrixMarket matrix array complex general\n1 1\n1\n");
  EXPECT_THROW(read_matrix_market(bad_header), std::runtime_error);
  std::istringstream truncated("%%MatrixMarket matrix array real general\n2 2\n1\n2\n");
  EXPECT_THROW(read_matrix_market(truncated), std::runtime_error);
  std::istringstream full("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  EXPECT_THROW(read_matrix_market(full), std::runtime_error);
  std::istringstream inferred("%%MatrixMarket matrix array real general\n2 2\n1\n0\n3\n4\n");
  EXPECT_EQ(read_matrix_market(inferred).shape(), Shape::Upper);
}

}  // namespace
}  // namespace trieig
