#include "trieig/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "support/dense_oracle.hpp"

namespace trieig {
namespace {

using testing::RMatrix;

std::vector<Rational> Rationals(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

ExactSystem System(std::initializer_list<long> d, long c) {
  return ExactSystem{Rationals(d), Rational(c)};
}

TEST(OracleTest, EigenvalueExamples) {
  EXPECT_EQ(eigenvalues({5, 0, 1, 5}), (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_EQ(eigenvalues({3, 10, 0, 5}), (std::vector<double>{10, 10, 10}));
  EXPECT_EQ(eigenvalues({4, 1, -2, 5}), (std::vector<double>{-1, -3, -5, -7}));
}

TEST(OracleTest, GrowthSequenceExamples) {
  EXPECT_EQ(growth_sequence(GammaRatio::exact(5), 4).exact(), Rationals({1, 5, 15, 35, 70}));
  EXPECT_EQ(growth_sequence(GammaRatio::exact(1), 6).exact(), Rationals({1, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(growth_sequence(GammaRatio::exact(0), 3).exact(), Rationals({1, 0, 0, 0}));
  const GrowthSequence f = growth_sequence(GammaRatio::approximate(5.0), 4);
  EXPECT_FALSE(f.is_exact());
  EXPECT_EQ(f.ext(4), ExtScalar(70.0));
}

TEST(OracleTest, SolveClosedFormExamples) {
  EXPECT_EQ(solve_closed_form(System({1, 2, 3, 4}, 5)), Rationals({5, 15, 35, 70}));
  EXPECT_EQ(solve_closed_form(System({7}, 0)), Rationals({0}));
  EXPECT_EQ(solve_closed_form(System({1, 1}, 1)), Rationals({1, 2}));
  EXPECT_THROW(solve_closed_form(System({1, 0, 2}, 1)), std::domain_error);
}

TEST(OracleTest, InverseClosedFormExamples) {
  const auto h2 = inverse_closed_form(System({1, 2}, 5));
  EXPECT_EQ(h2(0, 0), 1);
  EXPECT_EQ(h2(0, 1), 0);
  EXPECT_EQ(h2(1, 0), Rational(5, 2));
  EXPECT_EQ(h2(1, 1), Rational(1, 2));

  const auto diag = inverse_closed_form(System({2, -3, 5}, 0));
  EXPECT_EQ(diag(0, 0), Rational(1, 2));
  EXPECT_EQ(diag(1, 1), Rational(-1, 3));
  EXPECT_EQ(diag(2, 1), 0);

  // First column checked against dense Gauss-Jordan inversion.
  const ExactSystem sys = System({1, 2, 3, 4}, 5);
  const auto h = inverse_closed_form(sys);
  const RMatrix brute = testing::invert(testing::dense_system(sys));
  const std::vector<Rational> expected{1, Rational(5, 2), Rational(35, 6), Rational(35, 3)};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(h(i, 0), expected[i]);
    EXPECT_EQ(brute[i][0], expected[i]);
  }
  EXPECT_THROW(inverse_closed_form(System({0}, 1)), std::domain_error);
}

TEST(OracleTest, InverseWithVanishingOmega) {
  // d_2 = -c makes 1 + a_2 = 0, so omega_3 = 0 and the ratio form is 0/0.
  const ExactSystem sys = System({1, -3, 2, 5}, 3);
  const RMatrix g = testing::dense_system(sys);
  EXPECT_EQ(testing::multiply(g, testing::to_dense(inverse_closed_form(sys))), testing::identity(4));
}

TEST(OracleTest, EigenvectorMatrixExample) {
  const EigenDecomposition eig = eigenvector_matrix({5, 0, 1, 5});
  ASSERT_TRUE(eig.is_exact());
  const long expected[5][5] = {{1, 0, 0, 0, 0},
                               {5, 1, 0, 0, 0},
                               {15, 5, 1, 0, 0},
                               {35, 15, 5, 1, 0},
                               {70, 35, 15, 5, 1}};
  const auto x = eig.dense_exact();
  const TriMatrix native = eig.dense_native();
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(x(i, j), expected[i][j]);
      EXPECT_EQ(native(i, j), static_cast<double>(expected[i][j]));
    }
  }
  const EigenDecomposition up = eigenvector_matrix({5, 0, 1, 5, Shape::Upper});
  const auto xu = up.dense_exact();
  EXPECT_EQ(xu.shape(), Shape::Upper);
  EXPECT_EQ(xu, flip(x));
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(xu(0, j), expected[4][4 - j]);
  EXPECT_THROW(eigenvector_matrix({5, 0, 0, 5}), std::domain_error);
}

TEST(OracleTest, EigenvectorMatrixIndependentOfA) {
  const auto shifted = eigenvector_matrix({4, 100, 1, 5}).dense_exact();
  const auto base = eigenvector_matrix({5, 0, 1, 5}).dense_exact();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(shifted(i, j), base(i, j));
  }
}

TEST(OracleTest, SkeelVectorsExamples) {
  const auto one = skeel_vectors(System({1}, 5));
  EXPECT_EQ(one.y, Rationals({5}));
  EXPECT_EQ(one.skeel_z, Rationals({5}));

  const ExactSystem sys = System({1, 2, 3, 4}, 5);
  const auto v = skeel_vectors(sys);
  EXPECT_EQ(v.y, Rationals({5, 55, 205, 555}));
  // Independent route: dense |G||x| and |G^-1| y.
  const RMatrix g = testing::dense_system(sys);
  const auto x = testing::forward_substitute(g, std::vector<Rational>(4, Rational(5)));
  const auto y = testing::multiply(testing::abs(g), testing::abs(x));
  EXPECT_EQ(v.y, y);
  EXPECT_EQ(v.skeel_z, testing::multiply(testing::abs(testing::invert(g)), y));

  EXPECT_THROW(skeel_vectors(System({1, -2}, 5)), std::domain_error);
  EXPECT_THROW(skeel_vectors(System({1, 2}, 0)), std::domain_error);
}

TEST(OracleTest, ClassifyAsymptotics) {
  EXPECT_EQ(classify_asymptotics(4), Asymptotics::Diverges);
  EXPECT_EQ(classify_asymptotics(0), Asymptotics::ConstantOne);
  EXPECT_EQ(classify_asymptotics(-2.5), Asymptotics::TendsToZeroSublinearly);
  EXPECT_EQ(classify_asymptotics(-3), Asymptotics::EventuallyZero);
  EXPECT_EQ(classify_asymptotics(0.25), Asymptotics::Diverges);
}

TEST(OracleTest, GrowthFloorExamples) {
  const auto r5 = growth_floor_check({5, 0, 1, 5});
  EXPECT_TRUE(r5.pass);
  EXPECT_TRUE(r5.exact);
  EXPECT_TRUE(r5.guaranteed);
  EXPECT_EQ(r5.entries_checked, 15u);

  const auto r1 = growth_floor_check({1, 3, 1, 0.5});
  EXPECT_TRUE(r1.pass);
  EXPECT_EQ(r1.entries_checked, 1u);

  const auto r50 = growth_floor_check({50, 0, 1, 50});
  EXPECT_TRUE(r50.pass);
  EXPECT_TRUE(r50.exact);

  // gamma = 1 gives x_ij = 1 < 2 on the first subdiagonal.
  const auto fail = growth_floor_check({4, 0, 1, 1});
  EXPECT_FALSE(fail.pass);
  EXPECT_FALSE(fail.guaranteed);
  ASSERT_TRUE(fail.first_violation.has_value());
  EXPECT_EQ(fail.first_violation->row, 2u);
  EXPECT_EQ(fail.first_violation->col, 1u);
  EXPECT_EQ(fail.first_violation->value, "1");

  // Float mode (gamma irrational) still checks every entry.
  const auto fl = growth_floor_check({20, 0, 1, 20 * M_PI});
  EXPECT_FALSE(fl.exact);
  EXPECT_TRUE(fl.pass);
}

TEST(OracleProperty, OmegaIdentityAndSubstitution) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const ExactSystem sys = testing::random_signed_system(rng, 30);
    const auto seq = omega_sequence(sys);
    ASSERT_EQ(seq.omega[0], 1);
    Rational sum = 0;
    for (std::size_t k = 0; k < sys.size(); ++k) {
      EXPECT_EQ(seq.omega[k], 1 + sum);
      EXPECT_EQ(seq.omega[k + 1], (1 + seq.a[k]) * seq.omega[k]);
      sum += seq.a[k] * seq.omega[k];
    }
    const auto x = solve_closed_form(sys);
    EXPECT_EQ(x, substitute(sys));
    EXPECT_EQ(x, testing::forward_substitute(testing::dense_system(sys),
                                             std::vector<Rational>(sys.size(), sys.c)));
  }
}

TEST(OracleProperty, InverseTimesMatrixIsIdentity) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const ExactSystem sys = testing::random_signed_system(rng, 20);
    const RMatrix g = testing::dense_system(sys);
    const RMatrix h = testing::to_dense(inverse_closed_form(sys));
    EXPECT_EQ(testing::multiply(g, h), testing::identity(sys.size()));
  }
}

TEST(OracleProperty, SkeelVectorsMatchDenseTripleProduct) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const ExactSystem sys = testing::random_positive_system(rng, 15);
    const RMatrix g = testing::dense_system(sys);
    const auto x = testing::forward_substitute(g, std::vector<Rational>(sys.size(), sys.c));
    const auto y = testing::multiply(testing::abs(g), testing::abs(x));
    const auto z = testing::multiply(testing::abs(testing::invert(g)), y);
    const auto v = skeel_vectors(sys);
    EXPECT_EQ(v.y, y);
    EXPECT_EQ(v.skeel_z, z);
  }
}

// Params whose doubles recover to the given small rationals.
MatrixParams RationalParams(std::size_t m, const Rational& a, const Rational& b, const Rational& c,
                            Shape shape) {
  return {m, to_double(a), to_double(b), to_double(c), shape};
}

TEST(OracleProperty, EigenRelationExact) {
  std::mt19937_64 rng(14);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t m = 1 + rng() % 30;
    Rational a = testing::random_positive_rational(rng, 40, 9);
    Rational b = testing::random_positive_rational(rng, 40, 9);
    Rational c = testing::random_positive_rational(rng, 40, 9);
    if (coin(rng)) a = -a;
    if (coin(rng)) b = -b;
    if (coin(rng)) c = -c;
    const Shape shape = coin(rng) ? Shape::Upper : Shape::Lower;
    const MatrixParams p = RationalParams(m, a, b, c, shape);
    const EigenDecomposition eig = eigenvector_matrix(p);
    ASSERT_TRUE(eig.is_exact());
    const RMatrix A = testing::to_dense(build_A_exact(p));
    const RMatrix X = testing::to_dense(eig.dense_exact());
    const RMatrix AX = testing::multiply(A, X);
    for (std::size_t col = 0; col < m; ++col) {
      // The diagonal entry of A in this column is the eigenvalue.
      const Rational lambda = A[col][col];
      for (std::size_t i = 0; i < m; ++i) EXPECT_EQ(AX[i][col], lambda * X[i][col]);
    }
  }
}

TEST(OracleProperty, EigenvectorsIgnoreA) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int t = 0; t < 20; ++t) {
    const MatrixParams p{1 + rng() % 25, u(rng), 1.0 + rng() % 7, static_cast<double>(rng() % 40)};
    MatrixParams q = p;
    q.a = u(rng);
    EXPECT_EQ(eigenvector_matrix(p).dense_exact(), eigenvector_matrix(q).dense_exact());
  }
}

TEST(OracleProperty, GrowthSequenceIsBinomial) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 40; ++t) {
    Rational gamma = testing::random_positive_rational(rng, 30, 6);
    if (t % 3 == 0) gamma = -gamma;
    const auto z = growth_sequence(GammaRatio::exact(gamma), 25).exact();
    for (std::size_t k = 0; k < z.size(); ++k) {
      EXPECT_EQ(z[k], binomial(Rational(gamma + static_cast<long>(k) - 1), k));
    }
    if (gamma >= 1) {
      for (std::size_t k = 1; k < z.size(); ++k) EXPECT_GE(z[k], z[k - 1]);
    }
    if (is_integer(gamma) && gamma >= 1) {
      for (const auto& v : z) EXPECT_TRUE(is_integer(v));
    }
  }
}

TEST(OracleProperty, AsymptoticPrefixes) {
  // alpha > 0: strictly increasing over k = 0..200.
  for (double alpha : {0.5, 3.0, 7.25}) {
    const auto y = growth_sequence(GammaRatio::exact(recover_or_exact(alpha + 1)), 200).exact();
    for (std::size_t k = 1; k < y.size(); ++k) EXPECT_GT(y[k], y[k - 1]);
  }
  // alpha negative non-integer: |y_k| strictly decreasing from ceil(|alpha|).
  for (double alpha : {-0.5, -2.5, -4.75}) {
    const auto y = growth_sequence(GammaRatio::exact(recover_or_exact(alpha + 1)), 300).exact();
    for (std::size_t k = static_cast<std::size_t>(std::ceil(-alpha)); k + 1 < y.size(); ++k) {
      EXPECT_NE(y[k], 0);
      EXPECT_LT(abs(y[k + 1]), abs(y[k]));
    }
    const auto far = growth_sequence(GammaRatio::approximate(alpha + 1), 10001);
    const double ratio = (far.ext(10001) / far.ext(10000)).to_native().value();
    EXPECT_NEAR(ratio, 1.0, 1e-3);
  }
  // Negative integer: zero from k = |alpha| on.
  const auto y = growth_sequence(GammaRatio::exact(-1), 10).exact();
  for (std::size_t k = 2; k < y.size(); ++k) EXPECT_EQ(y[k], 0);
}

TEST(OracleProperty, ExtBackendTracksExact) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const ExactSystem exact = testing::random_positive_system(rng, 30);
    const ExtSystem ext{[&] {
                          std::vector<ExtScalar> d;
                          for (const auto& v : exact.d) d.push_back(to_ext(v));
                          return d;
                        }(),
                        to_ext(exact.c)};
    const auto xe = solve_closed_form(exact);
    const auto xf = solve_closed_form(ext);
    for (std::size_t k = 0; k < xe.size(); ++k) {
      const double rel = ((xf[k] - to_ext(xe[k])) / to_ext(xe[k])).abs().to_native().value();
      EXPECT_LE(rel, 0x1.0p-40);
    }
  }
}

}  // namespace
}  // namespace trieig
