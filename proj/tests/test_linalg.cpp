#include <gtest/gtest.h>

#include "oracles.hpp"
#include "skewdirac/error.hpp"
#include "skewdirac/linalg.hpp"
#include "skewdirac/random.hpp"

using namespace skewdirac;

namespace {

Matrix pi_from_random(Rng& rng, Index blocks, Index p) {
  return random_gaussian(rng, blocks * p, 2 * p);
}

}  // namespace

TEST(Displacement, ScalarSingleBlock) {
  // A = i/2, S = |Pi|^2.
  Matrix pi(1, 2);
  pi << Complex(1.0, 0.0), Complex(0.0, 2.0);
  const Matrix s = solve_displacement(displacement_generator(1, 1), pi);
  EXPECT_NEAR(std::abs(s(0, 0) - 5.0), 0.0, 1e-14);
}

TEST(Displacement, MatchesDenseKroneckerSolve) {
  Rng rng(11);
  for (Index p = 1; p <= 3; ++p) {
    for (Index blocks = 1; blocks * p <= 24; blocks += 3) {
      const Matrix a = displacement_generator(blocks, p);
      const Matrix pi = pi_from_random(rng, blocks, p);
      const Matrix fast = solve_displacement(a, pi);
      const Matrix dense = oracle::dense_displacement_solve(a, pi);
      EXPECT_LE(max_norm(fast - dense), 1e-8 * std::max(1.0, max_norm(dense)))
          << "p=" << p << " blocks=" << blocks;
      EXPECT_LE(displacement_residual(a, fast, pi), 1e-10 * std::max(1.0, max_norm(fast)));
    }
  }
}

TEST(Displacement, SolutionIsHermitian) {
  Rng rng(12);
  const Matrix a = displacement_generator(5, 2);
  const Matrix s = solve_displacement(a, pi_from_random(rng, 5, 2));
  EXPECT_TRUE(is_hermitian(s, 0.0));
}

TEST(Displacement, RejectsForeignGenerator) {
  Matrix a = displacement_generator(3, 1);
  a(0, 2) = 1.0;
  const Matrix pi = Matrix::Ones(3, 2);
  try {
    solve_displacement(a, pi);
    FAIL() << "expected UnsupportedGenerator";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedGenerator);
  }
}

TEST(Displacement, GeneratorStructure) {
  const Matrix a = displacement_generator(3, 2);
  EXPECT_EQ(a.rows(), 6);
  EXPECT_EQ(a(0, 0), Complex(0.0, 0.5));
  EXPECT_EQ(a(2, 0), Complex(0.0, 1.0));
  EXPECT_EQ(a(0, 2), Complex(0.0, 0.0));
  EXPECT_EQ(a(1, 0), Complex(0.0, 0.0));
}

TEST(PosdefFactor, ReconstructsAndRejects) {
  Rng rng(13);
  const Matrix g = random_gaussian(rng, 6, 6);
  const Matrix m = Matrix::Identity(6, 6) + g * g.adjoint();
  const Matrix l = posdef_factor(m);
  EXPECT_LE(max_norm(l * l.adjoint() - m), 1e-12 * max_norm(m));

  Matrix bad = m;
  bad(5, 5) = -1.0;
  try {
    posdef_factor(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositive);
  }
  Matrix skew = m;
  skew(0, 1) += 1.0;
  try {
    posdef_factor(skew);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(HermitianInvSqrt, InvertsSquare) {
  Rng rng(14);
  const Matrix g = random_gaussian(rng, 4, 4);
  const Matrix m = Matrix::Identity(4, 4) + g * g.adjoint();
  const Matrix r = hermitian_inv_sqrt(m);
  EXPECT_LE(max_norm(r * m * r - Matrix::Identity(4, 4)), 1e-12);
  EXPECT_TRUE(is_hermitian(r, 1e-12));
}

TEST(Mobius, IdentityCoefficientsReturnRatio) {
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix zero = Matrix::Zero(2, 2);
  Matrix r(2, 2), q(2, 2);
  r << 1.0, 2.0, 3.0, 4.0;
  q << 2.0, 0.0, 1.0, 1.0;
  const Matrix out = mobius_transform(id, zero, zero, id, r, q);
  EXPECT_LE(max_norm(out * q - r), 1e-13);
}

TEST(Mobius, SingularDenominator) {
  const Matrix id = Matrix::Identity(1, 1);
  const Matrix zero = Matrix::Zero(1, 1);
  try {
    mobius_transform(id, zero, zero, id, id, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularDenominator);
  }
}

TEST(Mobius, SplitAssembleRoundTrip) {
  Rng rng(15);
  const Matrix w = random_gaussian(rng, 4, 4);
  EXPECT_EQ(MobiusBlocks::split(w).assemble(), w);
}

TEST(Norms, SpectralAndSmallest) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 2.0, 0.5;
  EXPECT_NEAR(spectral_norm(d), 3.0, 1e-14);
  EXPECT_NEAR(smallest_singular_value(d), 0.5, 1e-14);
  EXPECT_NEAR(condition_number(d), 6.0, 1e-13);
}
