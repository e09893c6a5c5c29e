#pragma once

// Test-side reference computations, written independently of the library
// code paths they check.

#include <functional>
#include <vector>

#include "skewdirac/discrete_system.hpp"
#include "skewdirac/random.hpp"

namespace oracle {

using skewdirac::Complex;
using skewdirac::Index;
using skewdirac::Matrix;

Matrix small_j(Index p);
Matrix big_j(Index p);

/// Dense solve of A S - S A* = i Pi Pi* through the Kronecker form
/// (I (x) A - conj(A) (x) I) vec S = vec(i Pi Pi*).
Matrix dense_displacement_solve(const Matrix& a, const Matrix& pi);

/// Taylor coefficients 0..count-1 of f at z = 0 from samples on |z| = radius
/// (discrete Cauchy integral with `points` nodes).
std::vector<Matrix> circle_taylor(const std::function<Matrix(Complex)>& f, Index count,
                                  double radius, Index points);

/// W_{n+1}(lambda) multiplied out factor by factor from the C_k.
Matrix product_fundamental(const std::vector<Matrix>& c, Complex lambda);

/// The two-step golden system: C_0 = -j, C_1 = J (p = 1).
skewdirac::DiscreteDiracSystem example_system();
skewdirac::BetaSequence example_beta();
/// Closed form I - (i/lambda)(j - J) - J j / lambda^2 for that system.
Matrix example_calw(Complex lambda);

/// exp(l (i lambda j + j V)) for constant v, through an eigendecomposition.
Matrix constant_potential_solution(const Matrix& v, Complex lambda, double l);

/// Kernel of S in its double-integral form
///   K(x, t) = (1/2) int_{|x-t|}^{x+t} s'((r+x-t)/2) s'((r+t-x)/2)* dr
/// by the composite trapezoid rule with `panels` panels.
Matrix s_kernel_double_integral(const std::function<Matrix(double)>& s_prime, double x, double t,
                                Index panels);

/// Rejection margin on the nondegeneracy determinants used by randomized
/// suites. At the library floor of 1e-3 the S matrices of systems with n near 8
/// reach condition numbers far beyond double precision.
inline constexpr double kSuiteMargin = 0.6;

/// Points with |lambda| in [0.5, 3] and real part bounded away from 0.
std::vector<Complex> random_lambdas(skewdirac::Rng& rng, Index count);

/// Random system sizes with (n+1)p <= max_dim.
struct Shape {
  Index n;
  Index p;
};
Shape random_shape(skewdirac::Rng& rng, Index max_n, Index max_p, Index max_dim);

}  // namespace oracle
