#pragma once

// Continuous skew-self-adjoint Dirac system on [0, l]:
//
//   u'(x, lambda) = (i lambda j + j V(x)) u(x, lambda),   u(0) = I_{2p},
//   j = diag(I_p, -I_p),   V = [[0, v], [v*, 0]],
//
// at desk scale: forward integration and Weyl function evaluation, then
// recovery of the kernel s(x) by a damped Fourier inversion, the Nystrom
// discretization of the operator S, the rows chi(x) and, for p = 1, the
// potential itself.

#include <functional>
#include <vector>

#include "skewdirac/linalg.hpp"

namespace skewdirac {

/// v sampled on N+1 equispaced nodes of [0, l] with declared bound M.
struct PotentialGrid {
  Index p = 1;
  double l = 1.0;
  double bound = 0.0;
  std::vector<Matrix> v;

  Index intervals() const { return static_cast<Index>(v.size()) - 1; }
  double step() const { return l / static_cast<double>(intervals()); }
  double node(Index k) const { return step() * static_cast<double>(k); }

  /// Four-point Lagrange interpolation between nodes.
  Matrix at(double x) const;
};

/// Samples f on N+1 nodes; the bound is the largest nodewise spectral norm.
PotentialGrid make_potential(Index p, double l, Index intervals,
                             const std::function<Matrix(double)>& f);

/// Throws Validation unless shapes are consistent, N >= 1 and
/// max ||v(x_k)|| <= M + 1e-12.
void require_valid(const PotentialGrid& pot);

struct IntegrationOptions {
  /// Substeps per grid interval are chosen so tau (|lambda| + M) stays below this.
  double target_phase = 0.5;
  /// Hard ceiling on tau (|lambda| + M); exceeding it raises StepSizeTooCoarse.
  double max_phase = 1.0;
  Index max_substeps = 256;
};

/// u(l, lambda) by the fourth-order two-point Gauss Magnus integrator, with
/// the potential interpolated at the Gauss nodes. Exactly unitary up to
/// rounding for real lambda.
Matrix integrate_fundamental(const PotentialGrid& pot, Complex lambda,
                             const IntegrationOptions& options = {});

/// phi(lambda) = W12 W22^{-1} for W(lambda) = u(l, conj(lambda))*, i.e. the
/// Weyl function for the pair R = 0, Q = I. Requires Im lambda < -M.
Matrix weyl_continuous(const PotentialGrid& pot, Complex lambda,
                       const IntegrationOptions& options = {});

using PhiSampler = std::function<Matrix(Complex)>;

struct FourierOptions {
  /// Damping eta; must exceed 2M. Zero selects 2M + 1.
  double eta = 0.0;
  /// Truncation Xi of the xi-integral.
  double xi_max = 400.0;
  /// Quadrature step in xi; zero picks 2 pi / P with P = max(1.5 l, 36 / eta),
  /// which keeps periodic images of the damped kernel below e^{-36}.
  double xi_step = 0.0;
  /// Largest acceptable tail estimate for the truncated integral.
  double tail_tolerance = 1e-2;
};

/// phi(lambda / 2) sampled at lambda = xi - i eta on a uniform xi grid.
struct PhiSamples {
  Index p = 1;
  double eta = 0.0;
  std::vector<double> xi;
  std::vector<Matrix> phi;
};

PhiSamples sample_phi(const PhiSampler& phi, Index p, double bound, double l,
                      const FourierOptions& options);

/// s and its derivative on N+1 nodes of [0, l].
struct SKernelGrid {
  Index p = 1;
  double l = 1.0;
  std::vector<Matrix> s;
  std::vector<Matrix> s_prime;
  double tail_estimate = 0.0;

  Index intervals() const { return static_cast<Index>(s.size()) - 1; }
  double step() const { return l / static_cast<double>(intervals()); }
};

/// Pins s(0) = 0 and differentiates: centered differences inside, second-order
/// one-sided differences at the ends.
SKernelGrid make_kernel_grid(Index p, double l, std::vector<Matrix> s);

/// e^{-eta x} s(x) = (i / 2 pi) int e^{i xi x} lambda^{-1} phi(lambda / 2) d xi
/// by the composite trapezoid rule over the sampled window. Raises
/// TruncationBudgetExceeded when the tail estimate exceeds tail_tolerance.
SKernelGrid recover_s(const PhiSamples& samples, double l, Index intervals,
                      double tail_tolerance = 1e-2);

SKernelGrid recover_s(const PhiSampler& phi, double bound, double l, Index intervals,
                      const FourierOptions& options = {});

/// Hermitian Nystrom matrix I + W^{1/2} K W^{1/2} of
///   (S f)(x) = f(x) + int_0^l K(x, t) f(t) dt,
///   K(x, t) = int_0^{min(x,t)} s'(x - u) s'(t - u)* du,
/// with weights W = diag(h/2, h, ..., h), so that the leading principal block
/// on nodes 0..k discretizes S on [0, x_k]. Raises NotPositive when a Cholesky
/// pivot falls below `positivity` relative to the largest diagonal entry.
Matrix build_S_operator(const SKernelGrid& kernel, double positivity = kDefaultPositivityTol);

/// chi(x) sampled on the grid, each p x 2p.
struct ChiGrid {
  Index p = 1;
  double l = 1.0;
  std::vector<Matrix> chi;
};

/// chi(x) = [0 I] - int_0^x (S(x)^{-1} s')(t)* [I s(t)] dt.
ChiGrid recover_chi(const SKernelGrid& kernel, const Matrix& s_operator);

/// For p = 1: beta = [conj chi_2, -conj chi_1] and v = beta' chi*.
/// Raises WrongBlockSize for p > 1.
PotentialGrid recover_potential_p1(const ChiGrid& chi);

/// beta(x)* beta(x) = d/dx int_0^x [I s(t)]* (S(x)^{-1} [I s])(t) dt on the grid.
std::vector<Matrix> recover_beta_gram(const SKernelGrid& kernel, const Matrix& s_operator);

/// sqrt(int |a - b|^2 / int |b|^2) by the trapezoid rule (absolute error when b = 0).
double relative_l2_error(const PotentialGrid& approx, const PotentialGrid& truth);

}  // namespace skewdirac
