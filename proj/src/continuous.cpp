#include "skewdirac/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "skewdirac/error.hpp"

namespace skewdirac {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr double kAliasExponent = 36.0;

// i lambda j + j V(x).
Matrix generator(const Matrix& v, Complex lambda, Index p) {
  Matrix g = Matrix::Zero(2 * p, 2 * p);
  g.topLeftCorner(p, p).diagonal().setConstant(kI * lambda);
  g.bottomRightCorner(p, p).diagonal().setConstant(-kI * lambda);
  g.topRightCorner(p, p) = v;
  g.bottomLeftCorner(p, p) = -v.adjoint();
  return g;
}

Matrix expm(const Matrix& omega) {
  if (omega.rows() == 2) {
    // Traceless 2 x 2: omega^2 = -det(omega) I.
    const Complex mu = std::sqrt(-omega.determinant());
    const Complex c = std::cosh(mu);
    const Complex sinhc = std::abs(mu) < 1e-8 ? Complex(1.0) + mu * mu / 6.0 : std::sinh(mu) / mu;
    return c * Matrix::Identity(2, 2) + sinhc * omega;
  }
  return omega.exp();
}

// Derivative on a uniform grid: centered inside, second-order one-sided at the ends.
std::vector<Matrix> differentiate(const std::vector<Matrix>& f, double h) {
  const std::size_t n = f.size();
  std::vector<Matrix> d(n);
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / h;
    return d;
  }
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  return d;
}

// Trapezoid weight of node m on [0, x_k].
double trapezoid_weight(Index m, Index k, double h) {
  return (m == 0 || m == k) ? 0.5 * h : h;
}

void require_kernel(const SKernelGrid& kernel) {
  if (kernel.s.size() < 2 || kernel.s.size() != kernel.s_prime.size()) {
    fail(ErrorCode::Validation, "kernel grid needs at least two nodes for s and s'");
  }
  for (std::size_t k = 0; k < kernel.s.size(); ++k) {
    if (kernel.s[k].rows() != kernel.p || kernel.s[k].cols() != kernel.p ||
        kernel.s_prime[k].rows() != kernel.p || kernel.s_prime[k].cols() != kernel.p) {
      fail(ErrorCode::DimensionMismatch, "kernel samples must be p x p");
    }
  }
}

void require_operator(const SKernelGrid& kernel, const Matrix& s_operator) {
  require_kernel(kernel);
  const Index dim = (kernel.intervals() + 1) * kernel.p;
  if (s_operator.rows() != dim || s_operator.cols() != dim) {
    fail(ErrorCode::DimensionMismatch, "S operator does not match the kernel grid");
  }
}

// Solves S_k y = b with S_k the leading dim x dim block, from the Cholesky factor of S.
Matrix leading_solve(const Matrix& chol, Index dim, const Matrix& b) {
  const auto l = chol.topLeftCorner(dim, dim);
  const Matrix y = l.triangularView<Eigen::Lower>().solve(b);
  return l.adjoint().triangularView<Eigen::Upper>().solve(y);
}

}  // namespace

Matrix PotentialGrid::at(double x) const {
  const Index n = intervals();
  const double h = step();
  if (n < 3) {
    const Index k = std::clamp<Index>(static_cast<Index>(std::floor(x / h)), 0, n - 1);
    const double t = x / h - static_cast<double>(k);
    return (1.0 - t) * v[k] + t * v[k + 1];
  }
  const Index k = std::clamp<Index>(static_cast<Index>(std::floor(x / h)), 0, n - 1);
  const Index first = std::clamp<Index>(k - 1, 0, n - 3);
  Matrix out = Matrix::Zero(p, p);
  for (Index a = 0; a < 4; ++a) {
    double w = 1.0;
    const double xa = node(first + a);
    for (Index b = 0; b < 4; ++b) {
      if (b != a) w *= (x - node(first + b)) / (xa - node(first + b));
    }
    out += w * v[first + a];
  }
  return out;
}

PotentialGrid make_potential(Index p, double l, Index intervals,
                             const std::function<Matrix(double)>& f) {
  if (intervals < 1 || !(l > 0.0)) fail(ErrorCode::Validation, "need l > 0 and at least one interval");
  PotentialGrid pot{p, l, 0.0, {}};
  pot.v.reserve(static_cast<std::size_t>(intervals + 1));
  for (Index k = 0; k <= intervals; ++k) {
    pot.v.push_back(f(l * static_cast<double>(k) / static_cast<double>(intervals)));
    pot.bound = std::max(pot.bound, spectral_norm(pot.v.back()));
  }
  require_valid(pot);
  return pot;
}

void require_valid(const PotentialGrid& pot) {
  if (pot.p < 1) fail(ErrorCode::Validation, "block size p must be positive");
  if (!(pot.l > 0.0) || !std::isfinite(pot.l)) fail(ErrorCode::Validation, "interval length must be positive");
  if (pot.v.size() < 2) fail(ErrorCode::Validation, "potential needs at least two nodes");
  if (!(pot.bound >= 0.0) || !std::isfinite(pot.bound)) fail(ErrorCode::Validation, "bound M must be finite");
  for (std::size_t k = 0; k < pot.v.size(); ++k) {
    const Matrix& v = pot.v[k];
    if (v.rows() != pot.p || v.cols() != pot.p) {
      fail(ErrorCode::WrongBlockSize, "potential sample " + std::to_string(k) + " is not p x p");
    }
    if (!v.allFinite()) fail(ErrorCode::Validation, "potential sample " + std::to_string(k) + " is not finite");
    const double norm = spectral_norm(v);
    if (norm > pot.bound + kBoundSlack) {
      std::ostringstream os;
      os << "||v(x_" << k << ")|| = " << norm << " exceeds the bound M = " << pot.bound;
      fail(ErrorCode::Validation, os.str());
    }
  }
}

Matrix integrate_fundamental(const PotentialGrid& pot, Complex lambda,
                             const IntegrationOptions& options) {
  require_valid(pot);
  const Index p = pot.p;
  const double h = pot.step();
  const double rate = std::abs(lambda) + pot.bound;
  const Index substeps = std::clamp<Index>(
      static_cast<Index>(std::ceil(h * rate / options.target_phase)), 1, options.max_substeps);
  const double tau = h / static_cast<double>(substeps);
  if (tau * rate > options.max_phase) {
    std::ostringstream os;
    os << "step phase " << tau * rate << " exceeds " << options.max_phase << " with "
       << substeps << " substeps per interval";
    fail(ErrorCode::StepSizeTooCoarse, os.str());
  }
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double commutator_weight = std::sqrt(3.0) / 12.0 * tau * tau;

  Matrix u = Matrix::Identity(2 * p, 2 * p);
  for (Index k = 0; k < pot.intervals(); ++k) {
    for (Index m = 0; m < substeps; ++m) {
      const double x = pot.node(k) + tau * static_cast<double>(m);
      const Matrix a1 = generator(pot.at(x + c1 * tau), lambda, p);
      const Matrix a2 = generator(pot.at(x + c2 * tau), lambda, p);
      const Matrix omega = 0.5 * tau * (a1 + a2) + commutator_weight * (a2 * a1 - a1 * a2);
      u = expm(omega) * u;
    }
  }
  return u;
}

Matrix weyl_continuous(const PotentialGrid& pot, Complex lambda, const IntegrationOptions& options) {
  require_valid(pot);
  if (!(lambda.imag() < -pot.bound)) {
    std::ostringstream os;
    os << "Im lambda = " << lambda.imag() << " is not below -M = " << -pot.bound;
    fail(ErrorCode::HalfPlaneViolation, os.str());
  }
  const Matrix w = integrate_fundamental(pot, std::conj(lambda), options).adjoint();
  const Index p = pot.p;
  return mobius_transform(MobiusBlocks::split(w), Matrix::Zero(p, p), Matrix::Identity(p, p));
}

PhiSamples sample_phi(const PhiSampler& phi, Index p, double bound, double l,
                      const FourierOptions& options) {
  if (!(l > 0.0)) fail(ErrorCode::Validation, "interval length must be positive");
  const double eta = options.eta > 0.0 ? options.eta : 2.0 * bound + 1.0;
  if (!(eta > 2.0 * bound)) {
    std::ostringstream os;
    os << "damping eta = " << eta << " must exceed 2M = " << 2.0 * bound;
    fail(ErrorCode::HalfPlaneViolation, os.str());
  }
  if (!(options.xi_max > 0.0)) fail(ErrorCode::Validation, "xi_max must be positive");
  double step = options.xi_step;
  if (!(step > 0.0)) {
    const double period = std::max(1.5 * l, kAliasExponent / eta);
    step = 2.0 * std::numbers::pi / period;
  }
  const Index half = std::max<Index>(1, static_cast<Index>(std::ceil(options.xi_max / step)));
  step = options.xi_max / static_cast<double>(half);

  PhiSamples out{p, eta, {}, {}};
  out.xi.reserve(static_cast<std::size_t>(2 * half + 1));
  out.phi.reserve(static_cast<std::size_t>(2 * half + 1));
  for (Index j = -half; j <= half; ++j) {
    const double xi = step * static_cast<double>(j);
    const Matrix value = phi(Complex(xi, -eta) / 2.0);
    if (value.rows() != p || value.cols() != p) fail(ErrorCode::WrongBlockSize, "phi samples must be p x p");
    out.xi.push_back(xi);
    out.phi.push_back(value);
  }
  return out;
}

SKernelGrid make_kernel_grid(Index p, double l, std::vector<Matrix> s) {
  if (s.size() < 2) fail(ErrorCode::Validation, "kernel grid needs at least two nodes");
  SKernelGrid out{p, l, std::move(s), {}, 0.0};
  out.s[0].setZero(p, p);
  out.s_prime = differentiate(out.s, out.step());
  return out;
}

SKernelGrid recover_s(const PhiSamples& samples, double l, Index intervals, double tail_tolerance) {
  const std::size_t count = samples.xi.size();
  if (count < 3 || samples.phi.size() != count) fail(ErrorCode::Validation, "need at least three phi samples");
  if (intervals < 1) fail(ErrorCode::Validation, "need at least one interval");
  const Index p = samples.p;
  const double eta = samples.eta;
  const double dxi = samples.xi[1] - samples.xi[0];

  std::vector<Matrix> g(count);
  for (std::size_t j = 0; j < count; ++j) g[j] = samples.phi[j] / Complex(samples.xi[j], -eta);

  const double edge = std::max(max_norm(g.front()), max_norm(g.back()));
  const double xi_max = std::max(std::abs(samples.xi.front()), std::abs(samples.xi.back()));
  // A tail decaying like C / xi^2 beyond the window contributes about edge * Xi / pi.
  const double tail = std::exp(eta * l) * edge * xi_max / std::numbers::pi;
  if (tail > tail_tolerance) {
    std::ostringstream os;
    os << "tail estimate " << tail << " exceeds " << tail_tolerance << " at Xi = " << xi_max;
    fail(ErrorCode::TruncationBudgetExceeded, os.str());
  }

  std::vector<Matrix> s(static_cast<std::size_t>(intervals + 1));
  const double h = l / static_cast<double>(intervals);
  for (Index k = 0; k <= intervals; ++k) {
    const double x = h * static_cast<double>(k);
    Matrix acc = Matrix::Zero(p, p);
    for (std::size_t j = 0; j < count; ++j) {
      const double w = (j == 0 || j + 1 == count) ? 0.5 : 1.0;
      acc += (w * std::exp(kI * (samples.xi[j] * x))) * g[j];
    }
    s[static_cast<std::size_t>(k)] = (kI * dxi * std::exp(eta * x) / (2.0 * std::numbers::pi)) * acc;
  }
  SKernelGrid out = make_kernel_grid(p, l, std::move(s));
  out.tail_estimate = tail;
  return out;
}

SKernelGrid recover_s(const PhiSampler& phi, double bound, double l, Index intervals,
                      const FourierOptions& options) {
  const PhiSamples samples = sample_phi(phi, phi(Complex(0.0, -bound - 1.0)).rows(), bound, l, options);
  return recover_s(samples, l, intervals, options.tail_tolerance);
}

Matrix build_S_operator(const SKernelGrid& kernel, double positivity) {
  require_kernel(kernel);
  const Index p = kernel.p;
  const Index n = kernel.intervals();
  const double h = kernel.step();
  const auto& d = kernel.s_prime;

  // K(x_k, x_m), k >= m, is the trapezoid sum over u = x_0..x_m of
  // s'(x_{k-m} + u) s'(u)*; prefix sums along each diagonal give it in O(N^2).
  Matrix s_hat = Matrix::Identity((n + 1) * p, (n + 1) * p);
  for (Index offset = 0; offset <= n; ++offset) {
    Matrix prefix = Matrix::Zero(p, p);
    for (Index m = 0; m + offset <= n; ++m) {
      const Matrix term = d[offset + m] * d[m].adjoint();
      Matrix value;
      if (m == 0) {
        value = Matrix::Zero(p, p);
      } else {
        value = h * (prefix + 0.5 * term) - 0.5 * h * d[offset] * d[0].adjoint();
      }
      prefix += term;
      const Index k = m + offset;
      const double wk = k == 0 ? 0.5 * h : h;
      const double wm = m == 0 ? 0.5 * h : h;
      const Matrix scaled = std::sqrt(wk * wm) * value;
      block(s_hat, k, m, p) += scaled;
      if (offset > 0) block(s_hat, m, k, p) += scaled.adjoint();
    }
  }
  s_hat = hermitian_part(s_hat);
  posdef_factor(s_hat, positivity);
  return s_hat;
}

ChiGrid recover_chi(const SKernelGrid& kernel, const Matrix& s_operator) {
  require_operator(kernel, s_operator);
  const Index p = kernel.p;
  const Index n = kernel.intervals();
  const double h = kernel.step();
  const Matrix chol = posdef_factor(s_operator);

  ChiGrid out{p, kernel.l, {}};
  Matrix base = Matrix::Zero(p, 2 * p);
  base.rightCols(p).setIdentity();
  out.chi.assign(static_cast<std::size_t>(n + 1), base);
  for (Index k = 1; k <= n; ++k) {
    const Index dim = (k + 1) * p;
    Matrix rhs(dim, p);
    for (Index m = 0; m <= k; ++m) {
      rhs.middleRows(m * p, p) = std::sqrt(m == 0 ? 0.5 * h : h) * kernel.s_prime[m];
    }
    const Matrix y = leading_solve(chol, dim, rhs);
    Matrix integral = Matrix::Zero(p, 2 * p);
    for (Index m = 0; m <= k; ++m) {
      const Matrix f = y.middleRows(m * p, p) / std::sqrt(m == 0 ? 0.5 * h : h);
      Matrix row(p, 2 * p);
      row.leftCols(p).setIdentity();
      row.rightCols(p) = kernel.s[m];
      integral += trapezoid_weight(m, k, h) * f.adjoint() * row;
    }
    out.chi[k] = base - integral;
  }
  return out;
}

PotentialGrid recover_potential_p1(const ChiGrid& chi) {
  if (chi.p != 1) fail(ErrorCode::WrongBlockSize, "potential recovery from chi is implemented for p = 1 only");
  if (chi.chi.size() < 2) fail(ErrorCode::Validation, "chi grid needs at least two nodes");
  std::vector<Matrix> beta;
  beta.reserve(chi.chi.size());
  for (const Matrix& c : chi.chi) {
    if (c.rows() != 1 || c.cols() != 2) fail(ErrorCode::WrongBlockSize, "chi samples must be 1 x 2");
    Matrix b(1, 2);
    b(0, 0) = std::conj(c(0, 1));
    b(0, 1) = -std::conj(c(0, 0));
    beta.push_back(std::move(b));
  }
  const double h = chi.l / static_cast<double>(chi.chi.size() - 1);
  const std::vector<Matrix> beta_prime = differentiate(beta, h);
  PotentialGrid out{1, chi.l, 0.0, {}};
  out.v.reserve(chi.chi.size());
  for (std::size_t k = 0; k < chi.chi.size(); ++k) {
    out.v.push_back(beta_prime[k] * chi.chi[k].adjoint());
    out.bound = std::max(out.bound, spectral_norm(out.v.back()));
  }
  return out;
}

std::vector<Matrix> recover_beta_gram(const SKernelGrid& kernel, const Matrix& s_operator) {
  require_operator(kernel, s_operator);
  const Index p = kernel.p;
  const Index n = kernel.intervals();
  const double h = kernel.step();
  const Matrix chol = posdef_factor(s_operator);

  std::vector<Matrix> rows(static_cast<std::size_t>(n + 1));
  for (Index m = 0; m <= n; ++m) {
    rows[m].resize(p, 2 * p);
    rows[m].leftCols(p).setIdentity();
    rows[m].rightCols(p) = kernel.s[m];
  }
  std::vector<Matrix> gram(static_cast<std::size_t>(n + 1), Matrix::Zero(2 * p, 2 * p));
  for (Index k = 1; k <= n; ++k) {
    const Index dim = (k + 1) * p;
    Matrix rhs(dim, 2 * p);
    for (Index m = 0; m <= k; ++m) rhs.middleRows(m * p, p) = std::sqrt(m == 0 ? 0.5 * h : h) * rows[m];
    const Matrix y = leading_solve(chol, dim, rhs);
    Matrix acc = Matrix::Zero(2 * p, 2 * p);
    for (Index m = 0; m <= k; ++m) {
      const Matrix f = y.middleRows(m * p, p) / std::sqrt(m == 0 ? 0.5 * h : h);
      acc += trapezoid_weight(m, k, h) * rows[m].adjoint() * f;
    }
    gram[k] = hermitian_part(acc);
  }
  return differentiate(gram, h);
}

double relative_l2_error(const PotentialGrid& approx, const PotentialGrid& truth) {
  if (approx.v.size() != truth.v.size() || approx.v.size() < 2) {
    fail(ErrorCode::DimensionMismatch, "potential grids differ in size");
  }
  const Index n = truth.intervals();
  const double h = truth.step();
  double err = 0.0;
  double ref = 0.0;
  for (Index k = 0; k <= n; ++k) {
    const double w = trapezoid_weight(k, n, h);
    err += w * (approx.v[k] - truth.v[k]).squaredNorm();
    ref += w * truth.v[k].squaredNorm();
  }
  return ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
}

}  // namespace skewdirac
