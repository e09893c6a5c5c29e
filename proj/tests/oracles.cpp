#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracle {

using skewdirac::kI;

Matrix small_j(Index p) {
  Matrix j = Matrix::Zero(2 * p, 2 * p);
  j.topLeftCorner(p, p).setIdentity();
  j.bottomRightCorner(p, p) = -Matrix::Identity(p, p);
  return j;
}

Matrix big_j(Index p) {
  Matrix j = Matrix::Zero(2 * p, 2 * p);
  j.topRightCorner(p, p).setIdentity();
  j.bottomLeftCorner(p, p).setIdentity();
  return j;
}

Matrix dense_displacement_solve(const Matrix& a, const Matrix& pi) {
  const Index m = a.rows();
  const Matrix id = Matrix::Identity(m, m);
  Matrix op(m * m, m * m);
  // vec(A S) = (I (x) A) vec S, vec(S A*) = (conj(A) (x) I) vec S.
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      op.block(i * m, j * m, m, m) = id(i, j) * a - std::conj(a(i, j)) * id;
    }
  }
  const Matrix rhs = kI * pi * pi.adjoint();
  const Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(rhs.data(), m * m);
  const Eigen::VectorXcd sol = op.partialPivLu().solve(vec);
  return Eigen::Map<const Matrix>(sol.data(), m, m);
}

std::vector<Matrix> circle_taylor(const std::function<Matrix(Complex)>& f, Index count,
                                  double radius, Index points) {
  std::vector<Matrix> samples;
  for (Index j = 0; j < points; ++j) {
    samples.push_back(f(radius * std::exp(2.0 * std::numbers::pi * kI * static_cast<double>(j) /
                                          static_cast<double>(points))));
  }
  std::vector<Matrix> out;
  for (Index k = 0; k < count; ++k) {
    Matrix acc = Matrix::Zero(samples[0].rows(), samples[0].cols());
    for (Index j = 0; j < points; ++j) {
      acc += std::exp(-2.0 * std::numbers::pi * kI * static_cast<double>(j * k) /
                      static_cast<double>(points)) *
             samples[static_cast<std::size_t>(j)];
    }
    out.push_back(acc / (static_cast<double>(points) * std::pow(radius, static_cast<double>(k))));
  }
  return out;
}

Matrix product_fundamental(const std::vector<Matrix>& c, Complex lambda) {
  const Index m = c.front().rows();
  Matrix w = Matrix::Identity(m, m);
  for (const Matrix& ck : c) w = (Matrix::Identity(m, m) - (kI / lambda) * ck) * w;
  return w;
}

skewdirac::DiscreteDiracSystem example_system() {
  return {1, {-small_j(1), big_j(1)}};
}

skewdirac::BetaSequence example_beta() {
  Matrix b0(1, 2), b1(1, 2);
  b0 << 1.0, 0.0;
  b1 << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return {1, {b0, b1}};
}

Matrix example_calw(Complex lambda) {
  const Matrix j = small_j(1);
  const Matrix big = big_j(1);
  return Matrix::Identity(2, 2) - (kI / lambda) * (j - big) - (big * j) / (lambda * lambda);
}

Matrix constant_potential_solution(const Matrix& v, Complex lambda, double l) {
  const Index p = v.rows();
  Matrix g = Matrix::Zero(2 * p, 2 * p);
  g.topRightCorner(p, p) = v;
  g.bottomLeftCorner(p, p) = v.adjoint();
  g = kI * lambda * small_j(p) + small_j(p) * g;
  Eigen::ComplexEigenSolver<Matrix> eig(g);
  const Matrix vecs = eig.eigenvectors();
  Eigen::VectorXcd ex = (l * eig.eigenvalues().array()).exp();
  return vecs * ex.asDiagonal() * vecs.inverse();
}

Matrix s_kernel_double_integral(const std::function<Matrix(double)>& s_prime, double x, double t,
                                Index panels) {
  const double lo = std::abs(x - t);
  const double hi = x + t;
  const Index p = s_prime(0.0).rows();
  if (hi - lo <= 0.0) return Matrix::Zero(p, p);
  const double h = (hi - lo) / static_cast<double>(panels);
  Matrix acc = Matrix::Zero(p, p);
  for (Index k = 0; k <= panels; ++k) {
    const double r = lo + h * static_cast<double>(k);
    const double w = (k == 0 || k == panels) ? 0.5 : 1.0;
    acc += w * s_prime((r + x - t) / 2.0) * s_prime((r + t - x) / 2.0).adjoint();
  }
  return 0.5 * h * acc;
}

std::vector<Complex> random_lambdas(skewdirac::Rng& rng, Index count) {
  std::uniform_real_distribution<double> mag(0.5, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> out;
  while (static_cast<Index>(out.size()) < count) {
    const Complex z = std::polar(mag(rng), angle(rng));
    if (std::abs(z.real()) < 0.05 || std::abs(z - Complex(0.0, 0.5)) < 0.05 ||
        std::abs(z - kI) < 0.05 || std::abs(z + kI) < 0.05) {
      continue;
    }
    out.push_back(z);
  }
  return out;
}

Shape random_shape(skewdirac::Rng& rng, Index max_n, Index max_p, Index max_dim) {
  std::uniform_int_distribution<Index> pd(1, max_p);
  while (true) {
    const Index p = pd(rng);
    std::uniform_int_distribution<Index> nd(0, max_n);
    const Index n = nd(rng);
    if ((n + 1) * p <= max_dim) return {n, p};
  }
}

}  // namespace oracle
