#include "skewdirac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "skewdirac/error.hpp"

namespace skewdirac {

namespace {

constexpr double kSingularRcond = 1e-13;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " expects a square matrix, got " << m.rows() << "x" << m.cols();
    fail(ErrorCode::NonSquare, os.str());
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorCode::NumericBreakdown, std::string(what) + " produced non-finite entries");
}

}  // namespace

BlockStructure BlockStructure::of(const Matrix& m, Index p) {
  if (p <= 0 || m.rows() % p != 0 || m.cols() % p != 0) {
    std::ostringstream os;
    os << "matrix " << m.rows() << "x" << m.cols() << " is not partitioned by block size " << p;
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  return {p, m.rows() / p, m.cols() / p};
}

double max_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

bool is_hermitian(const Matrix& m, double tol) {
  require_square(m, "is_hermitian");
  return max_norm(m - m.adjoint()) <= tol;
}

Matrix hermitian_part(const Matrix& m) {
  require_square(m, "hermitian_part");
  return (m + m.adjoint()) / 2.0;
}

Matrix posdef_factor(const Matrix& m, double tol) {
  require_square(m, "posdef_factor");
  const double scale = max_norm(m);
  if (!is_hermitian(m, tol * std::max(1.0, scale))) {
    fail(ErrorCode::NotHermitian, "posdef_factor input is not Hermitian");
  }
  const Index n = m.rows();
  Matrix l = Matrix::Zero(n, n);
  const double cutoff = tol * scale;
  for (Index j = 0; j < n; ++j) {
    double pivot = m(j, j).real();
    for (Index k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
    if (!(pivot > cutoff)) {
      std::ostringstream os;
      os << "pivot " << pivot << " at index " << j << " is not above " << cutoff;
      fail(ErrorCode::NotPositive, os.str());
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Index i = j + 1; i < n; ++i) {
      Complex acc = m(i, j);
      for (Index k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / d;
    }
  }
  return l;
}

Matrix hermitian_inv_sqrt(const Matrix& m) {
  require_square(m, "hermitian_inv_sqrt");
  const Matrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) fail(ErrorCode::NumericBreakdown, "eigendecomposition failed");
  const auto& values = eig.eigenvalues();
  const double largest = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    if (!(values(i) > largest * 1e-15) || !(values(i) > 0.0)) {
      std::ostringstream os;
      os << "eigenvalue " << values(i) << " is not positive";
      fail(ErrorCode::NotPositive, os.str());
    }
  }
  const Eigen::VectorXd inv_root = values.array().rsqrt();
  Matrix r = eig.eigenvectors() * inv_root.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return hermitian_part(r);
}

Matrix displacement_generator(Index blocks, Index p) {
  const Index dim = blocks * p;
  Matrix a = Matrix::Zero(dim, dim);
  for (Index k = 0; k < blocks; ++k) {
    block(a, k, k, p) = (kI / 2.0) * Matrix::Identity(p, p);
    for (Index j = 0; j < k; ++j) block(a, k, j, p) = kI * Matrix::Identity(p, p);
  }
  return a;
}

Matrix solve_displacement(const Matrix& a, const Matrix& pi) {
  require_square(a, "solve_displacement");
  if (pi.cols() == 0 || pi.cols() % 2 != 0) {
    fail(ErrorCode::DimensionMismatch, "Pi must have 2p columns");
  }
  const Index p = pi.cols() / 2;
  if (a.rows() != pi.rows() || pi.rows() % p != 0) {
    std::ostringstream os;
    os << "A is " << a.rows() << "x" << a.cols() << " but Pi is " << pi.rows() << "x" << pi.cols();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  const Index blocks = pi.rows() / p;
  if (max_norm(a - displacement_generator(blocks, p)) > 1e-12) {
    fail(ErrorCode::UnsupportedGenerator,
         "A is not the block lower-triangular generator diag(i/2), lower i");
  }

  const Matrix g = pi * pi.adjoint();
  Matrix s(pi.rows(), pi.rows());
  // col_sums.block(j) accumulates sum_{m<k} S_mj over the rows already done.
  Matrix col_sums = Matrix::Zero(p, pi.rows());
  for (Index k = 0; k < blocks; ++k) {
    Matrix row_sum = Matrix::Zero(p, p);
    for (Index j = 0; j < blocks; ++j) {
      Matrix skj = block(g, k, j, p) - col_sums.block(0, j * p, p, p) - row_sum;
      row_sum += skj;
      block(s, k, j, p) = skj;
    }
    for (Index j = 0; j < blocks; ++j) col_sums.block(0, j * p, p, p) += block(s, k, j, p);
  }
  s = hermitian_part(s);
  require_finite(s, "solve_displacement");
  return s;
}

double displacement_residual(const Matrix& a, const Matrix& s, const Matrix& pi) {
  return max_norm(a * s - s * a.adjoint() - kI * pi * pi.adjoint());
}

MobiusBlocks MobiusBlocks::split(const Matrix& w) {
  require_square(w, "MobiusBlocks::split");
  if (w.rows() % 2 != 0) fail(ErrorCode::DimensionMismatch, "coefficient matrix must be 2p x 2p");
  const Index p = w.rows() / 2;
  return {w.topLeftCorner(p, p), w.topRightCorner(p, p), w.bottomLeftCorner(p, p),
          w.bottomRightCorner(p, p)};
}

Matrix MobiusBlocks::assemble() const {
  const Index p = w11.rows();
  Matrix w(2 * p, 2 * p);
  w << w11, w12, w21, w22;
  return w;
}

Matrix mobius_transform(const Matrix& w11, const Matrix& w12, const Matrix& w21,
                        const Matrix& w22, const Matrix& r, const Matrix& q) {
  const Index p = w11.rows();
  for (const Matrix* m : {&w11, &w12, &w21, &w22, &r, &q}) {
    if (m->rows() != p || m->cols() != p) {
      fail(ErrorCode::DimensionMismatch, "mobius_transform expects p x p blocks");
    }
  }
  const Matrix num = w11 * r + w12 * q;
  const Matrix den = w21 * r + w22 * q;
  Eigen::PartialPivLU<Matrix> lu(den);
  const double rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    std::ostringstream os;
    os << "denominator W21 R + W22 Q is singular (rcond " << rcond << ")";
    fail(ErrorCode::SingularDenominator, os.str());
  }
  const Matrix out = num * lu.inverse();
  require_finite(out, "mobius_transform");
  return out;
}

}  // namespace skewdirac
