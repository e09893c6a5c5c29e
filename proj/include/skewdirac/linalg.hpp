#pragma once

// Dense complex block-matrix kernel: Hermitian checks, Cholesky-type
// factorization, inverse square roots, the structured displacement solver
// and matrix linear-fractional (Moebius) maps.

#include <complex>

#include <Eigen/Dense>

namespace skewdirac {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Relative pivot threshold used by posdef_factor.
inline constexpr double kDefaultPositivityTol = 1e-10;

/// Partition of a matrix into p x p blocks.
struct BlockStructure {
  Index block_size = 1;
  Index block_rows = 0;
  Index block_cols = 0;

  /// Throws DimensionMismatch unless both dimensions are multiples of p.
  static BlockStructure of(const Matrix& m, Index p);

  Index rows() const { return block_rows * block_size; }
  Index cols() const { return block_cols * block_size; }
};

inline auto block(Matrix& m, Index i, Index j, Index p) {
  return m.block(i * p, j * p, p, p);
}
inline auto block(const Matrix& m, Index i, Index j, Index p) {
  return m.block(i * p, j * p, p, p);
}

/// Largest absolute entry.
double max_norm(const Matrix& m);

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& m);

double smallest_singular_value(const Matrix& m);

/// Ratio of extreme singular values; +inf for singular input.
double condition_number(const Matrix& m);

/// True iff max|M - M*| <= tol. Throws NonSquare.
bool is_hermitian(const Matrix& m, double tol);

/// (M + M*) / 2.
Matrix hermitian_part(const Matrix& m);

/// Lower-triangular L with L L* = M. Pivots at or below tol * max|M| raise
/// NotPositive; input that is not Hermitian within tol * max(1, max|M|)
/// raises NotHermitian.
Matrix posdef_factor(const Matrix& m, double tol = kDefaultPositivityTol);

/// Principal inverse square root of a Hermitian positive-definite matrix:
/// the Hermitian positive-definite R with R M R = I.
Matrix hermitian_inv_sqrt(const Matrix& m);

/// The (n+1)p x (n+1)p block lower-triangular Toeplitz generator with
/// (i/2) I_p on the diagonal and i I_p strictly below it.
Matrix displacement_generator(Index blocks, Index p);

/// Unique solution S of A S - S A* = i Pi Pi* for the structured generator
/// A = displacement_generator(n+1, p), with p = Pi.cols() / 2.
///
/// Block entries follow from
///   S_kj = G_kj - sum_{m<k} S_mj - sum_{m<j} S_km,   G = Pi Pi*,
/// evaluated row by row with running column sums, so the cost is
/// O((n+1)^2 p^3). The result is symmetrized before returning.
Matrix solve_displacement(const Matrix& a, const Matrix& pi);

/// || A S - S A* - i Pi Pi* || in max norm.
double displacement_residual(const Matrix& a, const Matrix& s, const Matrix& pi);

/// The four p x p blocks of a 2p x 2p coefficient matrix.
struct MobiusBlocks {
  Matrix w11, w12, w21, w22;

  static MobiusBlocks split(const Matrix& w);
  Matrix assemble() const;
};

/// (W11 R + W12 Q)(W21 R + W22 Q)^{-1}. Raises SingularDenominator when the
/// denominator's reciprocal condition estimate falls below 1e-13.
Matrix mobius_transform(const Matrix& w11, const Matrix& w12, const Matrix& w21,
                        const Matrix& w22, const Matrix& r, const Matrix& q);

inline Matrix mobius_transform(const MobiusBlocks& w, const Matrix& r,
                               const Matrix& q) {
  return mobius_transform(w.w11, w.w12, w.w21, w.w22, r, q);
}

}  // namespace skewdirac
