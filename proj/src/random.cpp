#include "skewdirac/random.hpp"

#include <cmath>

#include "skewdirac/error.hpp"

namespace skewdirac {

namespace {

constexpr int kMaxResamples = 10000;

Matrix random_row(Rng& rng, Index p) {
  return random_unitary(rng, 2 * p).adjoint().bottomRows(p);
}

}  // namespace

Matrix random_gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

Matrix random_unitary(Rng& rng, Index m) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(rng, m, m));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < m; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

BetaSequence extend_beta_sequence(Rng& rng, const BetaSequence& b, Index extra, double margin) {
  BetaSequence out = b;
  const Index p = b.p;
  for (Index added = 0; added < extra; ++added) {
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxResamples && !accepted; ++attempt) {
      Matrix row = random_row(rng, p);
      if (out.beta.empty()) {
        accepted = std::abs(row.leftCols(p).determinant()) >= margin;
      } else {
        accepted = std::abs((out.beta.back() * row.adjoint()).determinant()) >= margin;
      }
      if (accepted) out.beta.push_back(std::move(row));
    }
    if (!accepted) fail(ErrorCode::NumericBreakdown, "could not sample a nondegenerate beta row");
  }
  return out;
}

BetaSequence random_beta_sequence(Rng& rng, Index n, Index p, double margin) {
  return extend_beta_sequence(rng, BetaSequence{p, {}}, n + 1, margin);
}

}  // namespace skewdirac
