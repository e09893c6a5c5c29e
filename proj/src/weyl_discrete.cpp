#include "skewdirac/weyl_discrete.hpp"

#include <algorithm>
#include <sstream>

#include "skewdirac/error.hpp"

namespace skewdirac {

namespace {

Matrix horner(const std::vector<Matrix>& coeffs, Complex z) {
  if (coeffs.empty()) fail(ErrorCode::Validation, "empty polynomial germ");
  Matrix acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = (acc * z + *it).eval();
  return acc;
}

}  // namespace

Complex z_of_lambda(Complex lambda) {
  if (std::abs(lambda + kI) == 0.0) fail(ErrorCode::PoleInput, "lambda = -i is a pole of z(lambda)");
  return (lambda - kI) / (lambda + kI);
}

Complex lambda_of_z(Complex z) {
  if (std::abs(1.0 - z) == 0.0) fail(ErrorCode::PoleInput, "z = 1 is a pole of lambda(z)");
  return kI * (1.0 + z) / (1.0 - z);
}

WeylTaylorData WeylTaylorData::prefix(Index count) const {
  if (count <= 0 || count > size()) fail(ErrorCode::DimensionMismatch, "prefix length out of range");
  return {p, std::vector<Matrix>(alpha.begin(), alpha.begin() + count)};
}

void require_valid(const WeylTaylorData& data) {
  if (data.p <= 0 || data.alpha.empty()) fail(ErrorCode::Validation, "Taylor data must be nonempty");
  for (Index k = 0; k < data.size(); ++k) {
    const Matrix& a = data[k];
    if (a.rows() != data.p || a.cols() != data.p) {
      fail(ErrorCode::Validation, "alpha_" + std::to_string(k) + " is not p x p");
    }
    if (!a.allFinite()) fail(ErrorCode::Validation, "alpha_" + std::to_string(k) + " has non-finite entries");
  }
}

Matrix AdmissiblePair::r_at_z(Complex z) const { return horner(r, z); }
Matrix AdmissiblePair::q_at_z(Complex z) const { return horner(q, z); }

Matrix weyl_eval(const DiscreteDiracSystem& sys, const AdmissiblePair& pair, Complex lambda) {
  const MobiusBlocks w = calw_blocks(sys, lambda);
  const Complex z = z_of_lambda(lambda);
  return mobius_transform(w, pair.r_at_z(z), pair.q_at_z(z));
}

WeylTaylorData taylor_from_system(const BetaSequence& b) {
  const SNode node = snode_from_system(b);
  const Index p = b.p;
  const Matrix phi2 = node.pi().rightCols(p);
  WeylTaylorData out{p, {}};
  out.alpha.reserve(static_cast<std::size_t>(node.blocks()));
  Matrix previous = Matrix::Zero(p, p);
  for (Index k = 0; k < node.blocks(); ++k) {
    const Matrix psi = phi2.middleRows(k * p, p);
    out.alpha.push_back(previous - psi);
    previous = psi;
  }
  return out;
}

PairAdmissibility check_pair_admissible(const DiscreteDiracSystem& sys, const AdmissiblePair& pair,
                                        double threshold) {
  PairAdmissibility out;
  const MobiusBlocks w = calw_blocks(sys, kI);
  const Matrix den = w.w21 * pair.r_at_z(0.0) + w.w22 * pair.q_at_z(0.0);
  out.determinant = den.determinant();
  out.margin = smallest_singular_value(den) / std::max(1.0, spectral_norm(den));
  out.admissible = out.margin > threshold;
  std::ostringstream os;
  os << "det(W21(i) R(i) + W22(i) Q(i)) = " << out.determinant << ", singular-value margin "
     << out.margin << (out.admissible ? " (admissible)" : " (not admissible)");
  out.diagnostic = os.str();
  return out;
}

}  // namespace skewdirac
