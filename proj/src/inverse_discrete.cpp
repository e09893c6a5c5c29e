#include "skewdirac/inverse_discrete.hpp"

#include <algorithm>
#include <sstream>

#include "skewdirac/error.hpp"

namespace skewdirac {

namespace {

constexpr double kSchurRcond = 1e-14;

struct Spectrum {
  double min_abs;
  double max_abs;
  double min;
  double max;
};

Spectrum hermitian_spectrum(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return {ev.cwiseAbs().minCoeff(), ev.cwiseAbs().maxCoeff(), ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Weyl: return "Weyl";
    case Verdict::Marginal: return "Marginal";
    case Verdict::NotWeyl: return "NotWeyl";
  }
  return "Unknown";
}

StructuredOperators build_structured_operators(const WeylTaylorData& alpha) {
  require_valid(alpha);
  const Index p = alpha.p;
  const Index blocks = alpha.size();
  Matrix pi(blocks * p, 2 * p);
  Matrix partial = Matrix::Zero(p, p);
  for (Index k = 0; k < blocks; ++k) {
    partial += alpha[k];
    pi.block(k * p, 0, p, p).setIdentity();
    pi.block(k * p, p, p, p) = -partial;
  }
  return {displacement_generator(blocks, p), std::move(pi)};
}

Matrix schur_update_inverse(const Matrix& s_prev_inv, const Matrix& s12, const Matrix& s21,
                            const Matrix& s22) {
  const Index m = s_prev_inv.rows();
  const Index p = s22.rows();
  if (s_prev_inv.cols() != m || s22.cols() != p || s12.rows() != m || s12.cols() != p ||
      s21.rows() != p || s21.cols() != m) {
    fail(ErrorCode::DimensionMismatch, "bordering blocks do not match");
  }
  const Matrix left = s21 * s_prev_inv;   // s21 S_prev^{-1}
  const Matrix right = s_prev_inv * s12;  // S_prev^{-1} s12
  const Matrix complement = s22 - s21 * right;
  Eigen::PartialPivLU<Matrix> lu(complement);
  if (!(lu.rcond() > kSchurRcond)) {
    std::ostringstream os;
    os << "Schur complement is singular (rcond " << lu.rcond() << ")";
    fail(ErrorCode::SingularSchurComplement, os.str());
  }
  const Matrix t = lu.inverse();
  Matrix out(m + p, m + p);
  out.topLeftCorner(m, m) = s_prev_inv + right * t * left;
  out.topRightCorner(m, p) = -right * t;
  out.bottomLeftCorner(p, m) = -t * left;
  out.bottomRightCorner(p, p) = t;
  return out;
}

InverseResult solve_inverse(const WeylTaylorData& alpha, const InverseOptions& options) {
  StructuredOperators ops = build_structured_operators(alpha);
  const Index p = alpha.p;
  const Index blocks = alpha.size();
  Matrix s = solve_displacement(ops.a, ops.pi);

  InverseDiagnostics diag;
  const Spectrum spectrum = hermitian_spectrum(s);
  diag.min_eigenvalue = spectrum.min;
  diag.max_eigenvalue = spectrum.max;
  diag.displacement_residual = displacement_residual(ops.a, s, ops.pi);
  diag.margin = spectrum.max_abs > 0.0 ? spectrum.min_abs / spectrum.max_abs : 0.0;
  if (!(diag.margin >= options.invertibility)) {
    std::ostringstream os;
    os << "S is not invertible within tolerance (sigma_min/||S|| = " << diag.margin << ")";
    fail(ErrorCode::NotAWeylFunction, os.str());
  }
  diag.marginal = diag.margin < 10.0 * options.invertibility;

  BetaSequence beta{p, {}};
  beta.beta.reserve(static_cast<std::size_t>(blocks));
  Matrix s_inv(0, 0);
  for (Index r = 0; r < blocks; ++r) {
    const Index prev = r * p;
    try {
      s_inv = schur_update_inverse(s_inv, s.block(0, prev, prev, p), s.block(prev, 0, p, prev),
                                   s.block(prev, prev, p, p));
    } catch (const Error& e) {
      fail(ErrorCode::NotAWeylFunction, "leading block S(" + std::to_string(r) + ") is singular: " + e.what());
    }
    const Matrix last_row = s_inv.bottomRows(p);
    const Matrix t = hermitian_part(last_row.rightCols(p));
    const Matrix projected = last_row * ops.pi.topRows(prev + p);
    // projected projected* equals t exactly; normalizing by the computed Gram
    // keeps the row coisometric to rounding, and the gap to t measures the
    // accuracy lost to the conditioning of S(r).
    Matrix row;
    try {
      const Matrix raw = hermitian_inv_sqrt(t) * projected;
      diag.coisometry_defect =
          std::max(diag.coisometry_defect, max_norm(raw * raw.adjoint() - Matrix::Identity(p, p)));
      row = hermitian_inv_sqrt(hermitian_part(projected * projected.adjoint())) * projected;
    } catch (const Error& e) {
      fail(ErrorCode::IllConditioned, "trailing block of S(" + std::to_string(r) + ")^{-1}: " + e.what());
    }
    beta.beta.push_back(std::move(row));
    const Spectrum leading = hermitian_spectrum(s.topLeftCorner(prev + p, prev + p));
    diag.condition_numbers.push_back(leading.max_abs / leading.min_abs);
  }

  if (diag.coisometry_defect > options.coisometry) {
    std::ostringstream os;
    os << "rows normalized by the trailing block of S(r)^{-1} violate beta beta* = I by "
       << diag.coisometry_defect;
    fail(ErrorCode::IllConditioned, os.str());
  }
  const ValidationTolerances& post = options.validation;
  if (auto v = find_violation(beta, post)) {
    fail(ErrorCode::IllConditioned, "recovered rows fail " + std::string(to_string(v->condition)) +
                                        ": " + v->describe());
  }

  DiscreteDiracSystem system = system_from_beta(beta, post);
  SNode node(p, std::move(ops.a), std::move(s), std::move(ops.pi));
  return {std::move(system), std::move(beta), std::move(node), std::move(diag)};
}

Classification classify_admissible(const WeylTaylorData& alpha, double threshold) {
  const StructuredOperators ops = build_structured_operators(alpha);
  const Matrix s = solve_displacement(ops.a, ops.pi);
  const Spectrum spectrum = hermitian_spectrum(s);
  Classification out;
  out.margin = spectrum.max_abs > 0.0 ? spectrum.min_abs / spectrum.max_abs : 0.0;
  if (!(out.margin >= threshold)) {
    out.verdict = Verdict::NotWeyl;
  } else if (out.margin < 10.0 * threshold) {
    out.verdict = Verdict::Marginal;
  } else {
    out.verdict = Verdict::Weyl;
  }
  return out;
}

BorgMarchenkoReport borg_marchenko_check(const WeylTaylorData& first, const WeylTaylorData& second,
                                         Index l, double alpha_tol, double c_tol) {
  require_valid(first);
  require_valid(second);
  if (first.p != second.p) fail(ErrorCode::DimensionMismatch, "Taylor data differ in block size");
  if (l < 0 || first.size() <= l || second.size() <= l) {
    fail(ErrorCode::DimensionMismatch, "both Taylor sequences need more than l coefficients");
  }
  BorgMarchenkoReport report;
  report.l = l;
  for (Index k = 0; k <= l; ++k) {
    const double dev = max_norm(first[k] - second[k]);
    report.max_alpha_deviation = std::max(report.max_alpha_deviation, dev);
    if (dev > alpha_tol && !report.first_disagreement) report.first_disagreement = k;
  }
  report.coefficients_agree = !report.first_disagreement.has_value();
  if (!report.coefficients_agree) return report;

  const InverseResult a = solve_inverse(first.prefix(l + 1));
  const InverseResult b = solve_inverse(second.prefix(l + 1));
  double dev = 0.0;
  for (Index k = 0; k <= l; ++k) dev = std::max(dev, max_norm(a.system[k] - b.system[k]));
  report.max_c_deviation = dev;
  report.prefixes_agree = dev <= c_tol;
  return report;
}

}  // namespace skewdirac
