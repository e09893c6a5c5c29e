#include "skewdirac/discrete_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewdirac/error.hpp"

namespace skewdirac {

namespace {

constexpr double kEigenvalueSlack = 1e-8;

Matrix stack_rows(const std::vector<Matrix>& rows, Index count, Index p) {
  Matrix out(count * p, 2 * p);
  for (Index k = 0; k < count; ++k) out.middleRows(k * p, p) = rows[static_cast<std::size_t>(k)];
  return out;
}

double relative(double residual, double scale) { return residual / std::max(1.0, scale); }

}  // namespace

std::string_view to_string(BetaCondition c) noexcept {
  switch (c) {
    case BetaCondition::Shape: return "shape";
    case BetaCondition::Coisometry: return "coisometry";
    case BetaCondition::LeadingBlock: return "leading-block-nondegeneracy";
    case BetaCondition::AdjacentOverlap: return "adjacent-overlap-nondegeneracy";
  }
  return "unknown";
}

std::string BetaViolation::describe() const {
  std::ostringstream os;
  switch (condition) {
    case BetaCondition::Shape:
      os << "beta(" << k << ") does not have shape p x 2p";
      break;
    case BetaCondition::Coisometry:
      os << "beta(" << k << ") beta(" << k << ")* differs from I_p by " << value;
      break;
    case BetaCondition::LeadingBlock:
      os << "|det beta_1(0)| = " << value << " is below the nondegeneracy threshold";
      break;
    case BetaCondition::AdjacentOverlap:
      os << "|det beta(" << k - 1 << ") beta(" << k << ")*| = " << value
         << " is below the nondegeneracy threshold";
      break;
  }
  return os.str();
}

Matrix BetaSequence::stacked(Index r) const { return stack_rows(beta, r + 1, p); }

std::optional<BetaViolation> find_violation(const BetaSequence& b, const ValidationTolerances& tol) {
  if (b.p <= 0 || b.beta.empty()) return BetaViolation{BetaCondition::Shape, 0, 0.0};
  const Index p = b.p;
  for (Index k = 0; k < b.size(); ++k) {
    const Matrix& row = b[k];
    if (row.rows() != p || row.cols() != 2 * p || !row.allFinite()) {
      return BetaViolation{BetaCondition::Shape, k, 0.0};
    }
    const double defect = max_norm(row * row.adjoint() - Matrix::Identity(p, p));
    if (defect > tol.unit) return BetaViolation{BetaCondition::Coisometry, k, defect};
  }
  const double lead = std::abs(b[0].leftCols(p).determinant());
  if (!(lead >= tol.determinant)) return BetaViolation{BetaCondition::LeadingBlock, 0, lead};
  for (Index k = 1; k < b.size(); ++k) {
    const double overlap = std::abs((b[k - 1] * b[k].adjoint()).determinant());
    if (!(overlap >= tol.determinant)) return BetaViolation{BetaCondition::AdjacentOverlap, k, overlap};
  }
  return std::nullopt;
}

void require_valid(const BetaSequence& b, const ValidationTolerances& tol) {
  if (auto v = find_violation(b, tol)) {
    fail(ErrorCode::InvalidBeta, std::string(to_string(v->condition)) + ": " + v->describe());
  }
}

void require_valid(const DiscreteDiracSystem& sys, const ValidationTolerances& tol) {
  if (sys.p <= 0 || sys.c.empty()) fail(ErrorCode::InvalidSystem, "system has no coefficients");
  const Index m = 2 * sys.p;
  for (Index k = 0; k < sys.size(); ++k) {
    const Matrix& c = sys[k];
    std::ostringstream where;
    where << "C_" << k;
    if (c.rows() != m || c.cols() != m || !c.allFinite()) {
      fail(ErrorCode::InvalidSystem, where.str() + " does not have shape 2p x 2p");
    }
    if (!is_hermitian(c, tol.unit)) fail(ErrorCode::InvalidSystem, where.str() + " is not Hermitian");
    if (max_norm(c * c - Matrix::Identity(m, m)) > tol.unit) {
      fail(ErrorCode::InvalidSystem, where.str() + " is not an involution");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(c), Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const auto plus = (ev.array() - 1.0).abs() <= kEigenvalueSlack;
    const auto minus = (ev.array() + 1.0).abs() <= kEigenvalueSlack;
    if (plus.count() != sys.p || minus.count() != sys.p) {
      fail(ErrorCode::InvalidSystem,
           where.str() + " must have p eigenvalues at +1 and p at -1");
    }
  }
}

DiscreteDiracSystem system_from_beta(const BetaSequence& b, const ValidationTolerances& tol) {
  require_valid(b, tol);
  DiscreteDiracSystem sys{b.p, {}};
  sys.c.reserve(b.beta.size());
  const Matrix id = Matrix::Identity(2 * b.p, 2 * b.p);
  for (const Matrix& row : b.beta) sys.c.push_back(id - 2.0 * row.adjoint() * row);
  return sys;
}

UnitaryRows beta_from_unitary(const std::vector<Matrix>& u, double tol) {
  if (u.empty()) fail(ErrorCode::DimensionMismatch, "no unitary matrices supplied");
  const Index m = u.front().rows();
  if (m % 2 != 0) fail(ErrorCode::DimensionMismatch, "unitary factors must be 2p x 2p");
  const Index p = m / 2;
  UnitaryRows out{{p, {}}, {p, {}}};
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Matrix& uk = u[k];
    if (uk.rows() != m || uk.cols() != m) fail(ErrorCode::DimensionMismatch, "unitary factors differ in size");
    if (max_norm(uk * uk.adjoint() - Matrix::Identity(m, m)) > tol) {
      fail(ErrorCode::NotUnitary, "U(" + std::to_string(k) + ") is not unitary");
    }
    const Matrix ustar = uk.adjoint();
    out.beta.beta.push_back(ustar.bottomRows(p));
    out.chi.chi.push_back(ustar.topRows(p));
  }
  return out;
}

BetaSequence canonical_gauge(const BetaSequence& b) {
  require_valid(b);
  const Index p = b.p;
  BetaSequence out{p, {}};
  out.beta.reserve(b.beta.size());
  Matrix v = b[0].leftCols(p);
  for (Index k = 0; k < b.size(); ++k) {
    if (k > 0) v = b[k] * b[k - 1].adjoint() * v;
    const Matrix polar = hermitian_inv_sqrt(v.adjoint() * v) * v.adjoint();
    out.beta.push_back(polar * b[k]);
  }
  return out;
}

BetaSequence beta_from_system(const DiscreteDiracSystem& sys, const ValidationTolerances& tol) {
  require_valid(sys, tol);
  const Index p = sys.p;
  BetaSequence raw{p, {}};
  const Matrix id = Matrix::Identity(2 * p, 2 * p);
  for (const Matrix& c : sys.c) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part((id - c) / 2.0));
    // eigenvalues ascending: the projector's range is spanned by the last p vectors
    raw.beta.push_back(eig.eigenvectors().rightCols(p).adjoint());
  }
  require_valid(raw, tol);
  return canonical_gauge(raw);
}

Matrix fundamental_solution(const DiscreteDiracSystem& sys, Complex lambda) {
  if (lambda == Complex{0.0, 0.0}) fail(ErrorCode::LambdaZero, "fundamental solution is singular at lambda = 0");
  const Index m = 2 * sys.p;
  const Matrix id = Matrix::Identity(m, m);
  Matrix w = id;
  const Complex step = kI / lambda;
  for (const Matrix& c : sys.c) w = (id - step * c) * w;
  return w;
}

MobiusBlocks calw_blocks(const DiscreteDiracSystem& sys, Complex lambda) {
  return MobiusBlocks::split(fundamental_solution(sys, std::conj(lambda)).adjoint());
}

SNode::SNode(Index p, Matrix a, Matrix s, Matrix pi, std::optional<Matrix> similarity,
             std::optional<Matrix> rows)
    : p_(p),
      a_(std::move(a)),
      s_(std::move(s)),
      pi_(std::move(pi)),
      similarity_(std::move(similarity)),
      rows_(std::move(rows)) {
  if (p_ <= 0 || s_.rows() != s_.cols() || s_.rows() % p_ != 0 || a_.rows() != s_.rows() ||
      a_.cols() != s_.cols() || pi_.rows() != s_.rows() || pi_.cols() != 2 * p_ ||
      (rows_ && (rows_->rows() != s_.rows() || rows_->cols() != 2 * p_))) {
    fail(ErrorCode::DimensionMismatch, "inconsistent S-node dimensions");
  }
}

Matrix SNode::a(Index r) const { return a_.topLeftCorner((r + 1) * p_, (r + 1) * p_); }
Matrix SNode::s(Index r) const { return s_.topLeftCorner((r + 1) * p_, (r + 1) * p_); }
Matrix SNode::pi(Index r) const { return pi_.topRows((r + 1) * p_); }

double SNode::residual(Index r) const { return displacement_residual(a(r), s(r), pi(r)); }

SNode snode_from_system(const BetaSequence& b, const ValidationTolerances& tol) {
  require_valid(b, tol);
  const Index p = b.p;
  const Index blocks = b.size();
  const Index dim = blocks * p;
  const Matrix bmat = b.stacked();

  // Row k of V A = K V reads, for m < k,
  //   sum_{j=m+1}^{k} V_kj = beta(k) sum_{j=m}^{k-1} beta(j)* V_jm =: T_m,
  // so V_km = T_{m-1} - T_m; the free block V_k0 makes the row sum beta_1(k).
  Matrix v = Matrix::Zero(dim, dim);
  block(v, 0, 0, p) = b[0].leftCols(p);
  for (Index k = 1; k < blocks; ++k) {
    const Index prev = k * p;
    const Matrix t = b[k] * bmat.topRows(prev).adjoint() * v.topLeftCorner(prev, prev);
    block(v, k, k, p) = t.rightCols(p);
    for (Index m = 1; m < k; ++m) block(v, k, m, p) = t.middleCols((m - 1) * p, p) - t.middleCols(m * p, p);
    block(v, k, 0, p) = b[k].leftCols(p) - t.leftCols(p);
  }

  // Block forward substitution; the diagonal blocks v_k are full p x p.
  Matrix v_inv = Matrix::Zero(dim, dim);
  for (Index k = 0; k < blocks; ++k) {
    Eigen::PartialPivLU<Matrix> diag(block(v, k, k, p));
    Matrix rhs = Matrix::Zero(p, dim);
    rhs.middleCols(k * p, p).setIdentity();
    rhs -= v.block(k * p, 0, p, k * p) * v_inv.topRows(k * p);
    v_inv.middleRows(k * p, p) = diag.solve(rhs);
  }
  if (!v_inv.allFinite()) fail(ErrorCode::NumericBreakdown, "V_- is not invertible");
  Matrix s = hermitian_part(v_inv * v_inv.adjoint());
  Matrix pi = v_inv * bmat;
  return SNode(p, displacement_generator(blocks, p), std::move(s), std::move(pi), std::move(v), bmat);
}

Matrix assemble_k(const BetaSequence& b, Index r) {
  const Index p = b.p;
  Matrix k_mat = Matrix::Zero((r + 1) * p, (r + 1) * p);
  for (Index j = 0; j <= r; ++j) {
    for (Index m = 0; m < j; ++m) block(k_mat, j, m, p) = kI * b[j] * b[m].adjoint();
    block(k_mat, j, j, p) = (kI / 2.0) * b[j] * b[j].adjoint();
  }
  return k_mat;
}

Matrix transfer_matrix(const SNode& node, Index r, Complex lambda) {
  if (r < 0 || r > node.n()) fail(ErrorCode::DimensionMismatch, "truncation index out of range");
  const Complex pole = kI / 2.0;
  if (std::abs(lambda - pole) <= 1e-14 * std::max(1.0, std::abs(lambda))) {
    fail(ErrorCode::ResolventSingular, "lambda coincides with the spectrum {i/2} of A");
  }
  const Index dim = (r + 1) * node.p();
  const Matrix id = Matrix::Identity(2 * node.p(), 2 * node.p());
  if (node.rows()) {
    // The diagonal blocks of K(r) are (i/2) beta(j) beta(j)* = (i/2) I, so
    // K(r) is triangular entrywise.
    const Matrix rows = node.rows()->topRows(dim);
    Matrix k_mat = kI * rows * rows.adjoint();
    k_mat.triangularView<Eigen::StrictlyUpper>().setZero();
    for (Index j = 0; j <= r; ++j) block(k_mat, j, j, node.p()) = pole * Matrix::Identity(node.p(), node.p());
    k_mat -= lambda * Matrix::Identity(dim, dim);
    return id - kI * rows.adjoint() * k_mat.triangularView<Eigen::Lower>().solve(rows);
  }
  const Matrix pi = node.pi(r);
  const Matrix shifted = node.a(r) - lambda * Matrix::Identity(dim, dim);
  const Matrix resolvent_pi = shifted.triangularView<Eigen::Lower>().solve(pi);
  const Matrix z = node.s(r).llt().solve(resolvent_pi);
  return id - kI * pi.adjoint() * z;
}

double SystemIdentityReport::max() const {
  return std::max({energy, representation, factorization, j_form});
}

SystemIdentityReport verify_system_identities(const BetaSequence& b,
                                              const std::vector<Complex>& lambdas) {
  const DiscreteDiracSystem sys = system_from_beta(b);
  const SNode node = snode_from_system(b);
  const Index p = b.p;
  const Index n = b.n();
  const Matrix id = Matrix::Identity(2 * p, 2 * p);
  SystemIdentityReport report;

  for (std::size_t idx = 0; idx < lambdas.size(); ++idx) {
    const Complex lambda = lambdas[idx];
    if (lambda == Complex{0.0, 0.0} || std::abs(lambda - kI) < 1e-12) continue;

    const Matrix w = fundamental_solution(sys, lambda);
    const Matrix w_bar = fundamental_solution(sys, std::conj(lambda));
    const Complex scalar = std::pow((lambda * lambda + 1.0) / (lambda * lambda), static_cast<double>(n + 1));
    report.energy = std::max(report.energy,
                             relative(max_norm(w * w_bar.adjoint() - scalar * id),
                                      max_norm(w) * max_norm(w_bar)));

    const Complex half = lambda / 2.0;
    const Complex prefactor = std::pow((lambda - kI) / lambda, static_cast<double>(n + 1));
    const Matrix wa_n = transfer_matrix(node, n, half);
    report.representation =
        std::max(report.representation, relative(max_norm(w - prefactor * wa_n), max_norm(w)));

    const Complex coeff = 2.0 * kI / (kI - lambda);
    Matrix previous = id;
    for (Index r = 0; r <= n; ++r) {
      const Matrix current = transfer_matrix(node, r, half);
      const Matrix step = id - coeff * b[r].adjoint() * b[r];
      const Matrix predicted = step * previous;
      report.factorization = std::max(
          report.factorization,
          relative(max_norm(current - predicted), max_norm(step) * max_norm(previous)));
      previous = current;
    }

    const Complex mu = lambdas[(idx + 1) % lambdas.size()];
    if (std::abs(mu - kI / 2.0) < 1e-12) continue;
    const Index dim = node.s().rows();
    const Matrix wa_mu = transfer_matrix(node, n, mu);
    const Matrix wa_lambda = transfer_matrix(node, n, lambda);
    // Pi* (A* - conj(mu) I)^{-1} is the adjoint of (A - mu I)^{-1} Pi.
    const Matrix left = (node.a() - mu * Matrix::Identity(dim, dim))
                            .triangularView<Eigen::Lower>()
                            .solve(node.pi());
    const Matrix right = (node.a() - lambda * Matrix::Identity(dim, dim))
                             .triangularView<Eigen::Lower>()
                             .solve(node.pi());
    const Matrix lhs = wa_mu.adjoint() * wa_lambda;
    const Matrix rhs =
        id + kI * (std::conj(mu) - lambda) * left.adjoint() * node.s().llt().solve(right);
    report.j_form = std::max(report.j_form, relative(max_norm(lhs - rhs),
                                                     max_norm(wa_mu) * max_norm(wa_lambda)));
  }
  return report;
}

SystemIdentityReport verify_system_identities(const DiscreteDiracSystem& sys,
                                              const std::vector<Complex>& lambdas) {
  return verify_system_identities(beta_from_system(sys), lambdas);
}

}  // namespace skewdirac
