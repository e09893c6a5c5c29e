#pragma once

// Discrete skew-self-adjoint Dirac systems
//
//   W_{k+1}(lambda) = (I - (i/lambda) C_k) W_k(lambda),   W_0 = I_{2p},
//
// with C_k = I - 2 beta(k)* beta(k) and coisometric p x 2p rows beta(k).
// This header covers the system representations, fundamental solutions,
// the S-node built from a beta sequence and the transfer matrix function.

#include <optional>
#include <string>
#include <vector>

#include "skewdirac/linalg.hpp"

namespace skewdirac {

/// Tolerances used to validate beta sequences and systems.
struct ValidationTolerances {
  /// Allowed max-norm defect of beta beta* = I and of C = C* = C^{-1}.
  double unit = 1e-10;
  /// |det beta_1(0)| and |det beta(k-1) beta(k)*| must be at least this.
  double determinant = 1e-8;
};

/// Which defining condition of a beta sequence failed.
enum class BetaCondition {
  Shape,
  Coisometry,       ///< beta(k) beta(k)* = I_p
  LeadingBlock,     ///< det beta_1(0) != 0
  AdjacentOverlap,  ///< det beta(k-1) beta(k)* != 0
};

std::string_view to_string(BetaCondition c) noexcept;

struct BetaViolation {
  BetaCondition condition;
  Index k;
  double value;
  std::string describe() const;
};

/// The rows beta(0..n), each p x 2p.
struct BetaSequence {
  Index p = 1;
  std::vector<Matrix> beta;

  Index size() const { return static_cast<Index>(beta.size()); }
  Index n() const { return size() - 1; }
  const Matrix& operator[](Index k) const { return beta[static_cast<std::size_t>(k)]; }

  /// Stacked rows B(r) = col[beta(0) ... beta(r)], (r+1)p x 2p.
  Matrix stacked(Index r) const;
  Matrix stacked() const { return stacked(n()); }
};

std::optional<BetaViolation> find_violation(const BetaSequence& b,
                                            const ValidationTolerances& tol = {});

/// Throws InvalidBeta naming the failed condition and index.
void require_valid(const BetaSequence& b, const ValidationTolerances& tol = {});

/// The coefficients C_0..C_n, each 2p x 2p.
struct DiscreteDiracSystem {
  Index p = 1;
  std::vector<Matrix> c;

  Index size() const { return static_cast<Index>(c.size()); }
  Index n() const { return size() - 1; }
  const Matrix& operator[](Index k) const { return c[static_cast<std::size_t>(k)]; }
};

/// Throws InvalidSystem unless every C_k is a Hermitian involution with
/// exactly p eigenvalues at +1 and p at -1.
void require_valid(const DiscreteDiracSystem& sys, const ValidationTolerances& tol = {});

/// Complementary rows chi(k) = [I_p 0] U(k)*.
struct ChiSequence {
  Index p = 1;
  std::vector<Matrix> chi;
};

struct UnitaryRows {
  BetaSequence beta;
  ChiSequence chi;
};

/// C_k = I - 2 beta(k)* beta(k). Validates b first.
DiscreteDiracSystem system_from_beta(const BetaSequence& b,
                                     const ValidationTolerances& tol = {});

/// beta(k) = [0 I_p] U(k)*, chi(k) = [I_p 0] U(k)*. Throws NotUnitary.
UnitaryRows beta_from_unitary(const std::vector<Matrix>& u, double tol = 1e-10);

/// Canonical representative of the left-unitary gauge class of b: each row
/// is replaced by U_k beta(k) with U_k the unitary polar factor of v_k*,
/// where v_0 = beta_1(0) and v_k = beta(k) beta(k-1)* v_{k-1}. This is the
/// representative returned by the inverse procedure.
BetaSequence canonical_gauge(const BetaSequence& b);

/// Rows spanning the -1 eigenspace of each C_k, in canonical gauge.
BetaSequence beta_from_system(const DiscreteDiracSystem& sys,
                              const ValidationTolerances& tol = {});

/// W_{n+1}(lambda). Throws LambdaZero.
Matrix fundamental_solution(const DiscreteDiracSystem& sys, Complex lambda);

/// Blocks of the Moebius coefficient matrix W_{n+1}(conj(lambda))*.
MobiusBlocks calw_blocks(const DiscreteDiracSystem& sys, Complex lambda);

/// The triple (A, S, Pi) with A S - S A* = i Pi Pi*. Truncations to the
/// first r+1 blocks are again S-nodes.
class SNode {
 public:
  SNode(Index p, Matrix a, Matrix s, Matrix pi, std::optional<Matrix> similarity = std::nullopt,
        std::optional<Matrix> rows = std::nullopt);

  Index p() const { return p_; }
  Index n() const { return blocks() - 1; }
  Index blocks() const { return s_.rows() / p_; }

  const Matrix& a() const { return a_; }
  const Matrix& s() const { return s_; }
  const Matrix& pi() const { return pi_; }

  Matrix a(Index r) const;
  Matrix s(Index r) const;
  Matrix pi(Index r) const;

  /// The block lower-triangular V_- with S = V_-^{-1} V_-^{-*}, when the node
  /// was assembled from a beta sequence.
  const std::optional<Matrix>& similarity() const { return similarity_; }
  /// The stacked rows B = V_- Pi, kept alongside the similarity.
  const std::optional<Matrix>& rows() const { return rows_; }

  /// max-norm residual of the displacement identity for the r-th truncation.
  double residual(Index r) const;

 private:
  Index p_;
  Matrix a_;
  Matrix s_;
  Matrix pi_;
  std::optional<Matrix> similarity_;
  std::optional<Matrix> rows_;
};

/// Builds the S-node of a system from its beta rows through the block
/// lower-triangular similarity V_-(r) that maps the generator A(r) onto
///   K(r)_{jk} = i beta(j) beta(k)*   (k < j),   (i/2) beta(j) beta(j)*  (k = j).
/// The free leading block of each new row is fixed so that V_-^{-1} maps
/// the stacked beta_1 blocks onto stacked identities.
SNode snode_from_system(const BetaSequence& b, const ValidationTolerances& tol = {});

/// K(r) assembled directly from the rows.
Matrix assemble_k(const BetaSequence& b, Index r);

/// w_A(r, lambda) = I - i Pi(r)* S(r)^{-1} (A(r) - lambda I)^{-1} Pi(r).
/// When the node carries its rows, the similar node (K, I, B) is used instead:
/// w_A = I - i B(r)* (K(r) - lambda I)^{-1} B(r). Both give the same function,
/// but only the second stays accurate when S is badly conditioned.
/// Throws ResolventSingular at lambda = i/2.
Matrix transfer_matrix(const SNode& node, Index r, Complex lambda);

/// Residuals of the structural identities of a discrete system.
struct SystemIdentityReport {
  /// max over lambda of |W(lambda) W(conj lambda)* - ((lambda^2+1)/lambda^2)^{n+1} I|.
  double energy = 0.0;
  /// max over lambda of |W_{n+1}(lambda) - ((lambda-i)/lambda)^{n+1} w_A(n, lambda/2)|.
  double representation = 0.0;
  /// max over r >= 1, lambda of the one-step factorization of w_A(r).
  double factorization = 0.0;
  /// max over pairs (lambda, mu) of the w_A(mu)* w_A(lambda) identity.
  double j_form = 0.0;

  double max() const;
};

SystemIdentityReport verify_system_identities(const BetaSequence& b,
                                              const std::vector<Complex>& lambdas);
SystemIdentityReport verify_system_identities(const DiscreteDiracSystem& sys,
                                              const std::vector<Complex>& lambdas);

}  // namespace skewdirac
