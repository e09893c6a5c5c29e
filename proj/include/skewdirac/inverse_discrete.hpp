#pragma once

// Recovery of a discrete system from the Taylor data of its Weyl function.

#include <optional>
#include <vector>

#include "skewdirac/discrete_system.hpp"
#include "skewdirac/weyl_discrete.hpp"

namespace skewdirac {

struct StructuredOperators {
  Matrix a;   ///< block lower-triangular generator
  Matrix pi;  ///< [Phi_1 Phi_2]: stacked identities, minus stacked partial sums of alpha
};

StructuredOperators build_structured_operators(const WeylTaylorData& alpha);

struct InverseOptions {
  /// S is accepted when sigma_min(S) >= invertibility * ||S||.
  double invertibility = 1e-10;
  /// Largest accepted defect of t_r^{-1/2} P_r S(r)^{-1} Pi(r) as a coisometry;
  /// beyond it the data are reported IllConditioned.
  double coisometry = 1e-6;
  /// Nondegeneracy thresholds checked on the recovered rows.
  ValidationTolerances validation{1e-9, 1e-12};
};

struct InverseDiagnostics {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double displacement_residual = 0.0;
  /// sigma_min(S) / ||S||.
  double margin = 0.0;
  bool marginal = false;
  /// Condition number of each leading block S(r).
  std::vector<double> condition_numbers;
  /// max_r |beta(r) beta(r)* - I| for rows normalized by t_r^{-1/2}.
  double coisometry_defect = 0.0;
};

struct InverseResult {
  DiscreteDiracSystem system;
  BetaSequence beta;
  SNode snode;
  InverseDiagnostics diagnostics;
};

/// Solves the displacement identity for S, then for each r reads
///   beta(r) = t_r^{-1/2} [last block row of S(r)^{-1}] Pi(r),
/// with t_r the trailing block of S(r)^{-1}, and sets C_r = I - 2 beta(r)* beta(r).
/// The normalizing factor is evaluated as the Gram matrix of the row, which
/// equals t_r exactly.
/// The inverses S(r)^{-1} are grown one block at a time by bordering.
/// Throws NotAWeylFunction when S fails the invertibility test and
/// IllConditioned when the recovered rows fail their numerical checks.
InverseResult solve_inverse(const WeylTaylorData& alpha, const InverseOptions& options = {});

enum class Verdict { Weyl, Marginal, NotWeyl };

std::string_view to_string(Verdict v) noexcept;

struct Classification {
  Verdict verdict = Verdict::NotWeyl;
  /// sigma_min(S) / ||S||.
  double margin = 0.0;
  bool accepted() const { return verdict != Verdict::NotWeyl; }
};

/// Weyl iff margin >= threshold; margins within one decade above the
/// threshold are reported as Marginal.
Classification classify_admissible(const WeylTaylorData& alpha, double threshold = 1e-10);

struct BorgMarchenkoReport {
  Index l = 0;
  bool coefficients_agree = false;
  /// First index <= l where the coefficients differ, if any.
  std::optional<Index> first_disagreement;
  double max_alpha_deviation = 0.0;
  /// Max deviation of C_k over k <= l, only when the coefficients agree.
  std::optional<double> max_c_deviation;
  bool prefixes_agree = false;
};

BorgMarchenkoReport borg_marchenko_check(const WeylTaylorData& first, const WeylTaylorData& second,
                                         Index l, double alpha_tol = 1e-10, double c_tol = 1e-8);

/// Inverse of the bordered matrix [[S_prev, s12], [s21, s22]] given S_prev^{-1},
/// through the Schur complement t = (s22 - s21 S_prev^{-1} s12)^{-1}.
/// Throws SingularSchurComplement.
Matrix schur_update_inverse(const Matrix& s_prev_inv, const Matrix& s12, const Matrix& s21,
                            const Matrix& s22);

}  // namespace skewdirac
