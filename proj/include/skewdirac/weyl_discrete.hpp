#pragma once

#include <string>
#include <vector>

#include "skewdirac/discrete_system.hpp"

namespace skewdirac {

/// z = (lambda - i) / (lambda + i). Throws PoleInput at lambda = -i.
Complex z_of_lambda(Complex lambda);
/// lambda = i (1 + z) / (1 - z). Throws PoleInput at z = 1.
Complex lambda_of_z(Complex z);

/// Taylor coefficients alpha_0..alpha_n of phi(i(1+z)/(1-z)) at z = 0.
struct WeylTaylorData {
  Index p = 1;
  std::vector<Matrix> alpha;

  Index size() const { return static_cast<Index>(alpha.size()); }
  Index n() const { return size() - 1; }
  const Matrix& operator[](Index k) const { return alpha[static_cast<std::size_t>(k)]; }

  /// First count coefficients.
  WeylTaylorData prefix(Index count) const;
};

/// Throws Validation unless alpha is nonempty with finite p x p entries.
void require_valid(const WeylTaylorData& data);

/// Parameter pair (R, Q) given by polynomial germs in z around lambda = i:
/// R(lambda) = sum_k r[k] z(lambda)^k, likewise Q.
struct AdmissiblePair {
  std::vector<Matrix> r;
  std::vector<Matrix> q;

  static AdmissiblePair constant(const Matrix& r0, const Matrix& q0) { return {{r0}, {q0}}; }

  Matrix r_at_z(Complex z) const;
  Matrix q_at_z(Complex z) const;
};

/// phi(lambda) = Moebius transform of the W_{n+1}(conj lambda)* blocks applied
/// to (R(lambda), Q(lambda)).
Matrix weyl_eval(const DiscreteDiracSystem& sys, const AdmissiblePair& pair, Complex lambda);

/// Taylor data of every Weyl function of the system, read off the second
/// column block of the S-node: with psi_k the p x p blocks of V_-^{-1} B_2,
/// alpha_0 = -psi_0 and alpha_k = psi_{k-1} - psi_k.
WeylTaylorData taylor_from_system(const BetaSequence& b);

struct PairAdmissibility {
  bool admissible = false;
  Complex determinant;
  /// Smallest singular value of W21(i) R(i) + W22(i) Q(i) relative to max(1, its norm).
  double margin = 0.0;
  std::string diagnostic;
};

/// Relative singular-value margin below which a pair is rejected.
inline constexpr double kPairAdmissibilityThreshold = 1e-10;

PairAdmissibility check_pair_admissible(const DiscreteDiracSystem& sys, const AdmissiblePair& pair,
                                        double threshold = kPairAdmissibilityThreshold);

}  // namespace skewdirac
