#pragma once

// Complex matrix utilities for operator exponents and PSD weights.

#include <cstdint>
#include <string>
#include <vector>

#include "irfk/types.hpp"

namespace irfk {

/// ||H H* - H* H|| <= kNormalityTolerance ||H||^2 classifies H as normal.
inline constexpr double kNormalityTolerance = 1e-10;

/// An m x m exponent H with its spectrum computed once.
class OperatorExponent {
 public:
  explicit OperatorExponent(CMatrix H);
  /// h times the m x m identity.
  static OperatorExponent scalar(double h, int m);

  int dim() const noexcept { return static_cast<int>(H_.rows()); }
  const CMatrix& matrix() const noexcept { return H_; }
  const CVector& eigenvalues() const noexcept { return eigenvalues_; }
  bool is_normal() const noexcept { return normal_; }
  /// True when H is a real multiple of the identity.
  bool is_scalar() const noexcept { return scalar_; }

  double min_real_eigenvalue() const;
  double max_real_eigenvalue() const;

  /// c^H = exp(ln(c) H), c > 0.
  CMatrix pow(double c) const;

 private:
  CMatrix H_;
  CVector eigenvalues_;
  bool normal_ = false;
  bool scalar_ = false;
};

/// exp(A) by scaling and squaring with a Pade approximant.
CMatrix expm(const CMatrix& A);

/// c^H for c > 0.
CMatrix c_pow_H(const OperatorExponent& H, double c);

struct AdmissibilityReport {
  bool ok = false;
  double epsilon = 0.0;  ///< min Re(sp H)
  double delta = 0.0;    ///< k + 1 - max Re(sp H)
  /// "necessary-and-sufficient" for normal H, "sufficient" otherwise.
  std::string criterion;
  std::vector<std::string> reasons;
};

/// ok iff 0 < Re(lambda) < k + 1 for every eigenvalue lambda of H.
AdmissibilityReport admissibility(const OperatorExponent& H, int k);

struct ScalingActionReport {
  bool spectrum_ok = false;      ///< Re(sp H) in (0, inf)
  bool quadratic_form_ok = false;  ///< <(H + H*)x, x> > 0 for all sampled x
  bool monotone_ok = false;      ///< c -> ||c^H x|| increasing on the grid
  double min_real_eigenvalue = 0.0;
  double min_quadratic_form = 0.0;
  CVector quadratic_form_witness;
  CVector monotone_witness;
  double monotone_witness_c = 0.0;
  bool passed() const { return spectrum_ok && quadratic_form_ok && monotone_ok; }
};

/// Samples the hypotheses under which c -> c^H is a scaling action. The
/// monotonicity grid is 64 log-spaced c in [1e-2, 1e2] per sampled x.
ScalingActionReport scaling_action_check(const OperatorExponent& H, int samples,
                                         std::uint64_t seed);

/// A Hermitian PSD matrix S with a factor A such that A A* = S.
struct PsdMatrix {
  CMatrix S;
  CMatrix factor;
  int dim() const { return static_cast<int>(S.rows()); }
};

/// Pivoted LDL*-based factor; accepts singular PSD input. Throws NotPsd when
/// the smallest eigenvalue is below -1e-8 ||S||.
PsdMatrix psd_factor(const CMatrix& S);

/// Largest |S - S*| entry relative to max(1, ||S||).
double hermitian_defect(const CMatrix& S);

/// Solves A X + X B = C via the Kronecker form (small matrices only).
CMatrix solve_sylvester(const CMatrix& A, const CMatrix& B, const CMatrix& C);

/// Trace norm (sum of singular values).
double trace_norm(const CMatrix& A);

}  // namespace irfk
