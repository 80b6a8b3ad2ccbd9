#pragma once

// Angular spectral measures, radial quadrature and the self-similar model.

#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "irfk/linops.hpp"
#include "irfk/types.hpp"

namespace irfk {

/// Unit directions within this distance are the same sphere point.
inline constexpr double kDirectionTolerance = 1e-12;

/// A direction on the unit sphere carrying an m x m Hermitian matrix.
struct SignedAngularAtom {
  Point theta;
  CMatrix S;
};

/// Atomic angular measure whose atoms are Hermitian but not necessarily PSD.
struct SignedAngularMeasure {
  int d = 1;
  int m = 1;
  std::vector<SignedAngularAtom> atoms;

  /// Largest Frobenius norm over atoms; zero when empty.
  double max_norm() const;
};

struct AngularAtom {
  Point theta;
  PsdMatrix S;
};

/// Atomic PSD-matrix-valued measure on the unit sphere of R^d.
class AngularSpectralMeasure {
 public:
  AngularSpectralMeasure(int d, int m);
  /// Validates ||theta|| = 1 and PSD weights; factors each S.
  AngularSpectralMeasure(int d, int m, const std::vector<SignedAngularAtom>& atoms);

  int d() const noexcept { return d_; }
  int m() const noexcept { return m_; }
  const std::vector<AngularAtom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  /// Sum of trace(S_j).
  double total_mass() const;
  /// Sum of S_j.
  CMatrix total_matrix() const;
  SignedAngularMeasure as_signed() const;

 private:
  int d_;
  int m_;
  std::vector<AngularAtom> atoms_;
};

/// Index of the atom at -theta, if any.
std::optional<std::size_t> find_direction(const std::vector<SignedAngularAtom>& atoms,
                                          const Point& theta);

/// Closes the atom set under theta -> -theta with S_{-theta} = conj(S_theta),
/// averaging S_theta with conj(S_{-theta}) when both are present.
AngularSpectralMeasure hermitize(const AngularSpectralMeasure& sigma);
bool is_hermitian(const AngularSpectralMeasure& sigma);
bool is_hermitian(const SignedAngularMeasure& sigma);

/// sigma_s(A) = (sigma(A) + sigma(-A))/2 and sigma_a(A) = (sigma(A) - sigma(-A))/2,
/// both on the reflection closure of the atom set.
std::pair<SignedAngularMeasure, SignedAngularMeasure> sym_antisym_split(
    const SignedAngularMeasure& sigma);
std::pair<SignedAngularMeasure, SignedAngularMeasure> sym_antisym_split(
    const AngularSpectralMeasure& sigma);

/// True when the first nonzero coordinate of theta is positive.
bool in_primary_half(const Point& theta);

/// Log-midpoint rule for integrals against dr/r on [r_min, r_max].
struct RadialQuadrature {
  double r_min = 1e-4;
  double r_max = 1e4;
  int Q = 512;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Spacing in ln r.
  double h() const { return std::log(r_max / r_min) / Q; }
};

RadialQuadrature make_radial_quadrature(double r_min = 1e-4, double r_max = 1e4, int Q = 512);

struct ScalarH {
  double H;
};

/// A model's exponent: scalar H (acting as H times identity) or a matrix.
using Exponent = std::variant<ScalarH, OperatorExponent>;

/// (d, k, m, H, sigma) with its radial quadrature. Validated on construction.
class SelfSimilarModel {
 public:
  SelfSimilarModel(int d, int k, int m, Exponent exponent, AngularSpectralMeasure sigma,
                   RadialQuadrature quad = make_radial_quadrature());

  int d() const noexcept { return d_; }
  int k() const noexcept { return k_; }
  int m() const noexcept { return m_; }
  const Exponent& exponent() const noexcept { return exponent_; }
  const AngularSpectralMeasure& sigma() const noexcept { return sigma_; }
  const RadialQuadrature& quad() const noexcept { return quad_; }

  bool is_scalar() const noexcept { return std::holds_alternative<ScalarH>(exponent_); }
  /// Scalar exponent; throws std::logic_error for an operator model.
  double scalar_H() const;
  /// The exponent as a matrix (H times identity in the scalar case).
  const OperatorExponent& operator_H() const noexcept { return op_; }
  /// True when H has no imaginary part, so conj commutes with r^{-H}.
  bool has_real_exponent() const;

  /// r^{-H}.
  CMatrix neg_pow(double r) const;

  /// Same (d, k, m, H, sigma) with another quadrature.
  SelfSimilarModel with_quadrature(RadialQuadrature quad) const;

 private:
  int d_;
  int k_;
  int m_;
  Exponent exponent_;
  OperatorExponent op_;
  AngularSpectralMeasure sigma_;
  RadialQuadrature quad_;
};

/// r^{-H} S_j r^{-H*}: the density of chi_k against dr/r on atom j.
CMatrix chi_k_weight(const SelfSimilarModel& model, double r, std::size_t atom_index);

struct TraceIntegrabilityReport {
  bool ok = false;
  double value = 0.0;             ///< exact value, +inf when divergent
  double quadrature_value = 0.0;  ///< independent quadrature with analytic tails
  double head_tail = 0.0;         ///< analytic part below r_min
  double far_tail = 0.0;          ///< analytic part above r_max
};

/// int_0^inf r^{-1} (1 ^ r^{2k+2}) trace(r^{-H} sigma(S) r^{-H*}) dr.
TraceIntegrabilityReport trace_integrability(const SelfSimilarModel& model);

}  // namespace irfk
