#pragma once

// Accurate evaluation of radial spectral integrals
//   sum_j int_0^inf nu^(r theta_j) r^{-H} S_j r^{-H*} dr/r
// for measures nu annihilating polynomials of degree <= 2k+1.

#include <vector>

#include "irfk/measures.hpp"
#include "irfk/spectral.hpp"

namespace irfk {

struct RadialOptions {
  /// Largest spacing in ln r of the working grid.
  double max_log_step = 0.005;
  /// Direct summation of e^{irx} stops once r |x| h exceeds kappa.
  double kappa = 0.5;
  /// Cap on integration-by-parts terms in the oscillatory tail.
  int max_tail_terms = 12;
};

/// Working grid and cached r^{-H} for one model. Read-only after construction.
class RadialIntegrator {
 public:
  explicit RadialIntegrator(const SelfSimilarModel& model, RadialOptions options = {});

  /// The integral above, with the low-order moments of nu taken to vanish
  /// through degree `annihilated` (2k+1 for nu = lambda * mu~).
  CMatrix integrate(const FiniteMeasure& nu, int annihilated) const;
  CMatrix integrate(const FiniteMeasure& nu) const { return integrate(nu, 2 * k_ + 1); }

  /// int_0^rho nu^(v theta_j) ((v/rho)^{2k+2} - 1) v^{-H} S_j v^{-H*} dv/v summed over j.
  CMatrix truncated_defect(const FiniteMeasure& nu, double rho) const;

  double log_step() const noexcept { return h_; }

 private:
  struct Direction {
    Point theta;
    CMatrix S;
  };

  double node(long n) const;
  double edge(long n) const;
  /// r^{-H} at an arbitrary radius, cached on [0, N).
  CMatrix neg_pow_at(long n) const;
  CMatrix neg_pow(double r) const;
  /// r^{-H} S r^{-H*} with the model's exponent.
  CMatrix chi_weight_at(double r, const CMatrix& S) const;

  /// Integral along one direction for projected atoms (x_a, c_a).
  CMatrix integrate_direction(const std::vector<double>& xs, const std::vector<cplx>& cs,
                              const CMatrix& S, int annihilated) const;
  /// int_R^inf e^{ixr} r^{-H} S r^{-H*} dr/r for R |x| large.
  CMatrix oscillatory_tail(double x, double R, const CMatrix& S) const;
  /// Solves (H - a) X + X (H* - a) = -S.
  CMatrix shifted_lyapunov(double a, const CMatrix& S) const;

  int k_;
  int m_;
  bool scalar_;
  double H_scalar_ = 0.0;
  CMatrix H_;
  double r_min_;
  double r_max_;
  double h_;
  long N_;
  RadialOptions opt_;
  std::vector<CMatrix> pow_cache_;
  std::vector<Direction> directions_;
  const OperatorExponent* op_;
};

}  // namespace irfk
