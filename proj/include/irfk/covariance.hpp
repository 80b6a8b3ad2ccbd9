#pragma once

// Generalized covariances of self-similar IRF_k models.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "irfk/measures.hpp"
#include "irfk/radial.hpp"
#include "irfk/spectral.hpp"

namespace irfk {

enum class IJBranch { NonInteger, Even, Odd };

struct IJConstants {
  double H = 0.0;
  double I = 0.0;
  double J = 0.0;
  IJBranch branch = IJBranch::NonInteger;
};

/// |2H - round(2H)| below this selects the integer (logarithmic) branches.
inline constexpr double kIntegerTwoHTolerance = 1e-12;

/// I + iJ = int_0^inf (e^{ir} - sum_{j <= floor(2H)} (ir)^j / j!) r^{-2H-1} dr.
/// Throws IntegerTwoH when 2H is an integer and OutOfRange unless H > 0.
IJConstants ij_constants(double H);

/// The finite constant of the integer branches: I for odd 2H, J for even 2H.
double integer_branch_constant(int two_H);

/// Kernel value K(nu) for scalar H and an atomic angular measure whose atoms
/// may be signed. nu must annihilate polynomials of degree <= 2k+1.
CMatrix K_closed_form(const FiniteMeasure& nu, double H, int k, const SignedAngularMeasure& sigma);
CMatrix K_closed_form(const FiniteMeasure& nu, const SelfSimilarModel& model);

enum class QuadratureMode {
  /// Refined grid with Taylor head, oscillatory tail and end corrections.
  Accurate,
  /// The model's own RadialQuadrature: the value the sampler targets.
  SamplerGrid,
};

struct QuadratureOptions {
  QuadratureMode mode = QuadratureMode::Accurate;
  /// Also evaluate on a grid with half as many nodes and report the difference.
  bool estimate_error = false;
  RadialOptions radial{};
};

struct CovarianceValue {
  CMatrix C;
  double err_est = 0.0;
  std::string method;
};

/// Cross-covariance C(lambda, mu) for one model, with reusable radial caches.
class CovarianceEngine {
 public:
  explicit CovarianceEngine(const SelfSimilarModel& model, QuadratureOptions options = {});

  const SelfSimilarModel& model() const noexcept { return *model_; }

  /// Closed form for scalar H, accurate quadrature otherwise.
  CovarianceValue cov(const FiniteMeasure& lambda, const FiniteMeasure& mu) const;
  CovarianceValue cov_quadrature(const FiniteMeasure& lambda, const FiniteMeasure& mu) const;
  CovarianceValue cov_closed_form(const FiniteMeasure& lambda, const FiniteMeasure& mu) const;

  /// K(nu) for nu in Lambda_{2k+1}: closed form for scalar H, quadrature otherwise.
  CMatrix K(const FiniteMeasure& nu) const;

  /// int_0^rho nu^ ((v/rho)^{2k+2} - 1) chi_k: the difference between the
  /// covariance of a rho-rescaled stationary field and its tangent limit.
  CMatrix tangent_defect(const FiniteMeasure& nu, double rho) const;

 private:
  CMatrix sampler_grid(const FiniteMeasure& lambda, const FiniteMeasure& mu,
                       const RadialQuadrature& quad) const;

  std::shared_ptr<const SelfSimilarModel> model_;
  QuadratureOptions options_;
  std::shared_ptr<const RadialIntegrator> fine_;
  std::shared_ptr<const RadialIntegrator> coarse_;
};

/// Checks lambda, mu in Lambda_k; throws NotAnnihilating otherwise.
void require_annihilating(const FiniteMeasure& mu, int k, const char* what);

CovarianceValue K_quadrature(const FiniteMeasure& lambda, const FiniteMeasure& mu,
                             const SelfSimilarModel& model, QuadratureOptions options = {});

/// K(nu), returning an m x m matrix.
using KernelFn = std::function<CMatrix(const FiniteMeasure&)>;

struct CondPsdReport {
  bool ok = true;
  double min_eig = 0.0;
  double scale = 0.0;      ///< max over trials of max(trace, ||G||_F)
  int worst_trial = -1;
  std::vector<FiniteMeasure> witness_measures;
  CVector witness_vector;  ///< eigenvector of the worst Gram matrix (stacked f_i)
};

/// Random probes lambda_i = lambda_t - lambda_t' from one frame for (d, k).
std::vector<FiniteMeasure> random_probes(const RepresentationFrame& frame, int count,
                                         std::uint64_t seed, double spread = 2.0);

/// Minimum eigenvalue of the block Gram matrix [K(lambda_i * lambda_j~)] over
/// random probe sets with n <= n_max; ok iff it is >= -1e-8 scale.
CondPsdReport cond_psd_check(const KernelFn& K, int d, int k, int m, int trials, int n_max,
                             std::uint64_t seed);
CondPsdReport cond_psd_check(const SelfSimilarModel& model, int trials, int n_max,
                             std::uint64_t seed);

/// max over probes of ||K(nu) - K((-1) nu)||.
double reversibility_gap(const KernelFn& K, const std::vector<FiniteMeasure>& probes);
double reversibility_gap(const SelfSimilarModel& model, const std::vector<FiniteMeasure>& probes);

}  // namespace irfk
