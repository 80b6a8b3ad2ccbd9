#pragma once

// Numerical pass/fail reports for covariance and sampler properties.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irfk/covariance.hpp"
#include "irfk/simulate.hpp"

namespace irfk {

enum class CheckStatus { Pass, Fail, Inconclusive };

const char* to_string(CheckStatus s);

struct VerificationReport {
  std::string check;
  double statistic = 0.0;
  double threshold = 0.0;
  CheckStatus status = CheckStatus::Fail;
  std::vector<std::string> witnesses;
  /// Named auxiliary numbers, in insertion order.
  std::vector<std::pair<std::string, double>> details;
  double runtime_seconds = 0.0;

  bool passed() const { return status == CheckStatus::Pass; }
  double detail(const std::string& name) const;
};

struct SelfSimilarityOptions {
  double closed_form_tolerance = 1e-6;
  double quadrature_tolerance = 1e-3;
};

/// max over c and probe pairs of ||C(c lambda, c mu) - c^H C(lambda, mu) c^{H*}|| / ||C(lambda, mu)||.
VerificationReport check_self_similarity(const SelfSimilarModel& model,
                                         const std::vector<double>& c_values,
                                         const std::vector<FiniteMeasure>& probes,
                                         SelfSimilarityOptions options = {});

/// Analytic: max over shifts and probe pairs of ||C(w + lambda, w + mu) - C(lambda, mu)||,
/// relative to max(1, ||C(lambda, mu)||).
VerificationReport check_intrinsic_stationarity(const SelfSimilarModel& model,
                                                const std::vector<Point>& shifts,
                                                const std::vector<FiniteMeasure>& probes,
                                                double tolerance = 1e-10);

struct MonteCarloOptions {
  double within_3se_fraction = 0.99;
  double max_se = 5.0;
  int min_replicates = 200;
};

/// Leave-one-out jackknife of E[x conj(y)] with means removed; returns the
/// estimate and the standard errors of its real and imaginary parts.
struct JackknifeEstimate {
  cplx value;
  double se_re = 0.0;
  double se_im = 0.0;
};
JackknifeEstimate jackknife_covariance(const std::vector<cplx>& x, const std::vector<cplx>& y);

/// Entrywise comparison of the sample covariance of the flattened
/// (point, component) vector against `analytic`.
VerificationReport check_mc_covariance(const FieldSample& sample, const CMatrix& analytic,
                                       MonteCarloOptions options = {});

/// Two-sample comparison of covariances (for example increments at two locations).
VerificationReport check_intrinsic_stationarity_empirical(const FieldSample& a, const FieldSample& b,
                                                          MonteCarloOptions options = {});

struct TangentOptions {
  double final_tolerance = 0.05;
};

/// e(r) = ||Cov_r - Cov_tangent|| / ||Cov_tangent|| over the probe Gram blocks,
/// computed analytically. Details carry e(r) per ladder entry.
VerificationReport check_tangent_convergence(const StationaryFieldSpec& spec,
                                             const std::vector<double>& r_ladder,
                                             const std::vector<FiniteMeasure>& probes,
                                             TangentOptions options = {});

struct HolderOptions {
  double tolerance = 0.15;
  double non_normal_tolerance = 0.25;
  double min_decades = 1.5;
};

/// Log-log slope of trace C(lambda_{t+h} - lambda_t) against h, compared with
/// 2 min(H_min, 1).
VerificationReport check_holder_scaling(const SelfSimilarModel& model, const std::vector<double>& lags,
                                        const Point& t0, HolderOptions options = {});

/// Reversibility gap on probes in Lambda_{2k+1}, cross-checked against the
/// anti-symmetric part of sigma. Passes when the two diagnoses agree.
VerificationReport check_reversibility(const SelfSimilarModel& model,
                                       const std::vector<FiniteMeasure>& probes,
                                       double tolerance = 1e-12);

VerificationReport check_cond_psd(const SelfSimilarModel& model, int trials, int n_max,
                                  std::uint64_t seed);

}  // namespace irfk
