#pragma once

// Gaussian samplers built on the discretized spectral representation.

#include <cstdint>
#include <optional>
#include <vector>

#include "irfk/measures.hpp"
#include "irfk/spectral.hpp"

namespace irfk {

enum class OutputKind {
  Auto,     ///< real when the model admits Hermitian pairing
  Real,     ///< throws NotHermitian when it does not
  Complex,  ///< independent noise at every node
};

struct SimulationOptions {
  OutputKind output = OutputKind::Auto;
  int threads = 0;  ///< 0 resolves through IRFK_THREADS, then the hardware
};

/// Values of N replicates at P evaluation points (grid points or probe
/// measures), each an m-vector.
struct FieldSample {
  int replicates = 0;
  int points = 0;
  int m = 1;
  bool real = false;
  std::uint64_t seed = 0;
  std::vector<Point> grid;  ///< empty when the points are general measures
  std::optional<RepresentationFrame> frame;
  std::vector<cplx> values;  ///< index ((n * points) + p) * m + c

  cplx at(int n, int p, int c) const {
    return values[(static_cast<std::size_t>(n) * points + p) * m + c];
  }
  CVector vector(int n, int p) const;
  /// max |Im| over all values.
  double max_imag() const;
};

/// Per-node factors A_{q,j} = sqrt(w_q) r_q^{-H} A_j with A_j A_j* = S_j.
struct SpectralNoiseBasis {
  std::vector<double> radii;            ///< r_q
  std::vector<std::size_t> atoms;       ///< sigma atom index of each noise direction
  std::vector<CMatrix> factors;         ///< index q * atoms.size() + j
  bool hermitian_pairing = false;       ///< only primary-half atoms carry noise
  const CMatrix& factor(std::size_t q, std::size_t j) const {
    return factors[q * atoms.size() + j];
  }
};

/// True when real output is available: Hermitian sigma and a real exponent.
bool admits_real_output(const SelfSimilarModel& model);

SpectralNoiseBasis make_noise_basis(const SelfSimilarModel& model, bool hermitian_pairing);

/// Y(mu_p) for arbitrary probe measures mu_p in Lambda_k.
FieldSample sample_measures(const SelfSimilarModel& model, const std::vector<FiniteMeasure>& probes,
                            int replicates, std::uint64_t seed, SimulationOptions options = {});

/// The representer Y(lambda_t) on a grid; exactly zero at frame nodes.
FieldSample sample_irfk(const SelfSimilarModel& model, const RepresentationFrame& frame,
                        const std::vector<Point>& grid, int replicates, std::uint64_t seed,
                        SimulationOptions options = {});

/// Y(lambda_t) = sum_{|a| = k+1} (lambda_t-moment a) Z_a with uncorrelated Z_a,
/// Cov(Z_a) = coeff_cov[a] in multi_indices_of_degree(d, k+1) order. Real
/// Gaussians are used when every covariance is real.
FieldSample sample_polynomial(int k, int d, int m, const std::vector<CMatrix>& coeff_cov,
                              const RepresentationFrame& frame, const std::vector<Point>& grid,
                              int replicates, std::uint64_t seed);

/// The nFBM model: d = m = 1, k = n - 1, sigma = {+1, -1} with mass 1/(4 pi^2) each.
SelfSimilarModel nfbm_model(int n, double H, RadialQuadrature quad = make_radial_quadrature());

/// n-th order fBm on a grid in R; real output.
FieldSample sample_nfbm(int n, double H, const std::vector<double>& grid, int replicates,
                        std::uint64_t seed, SimulationOptions options = {},
                        RadialQuadrature quad = make_radial_quadrature());

/// Stationary field X(s) = sum e^{i r s.theta} (1 ^ r)^{k+1} r^{-H} A_j W(dr, dtheta_j)
/// with angular control mu. `A` holds one m x m matrix per mu atom.
struct StationaryFieldSpec {
  int k = 0;
  OperatorExponent H;
  std::vector<CMatrix> A;
  AngularSpectralMeasure mu;
  RadialQuadrature quad = make_radial_quadrature();
};

/// The self-similar model with S_j = A_j mu_j A_j*; throws Inadmissible unless
/// 0 < Re(sp H) < k + 1.
SelfSimilarModel tangent_model(const StationaryFieldSpec& spec);

FieldSample sample_stationary_field(const StationaryFieldSpec& spec, const std::vector<Point>& grid,
                                    int replicates, std::uint64_t seed,
                                    SimulationOptions options = {});

/// Grid points s0 + r t for every atom t of every probe, with the map back.
struct IncrementLayout {
  std::vector<Point> grid;
  std::vector<std::vector<std::pair<int, cplx>>> terms;  ///< per probe: (grid index, weight)
};

IncrementLayout increment_layout(const Point& s0, double r, const std::vector<FiniteMeasure>& probes);

/// Per replicate and probe, r^{-H} sum_atoms c X(s0 + r t) from a sample on
/// layout.grid.
FieldSample rescaled_increments(const FieldSample& sample, const IncrementLayout& layout, double r,
                                const OperatorExponent& H);

/// Empirical covariance E[Y_a conj(Y_b)] over replicates of the flattened
/// (point, component) vector, means removed.
CMatrix empirical_covariance(const FieldSample& sample);

}  // namespace irfk
