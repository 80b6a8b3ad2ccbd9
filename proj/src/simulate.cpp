#include "irfk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "irfk/errors.hpp"
#include "irfk/parallel.hpp"
#include "irfk/rng.hpp"

namespace irfk {

CVector FieldSample::vector(int n, int p) const {
  CVector v(m);
  for (int c = 0; c < m; ++c) v(c) = at(n, p, c);
  return v;
}

double FieldSample::max_imag() const {
  double mx = 0.0;
  for (const auto& v : values) mx = std::max(mx, std::abs(v.imag()));
  return mx;
}

bool admits_real_output(const SelfSimilarModel& model) {
  return model.has_real_exponent() && is_hermitian(model.sigma());
}

SpectralNoiseBasis make_noise_basis(const SelfSimilarModel& model, bool hermitian_pairing) {
  SpectralNoiseBasis b;
  b.hermitian_pairing = hermitian_pairing;
  const auto& atoms = model.sigma().atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (!hermitian_pairing || in_primary_half(atoms[j].theta)) b.atoms.push_back(j);
  }
  const auto& quad = model.quad();
  b.radii = quad.nodes;
  b.factors.reserve(quad.nodes.size() * b.atoms.size());
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const CMatrix P = std::sqrt(quad.weights[q]) * model.neg_pow(quad.nodes[q]);
    for (std::size_t j : b.atoms) b.factors.push_back(P * atoms[j].S.factor);
  }
  return b;
}

namespace {

constexpr int kReplicateBlock = 32;

/// Coefficients phi_p(r_q theta_j) rho(r_q) of every point against every noise node.
struct Plan {
  SpectralNoiseBasis basis;
  CMatrix coef;  ///< points x (Q * J')
  int m = 1;
  bool real = false;
};

bool wants_real(const SelfSimilarModel& model, OutputKind kind) {
  switch (kind) {
    case OutputKind::Complex:
      return false;
    case OutputKind::Real:
      if (!admits_real_output(model)) {
        throw NotHermitian(
            "real output needs a Hermitian angular measure and a real exponent");
      }
      return true;
    case OutputKind::Auto:
    default:
      return admits_real_output(model);
  }
}

template <typename Phi>
Plan make_plan(const SelfSimilarModel& model, int points, bool real, Phi&& phi,
               double radial_power) {
  Plan plan{make_noise_basis(model, real), CMatrix(), model.m(), real};
  const auto& atoms = model.sigma().atoms();
  const std::size_t J = plan.basis.atoms.size();
  const std::size_t Q = plan.basis.radii.size();
  plan.coef.resize(points, static_cast<Eigen::Index>(Q * J));
  for (std::size_t q = 0; q < Q; ++q) {
    const double r = plan.basis.radii[q];
    const double rho = radial_power > 0.0 ? std::pow(std::min(1.0, r), radial_power) : 1.0;
    for (std::size_t jj = 0; jj < J; ++jj) {
      const Point u = r * atoms[plan.basis.atoms[jj]].theta;
      for (int p = 0; p < points; ++p) {
        plan.coef(p, static_cast<Eigen::Index>(q * J + jj)) = rho * phi(p, u);
      }
    }
  }
  return plan;
}

FieldSample run_plan(const Plan& plan, int replicates, std::uint64_t seed, int threads) {
  if (replicates < 0) throw std::invalid_argument("replicate count must be non-negative");
  FieldSample out;
  out.replicates = replicates;
  out.points = static_cast<int>(plan.coef.rows());
  out.m = plan.m;
  out.real = plan.real;
  out.seed = seed;
  out.values.assign(static_cast<std::size_t>(replicates) * out.points * out.m, 0.0);

  const int m = plan.m;
  const auto nodes = static_cast<Eigen::Index>(plan.coef.cols());
  const std::size_t blocks = (static_cast<std::size_t>(replicates) + kReplicateBlock - 1) / kReplicateBlock;
  parallel_for(blocks, resolve_threads(threads), [&](std::size_t b0, std::size_t b1) {
    CMatrix V(nodes, static_cast<Eigen::Index>(m) * kReplicateBlock);
    CMatrix Y;
    CVector g(m);
    for (std::size_t b = b0; b < b1; ++b) {
      const int first = static_cast<int>(b) * kReplicateBlock;
      const int count = std::min(kReplicateBlock, replicates - first);
      V.setZero();
      for (int i = 0; i < count; ++i) {
        const CounterRng rng(seed, static_cast<std::uint64_t>(first + i));
        for (Eigen::Index node = 0; node < nodes; ++node) {
          for (int c = 0; c < m; ++c) {
            g(c) = rng.complex_normal(static_cast<std::uint64_t>(node) * m + c);
          }
          V.block(node, static_cast<Eigen::Index>(i) * m, 1, m) =
              (plan.basis.factors[static_cast<std::size_t>(node)] * g).transpose();
        }
      }
      Y.noalias() = plan.coef * V;
      for (int i = 0; i < count; ++i) {
        for (int p = 0; p < out.points; ++p) {
          for (int c = 0; c < m; ++c) {
            const cplx y = Y(p, static_cast<Eigen::Index>(i) * m + c);
            out.values[(static_cast<std::size_t>(first + i) * out.points + p) * m + c] =
                plan.real ? cplx(2.0 * y.real(), 0.0) : y;
          }
        }
      }
    }
  });
  return out;
}

}  // namespace

FieldSample sample_measures(const SelfSimilarModel& model, const std::vector<FiniteMeasure>& probes,
                            int replicates, std::uint64_t seed, SimulationOptions options) {
  bool real = wants_real(model, options.output);
  for (const auto& p : probes) {
    if (p.dim() != model.d()) throw std::invalid_argument("probe dimension differs from model");
    if (!p.has_real_weights()) {
      if (options.output == OutputKind::Real) {
        throw NotHermitian("real output needs probe measures with real weights");
      }
      real = false;
    }
  }
  const Plan plan = make_plan(
      model, static_cast<int>(probes.size()), real,
      [&](int p, const Point& u) { return fourier(probes[static_cast<std::size_t>(p)], u); }, 0.0);
  return run_plan(plan, replicates, seed, options.threads);
}

FieldSample sample_irfk(const SelfSimilarModel& model, const RepresentationFrame& frame,
                        const std::vector<Point>& grid, int replicates, std::uint64_t seed,
                        SimulationOptions options) {
  if (frame.basis.dim != model.d() || frame.basis.order != model.k()) {
    throw std::invalid_argument("frame does not match the model's (d, k)");
  }
  std::vector<FiniteMeasure> probes;
  probes.reserve(grid.size());
  for (const auto& t : grid) probes.push_back(lambda_t(frame, t));
  FieldSample s = sample_measures(model, probes, replicates, seed, options);
  s.grid = grid;
  s.frame = frame;
  return s;
}

FieldSample sample_polynomial(int k, int d, int m, const std::vector<CMatrix>& coeff_cov,
                              const RepresentationFrame& frame, const std::vector<Point>& grid,
                              int replicates, std::uint64_t seed) {
  const auto indices = multi_indices_of_degree(d, k + 1);
  if (coeff_cov.size() != indices.size()) {
    throw std::invalid_argument("need one covariance per multi-index of degree k+1");
  }
  std::vector<CMatrix> factors;
  bool real = true;
  for (const auto& S : coeff_cov) {
    if (S.rows() != m || S.cols() != m) throw std::invalid_argument("covariance has wrong size");
    factors.push_back(psd_factor(S).factor);
    if (S.imag().cwiseAbs().maxCoeff() != 0.0) real = false;
  }
  // With real covariances the factor may still carry complex phases from the
  // factorization; a real factor is taken from the eigen-decomposition.
  if (real) {
    for (std::size_t a = 0; a < factors.size(); ++a) {
      Eigen::SelfAdjointEigenSolver<RMatrix> es(coeff_cov[a].real());
      const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      factors[a] = (es.eigenvectors() * root.asDiagonal()).cast<cplx>();
    }
  }

  // Moment matrix: coefficient of Z_a at grid point g.
  const auto G = static_cast<int>(grid.size());
  std::vector<cplx> mom(grid.size() * indices.size());
  for (int g = 0; g < G; ++g) {
    const auto lam = lambda_t(frame, grid[static_cast<std::size_t>(g)]);
    for (std::size_t a = 0; a < indices.size(); ++a) {
      mom[static_cast<std::size_t>(g) * indices.size() + a] = moment(lam, indices[a]);
    }
  }

  FieldSample out;
  out.replicates = replicates;
  out.points = G;
  out.m = m;
  out.real = real;
  out.seed = seed;
  out.grid = grid;
  out.frame = frame;
  out.values.assign(static_cast<std::size_t>(replicates) * G * m, 0.0);
  std::vector<CVector> Z(indices.size());
  CVector g(m);
  for (int n = 0; n < replicates; ++n) {
    const CounterRng rng(seed, static_cast<std::uint64_t>(n));
    for (std::size_t a = 0; a < indices.size(); ++a) {
      for (int c = 0; c < m; ++c) {
        const auto counter = static_cast<std::uint64_t>(a * m + c);
        g(c) = real ? cplx(rng.normal(counter), 0.0) : rng.complex_normal(counter);
      }
      Z[a] = factors[a] * g;
    }
    for (int p = 0; p < G; ++p) {
      CVector y = CVector::Zero(m);
      for (std::size_t a = 0; a < indices.size(); ++a) {
        y += mom[static_cast<std::size_t>(p) * indices.size() + a] * Z[a];
      }
      for (int c = 0; c < m; ++c) {
        out.values[(static_cast<std::size_t>(n) * G + p) * m + c] = real ? cplx(y(c).real(), 0.0) : y(c);
      }
    }
  }
  return out;
}

SelfSimilarModel nfbm_model(int n, double H, RadialQuadrature quad) {
  if (n < 1) throw std::invalid_argument("nFBM order must be >= 1");
  const double w = 1.0 / (4.0 * kPi * kPi);
  Point plus(1);
  plus(0) = 1.0;
  std::vector<SignedAngularAtom> atoms{{plus, CMatrix::Constant(1, 1, w)},
                                       {-plus, CMatrix::Constant(1, 1, w)}};
  return SelfSimilarModel(1, n - 1, 1, ScalarH{H}, AngularSpectralMeasure(1, 1, atoms),
                          std::move(quad));
}

FieldSample sample_nfbm(int n, double H, const std::vector<double>& grid, int replicates,
                        std::uint64_t seed, SimulationOptions options, RadialQuadrature quad) {
  const auto model = nfbm_model(n, H, std::move(quad));
  const auto frame = build_frame(monomial_basis(1, n - 1), seed);
  std::vector<Point> pts;
  for (double t : grid) {
    Point p(1);
    p(0) = t;
    pts.push_back(p);
  }
  options.output = OutputKind::Real;
  return sample_irfk(model, frame, pts, replicates, seed, options);
}

SelfSimilarModel tangent_model(const StationaryFieldSpec& spec) {
  const auto rep = admissibility(spec.H, spec.k);
  if (!rep.ok) {
    throw Inadmissible("stationary field exponent needs 0 < Re(sp H) < k + 1 (min Re " +
                       std::to_string(rep.epsilon) + ", max Re " +
                       std::to_string(spec.k + 1 - rep.delta) + ")");
  }
  const auto& mu = spec.mu;
  if (spec.A.size() != mu.size()) throw std::invalid_argument("need one A matrix per mu atom");
  std::vector<SignedAngularAtom> atoms;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const CMatrix& A = spec.A[j];
    const CMatrix S = A * mu.atoms()[j].S.S * A.adjoint();
    atoms.push_back({mu.atoms()[j].theta, 0.5 * (S + S.adjoint())});
  }
  const int m = spec.H.dim();
  return SelfSimilarModel(mu.d(), spec.k, m, spec.H, AngularSpectralMeasure(mu.d(), m, atoms),
                          spec.quad);
}

FieldSample sample_stationary_field(const StationaryFieldSpec& spec, const std::vector<Point>& grid,
                                    int replicates, std::uint64_t seed, SimulationOptions options) {
  const auto model = tangent_model(spec);
  const bool real = wants_real(model, options.output);
  const Plan plan = make_plan(
      model, static_cast<int>(grid.size()), real,
      [&](int p, const Point& u) {
        const double ph = u.dot(grid[static_cast<std::size_t>(p)]);
        return cplx(std::cos(ph), std::sin(ph));
      },
      static_cast<double>(spec.k + 1));
  FieldSample s = run_plan(plan, replicates, seed, options.threads);
  s.grid = grid;
  return s;
}

IncrementLayout increment_layout(const Point& s0, double r,
                                 const std::vector<FiniteMeasure>& probes) {
  if (!(r > 0.0)) throw std::invalid_argument("increment scale must be positive");
  IncrementLayout layout;
  for (const auto& mu : probes) {
    std::vector<std::pair<int, cplx>> terms;
    for (const auto& a : mu.atoms()) {
      const Point x = s0 + r * a.t;
      int idx = -1;
      for (std::size_t g = 0; g < layout.grid.size(); ++g) {
        if ((layout.grid[g] - x).norm() <= kMergeTolerance) {
          idx = static_cast<int>(g);
          break;
        }
      }
      if (idx < 0) {
        idx = static_cast<int>(layout.grid.size());
        layout.grid.push_back(x);
      }
      terms.emplace_back(idx, a.weight);
    }
    layout.terms.push_back(std::move(terms));
  }
  return layout;
}

FieldSample rescaled_increments(const FieldSample& sample, const IncrementLayout& layout, double r,
                                const OperatorExponent& H) {
  if (sample.points != static_cast<int>(layout.grid.size())) {
    throw std::invalid_argument("sample was not drawn on the increment layout grid");
  }
  const int m = sample.m;
  const CMatrix scale = H.pow(1.0 / r);
  const bool real_scale = scale.imag().cwiseAbs().maxCoeff() == 0.0;
  FieldSample out;
  out.replicates = sample.replicates;
  out.points = static_cast<int>(layout.terms.size());
  out.m = m;
  out.seed = sample.seed;
  out.real = sample.real && real_scale;
  out.values.assign(static_cast<std::size_t>(out.replicates) * out.points * m, 0.0);
  for (int n = 0; n < sample.replicates; ++n) {
    for (int p = 0; p < out.points; ++p) {
      CVector acc = CVector::Zero(m);
      for (const auto& [g, w] : layout.terms[static_cast<std::size_t>(p)]) {
        acc += w * sample.vector(n, g);
      }
      const CVector y = scale * acc;
      for (int c = 0; c < m; ++c) {
        out.values[(static_cast<std::size_t>(n) * out.points + p) * m + c] =
            out.real ? cplx(y(c).real(), 0.0) : y(c);
      }
    }
  }
  return out;
}

CMatrix empirical_covariance(const FieldSample& sample) {
  const int D = sample.points * sample.m;
  const int N = sample.replicates;
  CMatrix Y(N, D);
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < D; ++i) Y(n, i) = sample.values[static_cast<std::size_t>(n) * D + i];
  }
  const CVector mean = Y.colwise().mean().transpose();
  Y.rowwise() -= mean.transpose();
  // E[Y_a conj(Y_b)]
  return (Y.transpose() * Y.conjugate()) / static_cast<double>(std::max(1, N - 1));
}

}  // namespace irfk
