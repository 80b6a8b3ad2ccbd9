#include "irfk/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "irfk/errors.hpp"
#include "irfk/rng.hpp"

namespace irfk {

namespace {

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

/// Re or Im of i^j.
double ipow_part(int j, bool imaginary) {
  const int r = j % 4;
  if (imaginary) return r == 1 ? 1.0 : (r == 3 ? -1.0 : 0.0);
  return r == 0 ? 1.0 : (r == 2 ? -1.0 : 0.0);
}

/// int_1^inf e^{ir} r^{-a} dr for a > 1.
cplx oscillatory_unit_tail(double a) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kFar = 256.0;
  const int panels = static_cast<int>(std::ceil((kFar - 1.0) / kPi));
  const double R = 1.0 + panels * kPi;
  double re = 0.0;
  double im = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = 1.0 + p * kPi;
    const double hi = lo + kPi;
    re += gauss_kronrod<double, 31>::integrate(
        [a](double r) { return std::cos(r) * std::pow(r, -a); }, lo, hi, 8, 1e-14);
    im += gauss_kronrod<double, 31>::integrate(
        [a](double r) { return std::sin(r) * std::pow(r, -a); }, lo, hi, 8, 1e-14);
  }
  // int_R^inf e^{ir} r^{-a} dr = -e^{iR} sum_m (a)_m R^{-a-m} / i^{m+1}.
  const cplx i(0.0, 1.0);
  cplx acc = 0.0;
  cplx denom = i;
  double poch = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 60; ++m) {
    const cplx term = poch * std::pow(R, -a - m) / denom;
    if (std::abs(term) > last || std::abs(term) < 1e-18) break;
    acc += term;
    last = std::abs(term);
    poch *= a + m;
    denom *= i;
  }
  return cplx(re, im) - std::exp(i * R) * acc;
}

/// int_0^inf (Re or Im)(e^{ir} - sum_{j < s} (ir)^j / j!) r^{-s-1} dr, where
/// the sum runs over j of the matching parity. Requires s distinct from those j.
double remainder_integral(double s, bool imaginary, cplx unit_tail) {
  double head = 0.0;
  for (int j = 0; j < 60; ++j) {
    const double ip = ipow_part(j, imaginary);
    if (ip == 0.0) continue;
    if (j < s) {
      head -= ip / (factorial(j) * (s - j));  // int_1^inf r^{j-s-1} dr
    } else {
      head += ip / (factorial(j) * (j - s));  // int_0^1 r^{j-s-1} dr
    }
  }
  return head + (imaginary ? unit_tail.imag() : unit_tail.real());
}

}  // namespace

IJConstants ij_constants(double H) {
  if (!(H > 0.0)) throw OutOfRange("ij_constants needs H > 0");
  const double s = 2.0 * H;
  if (std::abs(s - std::round(s)) < kIntegerTwoHTolerance) {
    throw IntegerTwoH("2H = " + std::to_string(s) + " is an integer; use the logarithmic branch");
  }
  const cplx tail = oscillatory_unit_tail(s + 1.0);
  IJConstants c;
  c.H = H;
  c.I = remainder_integral(s, false, tail);
  c.J = remainder_integral(s, true, tail);
  c.branch = IJBranch::NonInteger;
  return c;
}

double integer_branch_constant(int two_H) {
  if (two_H < 1) throw OutOfRange("integer branch needs 2H >= 1");
  const double s = two_H;
  const cplx tail = oscillatory_unit_tail(s + 1.0);
  // Odd 2H keeps the cosine integral I, even 2H keeps the sine integral J.
  return remainder_integral(s, two_H % 2 == 0, tail);
}

namespace {

double log_branch_coefficient(int n) {
  // (-1)^{H+1}/(2H)! for even 2H, (-1)^{H+1/2}/(2H)! for odd 2H.
  const int e = n % 2 == 0 ? n / 2 + 1 : (n + 1) / 2;
  return (e % 2 == 0 ? 1.0 : -1.0) / factorial(n);
}

}  // namespace

void require_annihilating(const FiniteMeasure& mu, int k, const char* what) {
  if (annihilation_order(mu, k) < k) {
    throw NotAnnihilating(std::string(what) + " does not annihilate polynomials of degree <= " +
                          std::to_string(k));
  }
}

CMatrix K_closed_form(const FiniteMeasure& nu, double H, int k, const SignedAngularMeasure& sigma) {
  if (!(H > 0.0 && H < k + 1)) {
    throw OutOfRange("scalar H = " + std::to_string(H) + " outside (0, " + std::to_string(k + 1) +
                     ")");
  }
  if (nu.dim() != sigma.d) throw std::invalid_argument("measure and angular measure differ in d");
  require_annihilating(nu, 2 * k + 1, "nu");
  CMatrix K = CMatrix::Zero(sigma.m, sigma.m);
  if (nu.is_null()) return K;

  const double s = 2.0 * H;
  const int n = static_cast<int>(std::round(s));
  const bool integer = std::abs(s - n) < kIntegerTwoHTolerance;
  double I = 0.0;
  double J = 0.0;
  double L = 0.0;
  if (integer) {
    L = log_branch_coefficient(n);
    (n % 2 == 0 ? J : I) = integer_branch_constant(n);
  } else {
    const auto c = ij_constants(H);
    I = c.I;
    J = c.J;
  }
  const cplx i(0.0, 1.0);
  for (const auto& atom : sigma.atoms) {
    cplx even = 0.0;  // sum c |x|^s  (or |x|^s ln|x| on the even branch)
    cplx odd = 0.0;   // sum c sign(x)|x|^s  (or with ln|x| on the odd branch)
    for (const auto& a : nu.atoms()) {
      const double x = atom.theta.dot(a.t);
      if (x == 0.0) continue;
      const double ax = std::abs(x);
      const double p = integer ? std::pow(ax, n) : std::pow(ax, s);
      const double sg = x > 0.0 ? 1.0 : -1.0;
      const double lg = std::log(ax);
      if (integer && n % 2 == 0) {
        even += a.weight * p * lg;
        odd += a.weight * sg * p;
      } else if (integer) {
        even += a.weight * p;
        odd += a.weight * sg * p * lg;
      } else {
        even += a.weight * p;
        odd += a.weight * sg * p;
      }
    }
    cplx coef;
    if (!integer) {
      coef = I * even + i * J * odd;
    } else if (n % 2 == 0) {
      coef = L * even + i * J * odd;
    } else {
      coef = I * even + i * L * odd;
    }
    K += coef * atom.S;
  }
  return K;
}

CMatrix K_closed_form(const FiniteMeasure& nu, const SelfSimilarModel& model) {
  if (!model.is_scalar()) throw std::invalid_argument("closed form needs a scalar exponent");
  return K_closed_form(nu, model.scalar_H(), model.k(), model.sigma().as_signed());
}

// ---------------------------------------------------------------------------

CovarianceEngine::CovarianceEngine(const SelfSimilarModel& model, QuadratureOptions options)
    : model_(std::make_shared<const SelfSimilarModel>(model)), options_(options) {
  fine_ = std::make_shared<const RadialIntegrator>(*model_, options_.radial);
  if (options_.estimate_error) {
    RadialOptions coarse = options_.radial;
    coarse.max_log_step = 2.0 * fine_->log_step();
    coarse_ = std::make_shared<const RadialIntegrator>(*model_, coarse);
  }
}

CMatrix CovarianceEngine::sampler_grid(const FiniteMeasure& lambda, const FiniteMeasure& mu,
                                       const RadialQuadrature& quad) const {
  const int m = model_->m();
  CMatrix C = CMatrix::Zero(m, m);
  const auto& atoms = model_->sigma().atoms();
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double r = quad.nodes[q];
    const CMatrix P = model_->neg_pow(r);
    for (const auto& a : atoms) {
      const Point u = r * a.theta;
      const cplx f = fourier(lambda, u) * std::conj(fourier(mu, u));
      if (f == cplx(0.0)) continue;
      C += (quad.weights[q] * f) * (P * a.S.S * P.adjoint());
    }
  }
  return C;
}

CovarianceValue CovarianceEngine::cov_quadrature(const FiniteMeasure& lambda,
                                                 const FiniteMeasure& mu) const {
  const int k = model_->k();
  require_annihilating(lambda, k, "lambda");
  require_annihilating(mu, k, "mu");
  CovarianceValue v;
  if (options_.mode == QuadratureMode::SamplerGrid) {
    v.method = "sampler_grid";
    v.C = sampler_grid(lambda, mu, model_->quad());
    if (options_.estimate_error) {
      const auto& q = model_->quad();
      const CMatrix C2 = sampler_grid(lambda, mu, make_radial_quadrature(q.r_min, q.r_max, 2 * q.Q));
      v.err_est = (C2 - v.C).norm();
    }
    return v;
  }
  v.method = "quadrature";
  const FiniteMeasure nu = convolve_reflect(lambda, mu);
  v.C = fine_->integrate(nu);
  if (coarse_) v.err_est = (coarse_->integrate(nu) - v.C).norm();
  return v;
}

CovarianceValue CovarianceEngine::cov_closed_form(const FiniteMeasure& lambda,
                                                  const FiniteMeasure& mu) const {
  const int k = model_->k();
  require_annihilating(lambda, k, "lambda");
  require_annihilating(mu, k, "mu");
  return {K_closed_form(convolve_reflect(lambda, mu), *model_), 0.0, "closed_form"};
}

CovarianceValue CovarianceEngine::cov(const FiniteMeasure& lambda, const FiniteMeasure& mu) const {
  if (model_->is_scalar() && options_.mode == QuadratureMode::Accurate) {
    return cov_closed_form(lambda, mu);
  }
  return cov_quadrature(lambda, mu);
}

CMatrix CovarianceEngine::K(const FiniteMeasure& nu) const {
  if (model_->is_scalar()) return K_closed_form(nu, *model_);
  require_annihilating(nu, 2 * model_->k() + 1, "nu");
  return fine_->integrate(nu);
}

CMatrix CovarianceEngine::tangent_defect(const FiniteMeasure& nu, double rho) const {
  return fine_->truncated_defect(nu, rho);
}

CovarianceValue K_quadrature(const FiniteMeasure& lambda, const FiniteMeasure& mu,
                             const SelfSimilarModel& model, QuadratureOptions options) {
  return CovarianceEngine(model, options).cov_quadrature(lambda, mu);
}

// ---------------------------------------------------------------------------

std::vector<FiniteMeasure> random_probes(const RepresentationFrame& frame, int count,
                                         std::uint64_t seed, double spread) {
  const int d = frame.basis.dim;
  std::vector<FiniteMeasure> out;
  for (int i = 0; i < count; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    Point t(d);
    Point t2(d);
    for (int c = 0; c < d; ++c) t(c) = rng.uniform(-spread, spread);
    for (int c = 0; c < d; ++c) t2(c) = rng.uniform(-spread, spread);
    out.push_back(lambda_t(frame, t) - lambda_t(frame, t2));
  }
  return out;
}

CondPsdReport cond_psd_check(const KernelFn& K, int d, int k, int m, int trials, int n_max,
                             std::uint64_t seed) {
  CondPsdReport rep;
  rep.min_eig = std::numeric_limits<double>::infinity();
  const auto frame = build_frame(monomial_basis(d, k), seed);
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(seed ^ 0xc0d5ULL, static_cast<std::uint64_t>(trial));
    const int n = 1 + static_cast<int>(rng.uniform() * n_max) % n_max;
    const auto probes = random_probes(frame, n, seed + 7919ULL * (trial + 1));
    CMatrix G(n * m, n * m);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const CMatrix block = K(convolve_reflect(probes[static_cast<std::size_t>(i)],
                                                 probes[static_cast<std::size_t>(j)]));
        G.block(i * m, j * m, m, m) = block;
        if (j != i) G.block(j * m, i * m, m, m) = block.adjoint();
      }
    }
    const CMatrix Gh = 0.5 * (G + G.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Gh);
    const double min_eig = es.eigenvalues()(0);
    const double scale = std::max(std::abs(Gh.trace().real()), Gh.norm());
    rep.scale = std::max(rep.scale, scale);
    const bool ok = min_eig >= -1e-8 * scale;
    if (min_eig < rep.min_eig) {
      rep.min_eig = min_eig;
      if (!ok || rep.worst_trial < 0 || rep.ok) {
        rep.worst_trial = trial;
        rep.witness_measures = probes;
        rep.witness_vector = es.eigenvectors().col(0);
      }
    }
    if (!ok) rep.ok = false;
  }
  return rep;
}

CondPsdReport cond_psd_check(const SelfSimilarModel& model, int trials, int n_max,
                             std::uint64_t seed) {
  const CovarianceEngine engine(model);
  return cond_psd_check([&](const FiniteMeasure& nu) { return engine.K(nu); }, model.d(),
                        model.k(), model.m(), trials, n_max, seed);
}

double reversibility_gap(const KernelFn& K, const std::vector<FiniteMeasure>& probes) {
  double gap = 0.0;
  for (const auto& nu : probes) gap = std::max(gap, (K(nu) - K(reflect(nu))).norm());
  return gap;
}

double reversibility_gap(const SelfSimilarModel& model, const std::vector<FiniteMeasure>& probes) {
  const CovarianceEngine engine(model);
  return reversibility_gap([&](const FiniteMeasure& nu) { return engine.K(nu); }, probes);
}

}  // namespace irfk
