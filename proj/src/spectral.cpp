#include "irfk/spectral.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "irfk/errors.hpp"

namespace irfk {

double SignedAngularMeasure::max_norm() const {
  double n = 0.0;
  for (const auto& a : atoms) n = std::max(n, a.S.norm());
  return n;
}

AngularSpectralMeasure::AngularSpectralMeasure(int d, int m) : d_(d), m_(m) {
  if (d < 1 || m < 1) throw std::invalid_argument("angular measure needs d >= 1 and m >= 1");
}

AngularSpectralMeasure::AngularSpectralMeasure(int d, int m,
                                               const std::vector<SignedAngularAtom>& atoms)
    : AngularSpectralMeasure(d, m) {
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const auto& a = atoms[j];
    if (a.theta.size() != d) throw std::invalid_argument("atom direction has wrong dimension");
    if (std::abs(a.theta.norm() - 1.0) > kDirectionTolerance) {
      throw std::invalid_argument("atom " + std::to_string(j) + " direction is not a unit vector");
    }
    if (a.S.rows() != m || a.S.cols() != m) {
      throw std::invalid_argument("atom " + std::to_string(j) + " matrix has wrong size");
    }
    if (find_direction(as_signed().atoms, a.theta)) {
      throw std::invalid_argument("atom " + std::to_string(j) + " repeats a direction");
    }
    atoms_.push_back({a.theta, psd_factor(a.S)});
  }
}

double AngularSpectralMeasure::total_mass() const {
  double t = 0.0;
  for (const auto& a : atoms_) t += a.S.S.trace().real();
  return t;
}

CMatrix AngularSpectralMeasure::total_matrix() const {
  CMatrix t = CMatrix::Zero(m_, m_);
  for (const auto& a : atoms_) t += a.S.S;
  return t;
}

SignedAngularMeasure AngularSpectralMeasure::as_signed() const {
  SignedAngularMeasure s{d_, m_, {}};
  for (const auto& a : atoms_) s.atoms.push_back({a.theta, a.S.S});
  return s;
}

std::optional<std::size_t> find_direction(const std::vector<SignedAngularAtom>& atoms,
                                          const Point& theta) {
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if ((atoms[j].theta - theta).norm() <= kDirectionTolerance) return j;
  }
  return std::nullopt;
}

bool in_primary_half(const Point& theta) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta(i) != 0.0) return theta(i) > 0.0;
  }
  return false;
}

AngularSpectralMeasure hermitize(const AngularSpectralMeasure& sigma) {
  const auto src = sigma.as_signed().atoms;
  std::vector<SignedAngularAtom> out;
  for (const auto& a : src) {
    if (find_direction(out, a.theta)) continue;
    CMatrix S = a.S;
    if (auto j = find_direction(src, -a.theta)) S = 0.5 * (S + src[*j].S.conjugate());
    out.push_back({a.theta, S});
    // theta = -theta never happens on the sphere, so the partner is distinct.
    out.push_back({-a.theta, S.conjugate()});
  }
  return AngularSpectralMeasure(sigma.d(), sigma.m(), out);
}

bool is_hermitian(const SignedAngularMeasure& sigma) {
  const double scale = std::max(1.0, sigma.max_norm());
  for (const auto& a : sigma.atoms) {
    auto j = find_direction(sigma.atoms, -a.theta);
    if (!j) {
      if (a.S.norm() > 1e-12 * scale) return false;
      continue;
    }
    if ((sigma.atoms[*j].S - a.S.conjugate()).norm() > 1e-12 * scale) return false;
  }
  return true;
}

bool is_hermitian(const AngularSpectralMeasure& sigma) { return is_hermitian(sigma.as_signed()); }

std::pair<SignedAngularMeasure, SignedAngularMeasure> sym_antisym_split(
    const SignedAngularMeasure& sigma) {
  std::vector<SignedAngularAtom> closure;
  for (const auto& a : sigma.atoms) {
    if (!find_direction(closure, a.theta)) closure.push_back({a.theta, CMatrix()});
    if (!find_direction(closure, -a.theta)) closure.push_back({-a.theta, CMatrix()});
  }
  const CMatrix zero = CMatrix::Zero(sigma.m, sigma.m);
  auto weight = [&](const Point& theta) {
    auto j = find_direction(sigma.atoms, theta);
    return j ? sigma.atoms[*j].S : zero;
  };
  SignedAngularMeasure s{sigma.d, sigma.m, {}};
  SignedAngularMeasure a{sigma.d, sigma.m, {}};
  for (const auto& c : closure) {
    const CMatrix plus = weight(c.theta);
    const CMatrix minus = weight(-c.theta);
    s.atoms.push_back({c.theta, 0.5 * (plus + minus)});
    a.atoms.push_back({c.theta, 0.5 * (plus - minus)});
  }
  return {s, a};
}

std::pair<SignedAngularMeasure, SignedAngularMeasure> sym_antisym_split(
    const AngularSpectralMeasure& sigma) {
  return sym_antisym_split(sigma.as_signed());
}

RadialQuadrature make_radial_quadrature(double r_min, double r_max, int Q) {
  if (!(r_min > 0.0) || !(r_max > r_min) || Q < 1) {
    throw std::invalid_argument("radial quadrature needs 0 < r_min < r_max and Q >= 1");
  }
  RadialQuadrature quad{r_min, r_max, Q, {}, {}};
  const double h = quad.h();
  const double log_min = std::log(r_min);
  quad.nodes.resize(static_cast<std::size_t>(Q));
  quad.weights.assign(static_cast<std::size_t>(Q), h);
  for (int q = 0; q < Q; ++q) {
    quad.nodes[static_cast<std::size_t>(q)] = std::exp(log_min + h * (q + 0.5));
  }
  return quad;
}

// ---------------------------------------------------------------------------

namespace {

OperatorExponent as_operator(const Exponent& e, int m) {
  if (const auto* s = std::get_if<ScalarH>(&e)) return OperatorExponent::scalar(s->H, m);
  return std::get<OperatorExponent>(e);
}

}  // namespace

SelfSimilarModel::SelfSimilarModel(int d, int k, int m, Exponent exponent,
                                   AngularSpectralMeasure sigma, RadialQuadrature quad)
    : d_(d),
      k_(k),
      m_(m),
      exponent_(std::move(exponent)),
      op_(as_operator(exponent_, m)),
      sigma_(std::move(sigma)),
      quad_(std::move(quad)) {
  if (d < 1 || m < 1 || k < 0) throw std::invalid_argument("model needs d, m >= 1 and k >= 0");
  if (sigma_.d() != d || sigma_.m() != m) {
    throw std::invalid_argument("angular measure dimensions do not match the model");
  }
  if (const auto* s = std::get_if<ScalarH>(&exponent_)) {
    if (!(s->H > 0.0 && s->H < k + 1)) {
      throw OutOfRange("scalar H = " + std::to_string(s->H) + " outside (0, " +
                       std::to_string(k + 1) + ")");
    }
  } else {
    if (op_.dim() != m) throw std::invalid_argument("operator exponent has wrong size");
    const auto rep = admissibility(op_, k);
    if (!rep.ok) {
      std::string why;
      for (const auto& r : rep.reasons) why += (why.empty() ? "" : "; ") + r;
      throw Inadmissible("operator exponent inadmissible for k = " + std::to_string(k) + ": " +
                         why + " (min Re " + std::to_string(rep.epsilon) + ", max Re " +
                         std::to_string(k + 1 - rep.delta) + ")");
    }
  }
  if (quad_.nodes.empty()) quad_ = make_radial_quadrature(quad_.r_min, quad_.r_max, quad_.Q);
}

double SelfSimilarModel::scalar_H() const {
  if (const auto* s = std::get_if<ScalarH>(&exponent_)) return s->H;
  throw std::logic_error("model has an operator exponent");
}

bool SelfSimilarModel::has_real_exponent() const {
  return op_.matrix().imag().cwiseAbs().maxCoeff() == 0.0;
}

CMatrix SelfSimilarModel::neg_pow(double r) const { return op_.pow(1.0 / r); }

SelfSimilarModel SelfSimilarModel::with_quadrature(RadialQuadrature quad) const {
  return SelfSimilarModel(d_, k_, m_, exponent_, sigma_, std::move(quad));
}

CMatrix chi_k_weight(const SelfSimilarModel& model, double r, std::size_t atom_index) {
  if (!(r > 0.0)) throw std::invalid_argument("chi_k_weight needs r > 0");
  const auto& S = model.sigma().atoms().at(atom_index).S.S;
  if (model.is_scalar()) return std::pow(r, -2.0 * model.scalar_H()) * S;
  const CMatrix P = model.neg_pow(r);
  return P * S * P.adjoint();
}

// ---------------------------------------------------------------------------

TraceIntegrabilityReport trace_integrability(const SelfSimilarModel& model) {
  TraceIntegrabilityReport rep;
  const auto& H = model.operator_H();
  const int k = model.k();
  const int m = model.m();
  const CMatrix Sigma = model.sigma().total_matrix();
  const CMatrix I = CMatrix::Identity(m, m);

  if (!admissibility(H, k).ok) {
    rep.ok = false;
    rep.value = std::numeric_limits<double>::infinity();
    rep.quadrature_value = rep.value;
    return rep;
  }

  // int_0^1 r^{2k+2} r^{-H} S r^{-H*} dr/r = X with (H-(k+1))X + X(H*-(k+1)) = -S,
  // int_1^inf r^{-H} S r^{-H*} dr/r = Y with H Y + Y H* = S.
  const CMatrix A = H.matrix() - double(k + 1) * I;
  const CMatrix X = solve_sylvester(A, A.adjoint(), -Sigma);
  const CMatrix Y = solve_sylvester(H.matrix(), H.matrix().adjoint(), Sigma);
  rep.value = (X + Y).trace().real();

  // Independent check: midpoint rule on [r_min, r_max] plus the analytic pieces
  // outside it.
  const auto& quad = model.quad();
  double sum = 0.0;
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double r = quad.nodes[q];
    const CMatrix P = model.neg_pow(r);
    const double cut = std::min(1.0, std::pow(r, 2 * k + 2));
    sum += quad.weights[q] * cut * (P * Sigma * P.adjoint()).trace().real();
  }
  const double r0 = std::min(quad.r_min, 1.0);
  const double r1 = std::max(quad.r_max, 1.0);
  const CMatrix P0 = model.neg_pow(r0);
  const CMatrix P1 = model.neg_pow(r1);
  rep.head_tail = std::pow(r0, 2 * k + 2) * (P0 * X * P0.adjoint()).trace().real();
  rep.far_tail = (P1 * Y * P1.adjoint()).trace().real();
  rep.quadrature_value = sum + rep.head_tail + rep.far_tail;
  rep.ok = std::isfinite(rep.value) && rep.value >= 0.0;
  return rep;
}

}  // namespace irfk
