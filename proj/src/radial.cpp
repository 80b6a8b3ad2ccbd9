#include "irfk/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace irfk {

namespace {

constexpr int kSeriesTerms = 30;

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

cplx ipow(int p) {
  static const cplx table[4] = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0)};
  return table[p % 4];
}

/// Projections x_a = theta . t_a with equal projections merged.
void project(const FiniteMeasure& nu, const Point& theta, std::vector<double>& xs,
             std::vector<cplx>& cs) {
  std::vector<std::pair<double, cplx>> proj;
  double X = 0.0;
  for (const auto& a : nu.atoms()) {
    const double x = theta.dot(a.t);
    proj.emplace_back(x, a.weight);
    X = std::max(X, std::abs(x));
  }
  std::sort(proj.begin(), proj.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  xs.clear();
  cs.clear();
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * X;
  for (const auto& [x, c] : proj) {
    const double xr = std::abs(x) <= tol ? 0.0 : x;
    if (!xs.empty() && std::abs(xs.back() - xr) <= tol) {
      cs.back() += c;
    } else {
      xs.push_back(xr);
      cs.push_back(c);
    }
  }
}

/// Moments M_p = sum c x^p for p in [p0, p0 + count).
std::vector<cplx> moments(const std::vector<double>& xs, const std::vector<cplx>& cs, int p0,
                          int count) {
  std::vector<cplx> M(static_cast<std::size_t>(count), 0.0);
  for (std::size_t a = 0; a < xs.size(); ++a) {
    double xp = std::pow(xs[a], p0);
    for (int i = 0; i < count; ++i) {
      M[static_cast<std::size_t>(i)] += cs[a] * xp;
      xp *= xs[a];
    }
  }
  return M;
}

/// sum_{p >= p0} (i r)^p M_p / p!, valid for r max|x| <= 1.
cplx taylor_remainder(const std::vector<cplx>& M, int p0, double r) {
  cplx acc = 0.0;
  double rp = std::pow(r, p0) / factorial(p0);
  for (int i = 0; i < static_cast<int>(M.size()); ++i) {
    const int p = p0 + i;
    acc += ipow(p) * rp * M[static_cast<std::size_t>(i)];
    rp *= r / (p + 1);
  }
  return acc;
}

}  // namespace

RadialIntegrator::RadialIntegrator(const SelfSimilarModel& model, RadialOptions options)
    : k_(model.k()),
      m_(model.m()),
      scalar_(model.is_scalar()),
      H_(model.operator_H().matrix()),
      r_min_(model.quad().r_min),
      r_max_(model.quad().r_max),
      opt_(options),
      op_(&model.operator_H()) {
  if (scalar_) H_scalar_ = model.scalar_H();
  const double span = std::log(r_max_ / r_min_);
  const double base = model.quad().h();
  const long refine = std::max(1L, static_cast<long>(std::ceil(base / opt_.max_log_step - 1e-9)));
  N_ = static_cast<long>(model.quad().Q) * refine;
  h_ = span / static_cast<double>(N_);
  if (!scalar_) {
    pow_cache_.reserve(static_cast<std::size_t>(N_));
    for (long n = 0; n < N_; ++n) pow_cache_.push_back(op_->pow(1.0 / node(n)));
  }
  for (const auto& a : model.sigma().atoms()) directions_.push_back({a.theta, a.S.S});
}

double RadialIntegrator::node(long n) const {
  return r_min_ * std::exp(h_ * (static_cast<double>(n) + 0.5));
}

double RadialIntegrator::edge(long n) const {
  return r_min_ * std::exp(h_ * static_cast<double>(n));
}

CMatrix RadialIntegrator::neg_pow_at(long n) const {
  if (n >= 0 && n < N_) return pow_cache_[static_cast<std::size_t>(n)];
  return op_->pow(1.0 / node(n));
}

CMatrix RadialIntegrator::neg_pow(double r) const { return op_->pow(1.0 / r); }

CMatrix RadialIntegrator::shifted_lyapunov(double a, const CMatrix& S) const {
  const CMatrix A = H_ - a * CMatrix::Identity(m_, m_);
  return solve_sylvester(A, A.adjoint(), -S);
}

CMatrix RadialIntegrator::oscillatory_tail(double x, double R, const CMatrix& S) const {
  // int_R^inf e^{ixr} F(r) dr with F = G/r, G = r^{-H} S r^{-H*}; repeated
  // integration by parts gives -e^{ixR} sum_m P_m / (R^{m+1} (ix)^{m+1}) with
  // P_0 = G(R) and P_m = L(P_{m-1}) + (m-1) P_{m-1}, L(Y) = HY + YH* + Y.
  const cplx ix(0.0, x);
  const cplx phase = std::exp(ix * R);
  if (scalar_) {
    const double s = 2.0 * H_scalar_;
    double P = std::pow(R, -s);
    cplx acc = 0.0;
    cplx denom = ix * R;
    double last = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= opt_.max_tail_terms; ++m) {
      const cplx term = P / denom;
      if (std::abs(term) > last) break;
      acc += term;
      last = std::abs(term);
      P *= (s + 1.0 + m);
      denom *= ix * R;
    }
    return -phase * acc * S;
  }
  const CMatrix PR = neg_pow(R);
  CMatrix P = PR * S * PR.adjoint();
  CMatrix acc = CMatrix::Zero(m_, m_);
  cplx denom = ix * R;
  double last = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= opt_.max_tail_terms; ++m) {
    const CMatrix term = P / denom;
    const double nt = term.norm();
    if (nt > last) break;
    acc += term;
    last = nt;
    const CMatrix next = H_ * P + P * H_.adjoint() + static_cast<double>(m + 1) * P;
    P = next;
    denom *= ix * R;
  }
  return -phase * acc;
}

CMatrix RadialIntegrator::integrate(const FiniteMeasure& nu, int annihilated) const {
  CMatrix total = CMatrix::Zero(m_, m_);
  if (nu.is_null()) return total;
  std::vector<double> xs;
  std::vector<cplx> cs;
  for (const auto& dir : directions_) {
    project(nu, dir.theta, xs, cs);
    if (scalar_) {
      const CMatrix one = CMatrix::Ones(1, 1);
      total += integrate_direction(xs, cs, one, annihilated)(0, 0) * dir.S;
    } else {
      total += integrate_direction(xs, cs, dir.S, annihilated);
    }
  }
  return total;
}

CMatrix RadialIntegrator::integrate_direction(const std::vector<double>& xs,
                                              const std::vector<cplx>& cs, const CMatrix& S,
                                              int annihilated) const {
  const int dim = static_cast<int>(S.rows());
  CMatrix out = CMatrix::Zero(dim, dim);
  double X = 0.0;
  for (double x : xs) X = std::max(X, std::abs(x));
  if (X == 0.0) return out;  // nu^ vanishes identically along this direction

  const int p0 = annihilated + 1;
  const auto M = moments(xs, cs, p0, kSeriesTerms);

  // Grid start: low enough that the two-term head correction is accurate.
  long n_start = 0;
  if (r_min_ * X > 1e-3) {
    n_start = static_cast<long>(std::floor(std::log(1e-3 / (X * r_min_)) / h_));
  }
  // First node in the direct-summation region (r X > 1).
  long n_direct = static_cast<long>(std::ceil(std::log(1.0 / (X * r_min_)) / h_ - 0.5));
  n_direct = std::max(n_direct, n_start);
  while (node(n_direct) * X <= 1.0) ++n_direct;
  while (n_direct > n_start && node(n_direct - 1) * X > 1.0) --n_direct;

  // Cutoff node per atom; zero-frequency atoms run to the end of the grid.
  std::vector<long> cut(xs.size());
  long n_end = std::max(N_, n_direct);
  for (std::size_t a = 0; a < xs.size(); ++a) {
    if (xs[a] == 0.0) {
      cut[a] = std::max(N_, n_direct);
      continue;
    }
    const double lim = opt_.kappa / (std::abs(xs[a]) * h_);
    long n = static_cast<long>(std::ceil(std::log(lim / r_min_) / h_ - 0.5));
    n = std::max(n, n_direct);
    cut[a] = n;
    n_end = std::max(n_end, n);
  }

  const long count = n_end - n_start;
  std::vector<cplx> f(static_cast<std::size_t>(count), 0.0);
  for (long n = n_start; n < n_direct; ++n) {
    f[static_cast<std::size_t>(n - n_start)] = taylor_remainder(M, p0, node(n));
  }
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const double x = xs[a];
    for (long n = n_direct; n < cut[a]; ++n) {
      const double ph = node(n) * x;
      f[static_cast<std::size_t>(n - n_start)] += cs[a] * cplx(std::cos(ph), std::sin(ph));
    }
  }

  // Grid sum.
  if (scalar_) {
    const double s = 2.0 * H_scalar_;
    cplx acc = 0.0;
    for (long n = n_start; n < n_end; ++n) {
      const cplx fn = f[static_cast<std::size_t>(n - n_start)];
      if (fn != cplx(0.0)) acc += fn * std::pow(node(n), -s);
    }
    out(0, 0) += h_ * acc;
  } else {
    CMatrix G(dim, dim);
    for (long n = n_start; n < n_end; ++n) {
      const cplx fn = f[static_cast<std::size_t>(n - n_start)];
      if (fn == cplx(0.0)) continue;
      const CMatrix P = neg_pow_at(n);
      G.noalias() = P * S * P.adjoint();
      out += (h_ * fn) * G;
    }
  }

  // Tails beyond each atom's cutoff.
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const double R = edge(cut[a]);
    if (xs[a] == 0.0) {
      // int_R^inf r^{-H} S r^{-H*} dr/r = R^{-H} Y R^{-H*}, H Y + Y H* = S.
      if (scalar_) {
        const double s = 2.0 * H_scalar_;
        out += cs[a] * std::pow(R, -s) / s * S;
      } else {
        const CMatrix Y = shifted_lyapunov(0.0, -S);
        const CMatrix P = neg_pow(R);
        out += cs[a] * (P * Y * P.adjoint());
      }
      continue;
    }
    out += cs[a] * oscillatory_tail(xs[a], R, S);
  }

  // Head below the grid from the leading Taylor terms:
  // int_0^r0 r^p r^{-H} S r^{-H*} dr/r = r0^p r0^{-H} X_p r0^{-H*},
  // (H - p/2) X_p + X_p (H* - p/2) = -S.
  const double r0 = edge(n_start);
  for (int p = p0; p <= p0 + 1; ++p) {
    const cplx coef = ipow(p) * M[static_cast<std::size_t>(p - p0)] / factorial(p);
    if (scalar_) {
      const double s = 2.0 * H_scalar_;
      out += coef * std::pow(r0, p - s) / (p - s) * S;
    } else {
      const CMatrix Xp = shifted_lyapunov(0.5 * p, S);
      const CMatrix P = neg_pow(r0);
      out += coef * std::pow(r0, p) * (P * Xp * P.adjoint());
    }
  }
  return out;
}

CMatrix RadialIntegrator::truncated_defect(const FiniteMeasure& nu, double rho) const {
  CMatrix total = CMatrix::Zero(m_, m_);
  if (nu.is_null()) return total;
  const int p0 = 2 * k_ + 2;
  std::vector<double> xs;
  std::vector<cplx> cs;
  for (const auto& dir : directions_) {
    project(nu, dir.theta, xs, cs);
    double X = 0.0;
    for (double x : xs) X = std::max(X, std::abs(x));
    if (X == 0.0) continue;
    const auto M = moments(xs, cs, p0, kSeriesTerms);

    // Midpoint rule in ln v over [v_lo, rho]; below v_lo the leading Taylor
    // terms against -1 (the (v/rho)^{2k+2} part is of higher order).
    const double v_lo = std::min(rho, 1.0 / X) * 1e-4;
    const long n = std::max(64L, static_cast<long>(std::ceil(std::log(rho / v_lo) / h_)));
    const double hh = std::log(rho / v_lo) / static_cast<double>(n);
    CMatrix acc = CMatrix::Zero(m_, m_);
    for (long i = 0; i < n; ++i) {
      const double v = v_lo * std::exp(hh * (static_cast<double>(i) + 0.5));
      cplx f;
      if (v * X <= 1.0) {
        f = taylor_remainder(M, p0, v);
      } else {
        f = 0.0;
        for (std::size_t a = 0; a < xs.size(); ++a) {
          f += cs[a] * cplx(std::cos(v * xs[a]), std::sin(v * xs[a]));
        }
      }
      const double w = std::pow(v / rho, p0) - 1.0;
      acc += (hh * f * w) * chi_weight_at(v, dir.S);
    }
    for (int p = p0; p <= p0 + 1; ++p) {
      const cplx coef = ipow(p) * M[static_cast<std::size_t>(p - p0)] / factorial(p);
      const CMatrix Xp = scalar_ ? CMatrix(dir.S / (p - 2.0 * H_scalar_))
                                 : shifted_lyapunov(0.5 * p, dir.S);
      acc -= coef * std::pow(v_lo, p) * chi_weight_at(v_lo, Xp);
    }
    total += acc;
  }
  return total;
}

CMatrix RadialIntegrator::chi_weight_at(double r, const CMatrix& S) const {
  if (scalar_) return std::pow(r, -2.0 * H_scalar_) * S;
  const CMatrix P = neg_pow(r);
  return P * S * P.adjoint();
}

}  // namespace irfk
