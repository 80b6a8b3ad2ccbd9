#include "irfk/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace irfk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Inconclusive:
    default:
      return "inconclusive";
  }
}

double VerificationReport::detail(const std::string& name) const {
  for (const auto& [k, v] : details) {
    if (k == name) return v;
  }
  throw std::out_of_range("report has no detail named " + name);
}

// ---------------------------------------------------------------------------

VerificationReport check_self_similarity(const SelfSimilarModel& model,
                                         const std::vector<double>& c_values,
                                         const std::vector<FiniteMeasure>& probes,
                                         SelfSimilarityOptions options) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.check = "self_similarity";
  const CovarianceEngine engine(model);
  const bool closed = model.is_scalar();
  rep.threshold = closed ? options.closed_form_tolerance : options.quadrature_tolerance;
  std::vector<CMatrix> base(probes.size() * probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i; j < probes.size(); ++j) {
      base[i * probes.size() + j] = engine.cov(probes[i], probes[j]).C;
    }
  }
  for (double c : c_values) {
    const CMatrix cH = model.operator_H().pow(c);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto li = scale(probes[i], c);
      for (std::size_t j = i; j < probes.size(); ++j) {
        const CMatrix& C = base[i * probes.size() + j];
        const double denom = C.norm();
        if (denom == 0.0) continue;
        const CMatrix Cc = engine.cov(li, scale(probes[j], c)).C;
        const double e = (Cc - cH * C * cH.adjoint()).norm() / denom;
        if (e > rep.statistic) {
          rep.statistic = e;
          rep.witnesses = {"c=" + fmt(c) + " probes=(" + std::to_string(i) + "," +
                           std::to_string(j) + ")"};
        }
      }
    }
  }
  rep.details.emplace_back("closed_form", closed ? 1.0 : 0.0);
  rep.status = rep.statistic <= rep.threshold ? CheckStatus::Pass : CheckStatus::Fail;
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport check_intrinsic_stationarity(const SelfSimilarModel& model,
                                                const std::vector<Point>& shifts,
                                                const std::vector<FiniteMeasure>& probes,
                                                double tolerance) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.check = "intrinsic_stationarity";
  rep.threshold = tolerance;
  const CovarianceEngine engine(model);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i; j < probes.size(); ++j) {
      const CMatrix C = engine.cov(probes[i], probes[j]).C;
      for (std::size_t s = 0; s < shifts.size(); ++s) {
        const CMatrix Cw =
            engine.cov(translate(probes[i], shifts[s]), translate(probes[j], shifts[s])).C;
        const double e = (Cw - C).norm() / std::max(1.0, C.norm());
        if (e > rep.statistic) {
          rep.statistic = e;
          rep.witnesses = {"shift=" + std::to_string(s) + " probes=(" + std::to_string(i) + "," +
                           std::to_string(j) + ")"};
        }
      }
    }
  }
  rep.status = rep.statistic <= rep.threshold ? CheckStatus::Pass : CheckStatus::Fail;
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------

JackknifeEstimate jackknife_covariance(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  const std::size_t N = x.size();
  if (y.size() != N) throw std::invalid_argument("jackknife series differ in length");
  if (N < 3) throw std::invalid_argument("jackknife needs at least three replicates");
  cplx Sx = 0.0;
  cplx Sy = 0.0;
  cplx Sxy = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    Sx += x[i];
    Sy += y[i];
    Sxy += x[i] * std::conj(y[i]);
  }
  const double n = static_cast<double>(N);
  JackknifeEstimate est;
  est.value = (Sxy - Sx * std::conj(Sy) / n) / (n - 1.0);
  // Leave-one-out replicates of the same estimator.
  std::vector<cplx> loo(N);
  cplx mean = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const cplx sx = Sx - x[i];
    const cplx sy = Sy - y[i];
    const cplx sxy = Sxy - x[i] * std::conj(y[i]);
    loo[i] = (sxy - sx * std::conj(sy) / (n - 1.0)) / (n - 2.0);
    mean += loo[i];
  }
  mean /= n;
  double vr = 0.0;
  double vi = 0.0;
  for (const auto& l : loo) {
    vr += (l.real() - mean.real()) * (l.real() - mean.real());
    vi += (l.imag() - mean.imag()) * (l.imag() - mean.imag());
  }
  est.se_re = std::sqrt((n - 1.0) / n * vr);
  est.se_im = std::sqrt((n - 1.0) / n * vi);
  return est;
}

namespace {

std::vector<cplx> column(const FieldSample& s, int index) {
  std::vector<cplx> out(static_cast<std::size_t>(s.replicates));
  const int D = s.points * s.m;
  for (int n = 0; n < s.replicates; ++n) out[static_cast<std::size_t>(n)] = s.values[static_cast<std::size_t>(n) * D + index];
  return out;
}

struct EntryTally {
  int total = 0;
  int within3 = 0;
  double worst_z = 0.0;
  std::string worst;

  void add(double diff, double se, double floor, const std::string& where) {
    const double z = std::abs(diff) / std::max(se, floor);
    ++total;
    if (z <= 3.0) ++within3;
    if (z > worst_z) {
      worst_z = z;
      worst = where;
    }
  }
};

VerificationReport finish_mc(const std::string& name, const EntryTally& t, int replicates,
                             std::uint64_t seed, const MonteCarloOptions& options) {
  VerificationReport rep;
  rep.check = name;
  rep.threshold = options.max_se;
  rep.statistic = t.worst_z;
  const double frac = t.total > 0 ? static_cast<double>(t.within3) / t.total : 1.0;
  rep.details = {{"entries", static_cast<double>(t.total)},
                 {"fraction_within_3se", frac},
                 {"max_z", t.worst_z},
                 {"replicates", static_cast<double>(replicates)}};
  if (replicates < options.min_replicates) {
    rep.status = CheckStatus::Inconclusive;
    rep.witnesses = {"insufficient replicates: " + std::to_string(replicates) + " < " +
                     std::to_string(options.min_replicates)};
    return rep;
  }
  const bool ok = frac >= options.within_3se_fraction && t.worst_z <= options.max_se;
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok) rep.witnesses = {"seed=" + std::to_string(seed) + " " + t.worst};
  return rep;
}

}  // namespace

VerificationReport check_mc_covariance(const FieldSample& sample, const CMatrix& analytic,
                                       MonteCarloOptions options) {
  const auto t0 = Clock::now();
  const int D = sample.points * sample.m;
  if (analytic.rows() != D || analytic.cols() != D) {
    throw std::invalid_argument("analytic covariance does not match the sample shape");
  }
  EntryTally tally;
  if (sample.replicates >= 3) {
    const double floor = 1e-10 * std::max(1e-300, analytic.cwiseAbs().maxCoeff());
    std::vector<std::vector<cplx>> cols;
    for (int a = 0; a < D; ++a) cols.push_back(column(sample, a));
    for (int a = 0; a < D; ++a) {
      for (int b = a; b < D; ++b) {
        const auto est = jackknife_covariance(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
        const cplx diff = est.value - analytic(a, b);
        const std::string where = "entry (" + std::to_string(a) + "," + std::to_string(b) + ")";
        tally.add(diff.real(), est.se_re, floor, where + " re");
        if (!sample.real && a != b) tally.add(diff.imag(), est.se_im, floor, where + " im");
      }
    }
  }
  auto rep = finish_mc("mc_covariance", tally, sample.replicates, sample.seed, options);
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport check_intrinsic_stationarity_empirical(const FieldSample& a, const FieldSample& b,
                                                          MonteCarloOptions options) {
  const auto t0 = Clock::now();
  if (a.points != b.points || a.m != b.m) throw std::invalid_argument("samples differ in shape");
  const int D = a.points * a.m;
  EntryTally tally;
  const int N = std::min(a.replicates, b.replicates);
  if (N >= 3) {
    for (int i = 0; i < D; ++i) {
      for (int j = i; j < D; ++j) {
        const auto ea = jackknife_covariance(column(a, i), column(a, j));
        const auto eb = jackknife_covariance(column(b, i), column(b, j));
        const cplx diff = ea.value - eb.value;
        const double floor = 1e-10 * std::max({1e-300, std::abs(ea.value), std::abs(eb.value)});
        const std::string where = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
        tally.add(diff.real(), std::hypot(ea.se_re, eb.se_re), floor, where + " re");
        if (!(a.real && b.real) && i != j) {
          tally.add(diff.imag(), std::hypot(ea.se_im, eb.se_im), floor, where + " im");
        }
      }
    }
  }
  auto rep = finish_mc("intrinsic_stationarity_empirical", tally, N, a.seed, options);
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport check_tangent_convergence(const StationaryFieldSpec& spec,
                                             const std::vector<double>& r_ladder,
                                             const std::vector<FiniteMeasure>& probes,
                                             TangentOptions options) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.check = "tangent_convergence";
  rep.threshold = options.final_tolerance;
  const auto model = tangent_model(spec);
  for (const auto& p : probes) require_annihilating(p, spec.k, "probe");
  const CovarianceEngine engine(model);
  const std::size_t P = probes.size();
  const int m = model.m();

  std::vector<FiniteMeasure> nus;
  double tangent_norm2 = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = 0; j < P; ++j) {
      nus.push_back(convolve_reflect(probes[i], probes[j]));
      tangent_norm2 += engine.cov_quadrature(probes[i], probes[j]).C.squaredNorm();
    }
  }
  const double tangent_norm = std::sqrt(tangent_norm2);
  if (tangent_norm == 0.0) {
    rep.status = CheckStatus::Inconclusive;
    rep.witnesses = {"tangent covariance vanishes on the probe set"};
    return rep;
  }

  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (std::size_t l = 0; l < r_ladder.size(); ++l) {
    const double r = r_ladder[l];
    double d2 = 0.0;
    for (const auto& nu : nus) d2 += engine.tangent_defect(nu, r).squaredNorm();
    const double e = std::sqrt(d2) / tangent_norm;
    rep.details.emplace_back("e(" + fmt(r) + ")", e);
    if (!(e < prev)) {
      decreasing = false;
      rep.witnesses.push_back("e not decreasing at r=" + fmt(r));
    }
    prev = e;
    last = e;
  }
  (void)m;
  rep.statistic = last;
  const bool ok = decreasing && !r_ladder.empty() && last <= rep.threshold;
  if (!ok && last > rep.threshold) rep.witnesses.push_back("e(r_min)=" + fmt(last));
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport check_holder_scaling(const SelfSimilarModel& model, const std::vector<double>& lags,
                                        const Point& t0, HolderOptions options) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.check = "holder_scaling";
  const bool normal = model.operator_H().is_normal();
  rep.threshold = normal ? options.tolerance : options.non_normal_tolerance;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double h : lags) {
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  if (lags.size() < 2 || !(lo > 0.0) || std::log10(hi / lo) < options.min_decades) {
    rep.status = CheckStatus::Inconclusive;
    rep.witnesses = {"lag ladder needs >= 2 positive lags spanning " + fmt(options.min_decades) +
                     " decades"};
    return rep;
  }
  const double h_min = model.operator_H().min_real_eigenvalue();
  const double target = 2.0 * std::min(h_min, 1.0);

  const auto frame = build_frame(monomial_basis(model.d(), model.k()), 1ULL);
  const CovarianceEngine engine(model);
  Point dir = Point::Zero(model.d());
  dir(0) = 1.0;
  const auto base = lambda_t(frame, t0);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(lags.size());
  for (double h : lags) {
    const auto inc = lambda_t(frame, t0 + h * dir) - base;
    const double v = engine.cov(inc, inc).C.trace().real();
    const double x = std::log(h);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.statistic = std::abs(slope - target);
  rep.details = {{"slope", slope}, {"target", target}, {"normal", normal ? 1.0 : 0.0}};
  rep.status = rep.statistic <= rep.threshold ? CheckStatus::Pass : CheckStatus::Fail;
  if (!rep.passed()) rep.witnesses = {"slope=" + fmt(slope) + " target=" + fmt(target)};
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

VerificationReport check_reversibility(const SelfSimilarModel& model,
                                       const std::vector<FiniteMeasure>& probes, double tolerance) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.check = "reversibility";
  rep.threshold = tolerance;
  const CovarianceEngine engine(model);
  double scale = 0.0;
  for (const auto& nu : probes) scale = std::max(scale, engine.K(nu).norm());
  const double gap = reversibility_gap([&](const FiniteMeasure& nu) { return engine.K(nu); }, probes);
  const auto split = sym_antisym_split(model.sigma());
  const double sigma_a = split.second.max_norm();
  const bool reversible_gap = gap <= tolerance * std::max(1.0, scale);
  const bool reversible_sigma = sigma_a <= 1e-12 * std::max(1.0, model.sigma().as_signed().max_norm());
  rep.statistic = gap;
  rep.details = {{"gap", gap},
                 {"scale", scale},
                 {"sigma_a_norm", sigma_a},
                 {"reversible", reversible_gap ? 1.0 : 0.0}};
  // A nonzero sigma_a can still leave the probe set blind to it, so only a
  // nonzero gap with zero sigma_a is a contradiction.
  const bool consistent = reversible_sigma ? reversible_gap : true;
  rep.status = consistent ? CheckStatus::Pass : CheckStatus::Fail;
  if (!consistent) rep.witnesses = {"gap " + fmt(gap) + " with symmetric sigma"};
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport check_cond_psd(const SelfSimilarModel& model, int trials, int n_max,
                                  std::uint64_t seed) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.check = "cond_psd";
  const auto r = cond_psd_check(model, trials, n_max, seed);
  rep.statistic = r.min_eig;
  rep.threshold = -1e-8 * r.scale;
  rep.details = {{"min_eig", r.min_eig}, {"scale", r.scale}};
  rep.status = r.ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!r.ok) {
    rep.witnesses = {"seed=" + std::to_string(seed) + " trial=" + std::to_string(r.worst_trial)};
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

}  // namespace irfk
