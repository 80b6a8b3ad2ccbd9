#include <doctest.h>

#include <cmath>

#include "irfk/covariance.hpp"
#include "irfk/errors.hpp"
#include "oracles.hpp"

using namespace irfk;

namespace {

Point pt(double x) { return Point::Constant(1, x); }

SelfSimilarModel scalar_model(double H, int k, double plus, double minus) {
  std::vector<SignedAngularAtom> atoms;
  if (plus > 0) atoms.push_back({pt(1), plus * CMatrix::Ones(1, 1)});
  if (minus > 0) atoms.push_back({pt(-1), minus * CMatrix::Ones(1, 1)});
  return SelfSimilarModel(1, k, 1, ScalarH{H}, AngularSpectralMeasure(1, 1, atoms));
}

FiniteMeasure second_difference(double x, double h) {
  return FiniteMeasure(1, {{pt(x + h), 1.0}, {pt(x), -2.0}, {pt(x - h), 1.0}});
}

}  // namespace

TEST_CASE("I and J match Gamma(-2H) e^{-i pi H}") {
  for (double H : {0.05, 0.1, 0.25, 0.3, 0.45, 0.55, 0.7, 0.9, 1.2, 1.7, 2.3, 2.8}) {
    const auto ij = ij_constants(H);
    const auto ref = oracle::ij_gamma(H);
    CHECK(ij.branch == IJBranch::NonInteger);
    CHECK(ij.I == doctest::Approx(ref.real()).epsilon(1e-10));
    CHECK(ij.J == doctest::Approx(ref.imag()).epsilon(1e-10));
  }
}

TEST_CASE("I and J match brute-force quadrature") {
  for (double H : {0.15, 0.3, 0.45, 0.6, 0.7, 0.85}) {
    const auto ij = ij_constants(H);
    const auto ref = oracle::ij_quadrature(H);
    CHECK(ij.I == doctest::Approx(ref.real()).epsilon(1e-7));
    CHECK(ij.J == doctest::Approx(ref.imag()).epsilon(1e-7));
  }
}

TEST_CASE("integer 2H is rejected and the branch constants are finite limits") {
  CHECK_THROWS_AS(ij_constants(0.5), IntegerTwoH);
  CHECK_THROWS_AS(ij_constants(1.0), IntegerTwoH);
  CHECK_THROWS_AS(ij_constants(-0.2), OutOfRange);
  CHECK(integer_branch_constant(1) == doctest::Approx(-M_PI / 2));
  CHECK(integer_branch_constant(2) == doctest::Approx(-M_PI / 4));
  // n = 1: I(H) tends to -pi/2 as 2H -> 1 while J diverges.
  CHECK(ij_constants(0.5 - 1e-7).I == doctest::Approx(-M_PI / 2).epsilon(1e-5));
  CHECK(ij_constants(1.0 - 1e-7).J == doctest::Approx(-M_PI / 4).epsilon(1e-5));
}

TEST_CASE("closed form is continuous across integer 2H") {
  for (int n : {1, 2, 3}) {
    const int k = n <= 1 ? 0 : 1;
    const auto nu = convolve_reflect(second_difference(0.9, 0.6), second_difference(0.2, 0.4));
    REQUIRE(annihilation_order(nu, 2 * k + 1) >= 2 * k + 1);
    for (bool one_sided : {false, true}) {
      const auto model_at = [&](double H) { return scalar_model(H, k, 1.0, one_sided ? 0.0 : 0.5); };
      const CMatrix exact = K_closed_form(nu, model_at(n / 2.0));
      for (double eps : {1e-4, -1e-4}) {
        const CMatrix near = K_closed_form(nu, model_at(n / 2.0 + eps));
        CHECK((near - exact).norm() <= 2e-3 * exact.norm());
      }
    }
  }
}

TEST_CASE("fBm identity for symmetric sigma") {
  for (double H : {0.3, 0.7}) {
    const double w = 0.8;
    const auto model = scalar_model(H, 0, w, w);
    const auto frame = build_frame(monomial_basis(1, 0), std::vector<Point>{pt(0.0)});
    const CovarianceEngine engine(model);
    const double I = oracle::ij_quadrature(H).real();
    for (double s : {-1.5, 0.3, 2.0}) {
      for (double t : {-0.7, 0.3, 1.1}) {
        const auto C = engine.cov(lambda_t(frame, pt(s)), lambda_t(frame, pt(t))).C(0, 0);
        const double expect = 2 * w * std::abs(I) *
                              (std::pow(std::abs(s), 2 * H) + std::pow(std::abs(t), 2 * H) -
                               std::pow(std::abs(s - t), 2 * H));
        CHECK(C.real() == doctest::Approx(expect).epsilon(1e-6));
        CHECK(std::abs(C.imag()) < 1e-12);
      }
    }
  }
}

TEST_CASE("closed form agrees with the accurate quadrature") {
  QuadratureOptions opt;
  for (int k = 0; k <= 1; ++k) {
    for (double H : {0.35, 0.8, k + 0.6}) {
      const auto model = scalar_model(H, k, 1.0, 0.3);
      const auto frame = build_frame(monomial_basis(1, k), 1);
      const auto probes = random_probes(frame, 3, 5);
      for (const auto& a : probes) {
        for (const auto& b : probes) {
          const CMatrix cf = CovarianceEngine(model).cov_closed_form(a, b).C;
          const CMatrix q = K_quadrature(a, b, model, opt).C;
          CHECK((cf - q).norm() <= 1e-4 * std::max(1e-12, cf.norm()));
        }
      }
    }
  }
}

TEST_CASE("cross-covariance is Hermitian in its arguments") {
  std::vector<SignedAngularAtom> atoms{{pt(1), CMatrix::Identity(2, 2)}};
  CMatrix S(2, 2);
  S << 1.0, cplx(0.1, 0.3), cplx(0.1, -0.3), 2.0;
  atoms.push_back({pt(-1), S});
  CMatrix H(2, 2);
  H << 0.3, 0.1, 0.0, 0.6;
  const SelfSimilarModel model(1, 0, 2, OperatorExponent(H), AngularSpectralMeasure(1, 2, atoms));
  const CovarianceEngine engine(model);
  const auto probes = random_probes(build_frame(monomial_basis(1, 0), 2), 3, 3);
  for (const auto& a : probes) {
    for (const auto& b : probes) {
      const CMatrix ab = engine.cov(a, b).C;
      const CMatrix ba = engine.cov(b, a).C;
      CHECK((ab - ba.adjoint()).norm() <= 1e-9 * ab.norm());
    }
  }
}

TEST_CASE("non-annihilating probes are rejected") {
  const auto model = scalar_model(0.4, 0, 1.0, 1.0);
  const auto d = FiniteMeasure::dirac(pt(1.0));
  CHECK_THROWS_AS(CovarianceEngine(model).cov(d, d), NotAnnihilating);
  CHECK_THROWS_AS(K_closed_form(FiniteMeasure(1, {{pt(1), 1.0}, {pt(0), -1.0}}), model), NotAnnihilating);
}

TEST_CASE("conditional PSD on scalar and operator models") {
  CHECK(cond_psd_check(scalar_model(0.4, 0, 1.0, 0.0), 10, 5, 1).ok);
  CHECK(cond_psd_check(scalar_model(1.3, 1, 1.0, 1.0), 10, 5, 2).ok);
  CMatrix H(2, 2);
  H << 0.3, 0.1, 0.0, 0.7;
  const SelfSimilarModel op(1, 0, 2, OperatorExponent(H),
                            AngularSpectralMeasure(1, 2, {{pt(1), CMatrix::Identity(2, 2)}}));
  CHECK(cond_psd_check(op, 5, 4, 3).ok);
}

TEST_CASE("conditional PSD detects an indefinite kernel") {
  // K(nu) = +sum c |x|^{2H} with H = 0.3 is conditionally negative definite.
  const KernelFn bad = [](const FiniteMeasure& nu) {
    cplx acc = 0.0;
    for (const auto& a : nu.atoms()) acc += a.weight * std::pow(std::abs(a.t(0)), 0.6);
    return CMatrix::Constant(1, 1, acc);
  };
  CHECK_FALSE(cond_psd_check(bad, 1, 0, 1, 5, 4, 1).ok);
}

TEST_CASE("reversibility gap reproduces the J-term") {
  const double H = 0.35;
  const auto sym = scalar_model(H, 0, 1.0, 1.0);
  const auto one = scalar_model(H, 0, 1.0, 0.0);
  const auto lam = FiniteMeasure(1, {{pt(0.7), 1.0}, {pt(0.0), -1.0}});
  const auto mu = FiniteMeasure(1, {{pt(-0.4), 1.0}, {pt(1.5), -1.0}});
  const auto nu = convolve_reflect(lam, mu);
  CHECK(reversibility_gap(sym, {nu}) <= 1e-12);
  double odd = 0.0;
  for (const auto& a : nu.atoms()) {
    const double x = a.t(0);
    odd += a.weight.real() * (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), 2 * H);
  }
  const double expect = 2.0 * std::abs(oracle::ij_gamma(H).imag() * odd);
  CHECK(reversibility_gap(one, {nu}) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("tangent defect shrinks with rho") {
  const auto model = scalar_model(0.4, 0, 1.0, 1.0);
  const CovarianceEngine engine(model);
  const auto lam = FiniteMeasure(1, {{pt(1.0), 1.0}, {pt(0.0), -1.0}});
  const auto nu = convolve_reflect(lam, lam);
  double prev = INFINITY;
  for (double rho : {10.0, 1.0, 0.1, 0.01}) {
    const double v = engine.tangent_defect(nu, rho).norm();
    CHECK(v < prev);
    prev = v;
  }
  // For small rho nu^ ~ |u|^2 on the head, so the defect scales like rho^{2 - 2H}.
  const double r1 = engine.tangent_defect(nu, 1e-3).norm();
  const double r2 = engine.tangent_defect(nu, 2e-3).norm();
  CHECK(std::log2(r2 / r1) == doctest::Approx(2.0 - 0.8).epsilon(0.01));
}
