#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "dist.hpp"
#include "doctest.h"

using namespace slb;
using namespace slb::dist;

namespace {

double ecf(const std::vector<double>& xs, double xi) {
  double s = 0.0;
  for (double x : xs) s += std::cos(xi * x);
  return s / double(xs.size());
}

double ks_stat(std::vector<double> xs,
               const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max(d, std::abs(F - double(i) / n));
    d = std::max(d, std::abs(F - double(i + 1) / n));
  }
  return d;
}

}  // namespace

TEST_CASE("closed-form characteristic functions of stable laws") {
  auto cauchy2 = StableLaw::rotational(1.0, 2);
  CHECK(cf_eval(cauchy2, {0.6, 0.8}).real() ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(cf_eval(cauchy2, {0.0, 0.0}).real() == 1.0);

  auto unit = StableLaw::unit(1.5);
  CHECK(cf_eval(unit, {1.3}).real() ==
        doctest::Approx(std::exp(-std::pow(1.3, 1.5))).epsilon(1e-12));
  CHECK(cf_eval(unit, {0.0}).real() == 1.0);

  auto rot = StableLaw::rotational(1.5, 2);
  CHECK(cf_eval(rot, {0.6, 0.8}).real() ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

  levy::SphericalMeasure lam;
  lam.atoms = {{{1.0, 0.0}, 0.5}, {{-1.0, 0.0}, 0.5},
               {{0.0, 1.0}, 0.5}, {{0.0, -1.0}, 0.5}};
  auto spec = StableLaw::with_spectral(1.5, 2, lam);
  const double want =
      std::exp(-(std::pow(0.7, 1.5) + std::pow(0.2, 1.5)));
  CHECK(cf_eval(spec, {0.7, 0.2}).real() ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("degenerate spectral measures are rejected") {
  levy::SphericalMeasure lam;
  lam.atoms = {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}};
  CHECK_THROWS_AS((void)StableLaw::with_spectral(1.5, 2, lam),
                  ValidationError);
  levy::SphericalMeasure asym;
  asym.atoms = {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{-1.0, 0.0}, 1.0},
                {{0.0, -1.0}, 2.0}};
  CHECK_THROWS_AS((void)StableLaw::with_spectral(1.5, 2, asym),
                  ValidationError);
}

TEST_CASE("one-sided Pareto characteristic function (rotated contour)") {
  // Frozen oracle (30-digit quadrature of the defining integral).
  const auto phi = pareto_cf(1.5, 0.7);
  CHECK(std::abs(phi.real() - 0.643200727116868227) <= 1e-10);
  CHECK(std::abs(phi.imag() - 0.358469492760803217) <= 1e-10);
  CHECK(pareto_cf(1.5, -0.7) == std::conj(phi));
  CHECK(pareto_cf(1.5, 0.0) == std::complex<double>{1.0, 0.0});

  auto law = InitialLaw::pareto_symmetrized(1.5);
  CHECK(std::abs(cf_eval(law, 0.7).real() - 0.542207552603855536) <= 1e-10);
  CHECK(cf_eval(law, 0.7).imag() == 0.0);
}

TEST_CASE("layered cf matches a brute-force Riemann evaluation") {
  auto law = InitialLaw::layered(1.5, 1.8);
  const double xi = 2.0;
  double brute = 0.0;
  const int N = 400000;
  const double lo = 1e-9, hi = 2e3;
  const double ratio = std::pow(hi / lo, 1.0 / N);
  double r = lo;
  auto k = [](double r) {
    return r <= 1.0 ? std::pow(r, -1.8) : std::pow(r, -1.5);
  };
  for (int i = 0; i < N; ++i) {
    const double rn = r * ratio, rm = std::sqrt(r * rn);
    const double s = std::sin(0.5 * rm * xi);
    brute += 2.0 * (-2.0 * s * s) * k(rm) / rm * (rn - r);
    r = rn;
  }
  brute -= xi * xi * std::pow(lo, 0.2) / 0.2;
  brute -= 2.0 * std::pow(hi, -1.5) / 1.5;
  CHECK(std::abs(cf_eval(law, xi).real() - std::exp(brute)) <= 1e-6);
}

TEST_CASE("Fourier inversion reproduces the Cauchy density to 1e-8") {
  auto law = StableLaw::rotational(1.0, 1);
  auto g = density_1d(law, GridSpec{25.0, 5001});
  double worst = 0.0;
  for (std::size_t j = 0; j < g.xs.size(); ++j) {
    const double x = g.xs[j];
    if (std::abs(x) > 20.0) continue;
    worst = std::max(worst,
                     std::abs(g.ps[j] - 1.0 / (kPi * (1.0 + x * x))));
  }
  CHECK(worst <= 1e-8);
  // Symmetry is exact by construction.
  for (std::size_t j = 0; j < g.xs.size(); ++j)
    CHECK(g.ps[j] == g.ps[g.xs.size() - 1 - j]);
}

TEST_CASE("alpha=1.5 density values, normalization and tail mass") {
  auto law = StableLaw::unit(1.5);
  auto g = density_1d(law, GridSpec{40.0, 16001});
  const long mid = 8000;
  // Frozen oracles: p(0) = Gamma(1+1/alpha)/pi, p(1), p(2) by 30-digit
  // inversion of exp(-xi^1.5).
  CHECK(std::abs(g.ps[mid] - 0.287352751452164445) <= 1e-9);
  CHECK(std::abs(g.ps[mid + 200] - 0.202038159607840130) <= 1e-9);
  CHECK(std::abs(g.ps[mid + 400] - 0.084539623126137520) <= 1e-9);
  for (double p : g.ps) CHECK(p >= 0.0);
  CHECK(std::abs(g.mass() - 1.0) <= 1e-6);
}

TEST_CASE("quantiles: closed-form Cauchy and frozen alpha=1.5 oracle") {
  auto cauchy = StableLaw::rotational(1.0, 1);
  CHECK(std::abs(quantile_1d(cauchy, 0.75) - 1.0) <= 2e-6);
  CHECK(std::abs(quantile_1d(cauchy, 0.5)) <= 1e-8);

  auto unit = StableLaw::unit(1.5);
  // CDF(x) = 0.99 solved to 30 digits: x = 7.73644620648541856.
  CHECK(std::abs(quantile_1d(unit, 0.99) - 7.73644620648541856) <= 1e-5);

  auto g = density_1d(unit, GridSpec{40.0, 16001});
  for (double p = 0.05; p < 0.96; p += 0.05)
    CHECK(std::abs(g.cdf_at(g.quantile(p)) - p) <= 1e-6);
}

TEST_CASE("deep tail quantiles invert the power tail model") {
  auto unit = StableLaw::unit(1.5);
  const double q = quantile_1d(unit, 1.0 - 1e-6);
  // P(X > x) ~ A x^{-1.5} with A = Gamma(1.5) sin(3 pi/4)/pi.
  const double A = std::tgamma(1.5) * std::sin(0.75 * kPi) / kPi;
  CHECK(q == doctest::Approx(std::pow(A / 1e-6, 1.0 / 1.5)).epsilon(1e-2));
}

TEST_CASE("sampling is seed-deterministic") {
  auto law = StableLaw::unit(1.5);
  auto b1 = sample(law, 1000, 42);
  auto b2 = sample(law, 1000, 42);
  CHECK(b1.values == b2.values);
  auto b3 = sample(law, 1000, 43);
  CHECK(b1.values != b3.values);
  // Prefix stability: index-keyed streams do not depend on n.
  auto b4 = sample(law, 500, 42);
  CHECK(std::equal(b4.values.begin(), b4.values.end(), b1.values.begin()));
}

TEST_CASE("CMS sampler matches the unit-exponent cf") {
  auto law = StableLaw::unit(1.5);
  auto b = sample(law, 200000, 7);
  const double band = 4.0 / std::sqrt(double(b.n));
  CHECK(std::abs(ecf(b.values, 1.0) - std::exp(-1.0)) <= band);
  CHECK(std::abs(ecf(b.values, 0.5) - std::exp(-std::pow(0.5, 1.5))) <= band);
}

TEST_CASE("Kolmogorov-Smirnov: Cauchy draws against the arctan CDF") {
  auto law = StableLaw::rotational(1.0, 1);
  auto b = sample(law, 100000, 11);
  const double d = ks_stat(
      b.values, [](double x) { return 0.5 + std::atan(x) / kPi; });
  CHECK(d <= 1.95 / std::sqrt(double(b.n)));
}

TEST_CASE("stability in law: (X1+X2)/2^{1/alpha} vs X (two-sample KS)") {
  const double alpha = 1.5;
  auto law = StableLaw::unit(alpha);
  auto a = sample(law, 50000, 21);
  auto b = sample(law, 50000, 22);
  auto c = sample(law, 50000, 23);
  std::vector<double> sum(a.values.size());
  for (std::size_t i = 0; i < sum.size(); ++i)
    sum[i] = (a.values[i] + b.values[i]) / std::pow(2.0, 1.0 / alpha);
  std::sort(sum.begin(), sum.end());
  std::vector<double> ref = c.values;
  std::sort(ref.begin(), ref.end());
  // Two-sample KS via the empirical CDF of the reference sample.
  double d = 0.0;
  const double n = double(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double F =
        double(std::lower_bound(ref.begin(), ref.end(), sum[i]) -
               ref.begin()) /
        n;
    d = std::max(d, std::abs(F - double(i) / n));
  }
  CHECK(d <= 1.36 * std::sqrt(2.0 / n));
}

TEST_CASE("rotational d=2 sampler matches its cf") {
  auto law = StableLaw::rotational(1.5, 2);
  auto b = sample(law, 200000, 5);
  double s = 0.0;
  for (long i = 0; i < b.n; ++i) s += std::cos(b.values[2 * i]);
  s /= double(b.n);
  CHECK(std::abs(s - std::exp(-0.5)) <= 4.0 / std::sqrt(double(b.n)));

  auto cau = StableLaw::rotational(1.0, 2);
  auto bc = sample(cau, 200000, 5);
  s = 0.0;
  for (long i = 0; i < bc.n; ++i)
    s += std::cos(0.6 * bc.values[2 * i] + 0.8 * bc.values[2 * i + 1]);
  s /= double(bc.n);
  CHECK(std::abs(s - std::exp(-1.0)) <= 4.0 / std::sqrt(double(bc.n)));
}

TEST_CASE("pareto-symmetrized sample is centered") {
  auto law = InitialLaw::pareto_symmetrized(1.5);
  auto b = sample(law, 100000, 3);
  std::vector<double> v = b.values;
  std::sort(v.begin(), v.end());
  const double med = v[v.size() / 2];
  const double iqr = v[3 * v.size() / 4] - v[v.size() / 4];
  CHECK(std::abs(med) <= 3.0 * iqr / std::sqrt(double(b.n)));
}

TEST_CASE("partial_sum with n=1, bn=1 reduces to sample") {
  auto law = InitialLaw::pareto_symmetrized(1.5);
  auto s = sample(law, 2000, 9);
  auto ps = partial_sum(law, 1, 2000, 9, 1.0);
  CHECK(s.values == ps.values);
}

TEST_CASE("canonical-stable partial sum uses the exact law a_n X_alpha") {
  auto law = InitialLaw::canonical_stable(1.5);
  const long n = 12;
  auto ps = partial_sum(law, n, 100000, 17);
  const double an = levy::weight_stable_canonical(n, 1.5).a_n;
  const double band = 4.0 / std::sqrt(double(ps.n));
  const double want = std::exp(-std::pow(an, 1.5));
  CHECK(std::abs(ecf(ps.values, 1.0) - want) <= band);
}

TEST_CASE("pareto partial sums approach the stable target cf") {
  auto law = InitialLaw::pareto_symmetrized(1.5);
  const double l1 = levy::stable_constants(1.5, 1).lambda1_alpha;
  // Exact cf of S_n at xi: (|phi_P(lambda1 n^{-1/alpha} xi)|^2)^n.
  auto exact = [&](long n, double xi) {
    const double b = l1 * std::pow(double(n), -1.0 / 1.5);
    return std::pow(std::norm(pareto_cf(1.5, b * xi)), double(n));
  };
  double prev = kInf;
  for (long n : {4L, 16L, 64L, 256L}) {
    const double gap = std::abs(exact(n, 1.0) - std::exp(-1.0));
    CHECK(gap < prev);
    prev = gap;
  }
  // Monte Carlo track agrees with the exact cf within the CLT band.
  const long n = 64, B = 20000;
  auto ps = partial_sum(law, n, B, 29);
  CHECK(std::abs(ecf(ps.values, 1.0) - exact(n, 1.0)) <=
        4.0 / std::sqrt(double(B)));
}

TEST_CASE("layered partial-sum cf decreases toward the stable target") {
  auto law = InitialLaw::layered(1.5, 1.8);
  const double ca = levy::stable_constants(1.5, 1).c_alpha;
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 3.0};
  double prev = kInf;
  for (long n = 2; n <= 1024; n *= 4) {
    double sup = 0.0;
    for (double xi : grid) {
      const double psi =
          levy_exponent_1d(law, xi * std::pow(double(n), -1.0 / 1.5));
      sup = std::max(sup, std::abs(std::exp(double(n) * psi) -
                                   std::exp(-std::pow(xi, 1.5) / ca)));
    }
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("layered sampler matches its own cf") {
  auto law = InitialLaw::layered(1.5, 1.8);
  auto b = sample(law, 50000, 31);
  const double want = cf_eval(law, 1.0).real();
  CHECK(std::abs(ecf(b.values, 1.0) - want) <= 4.0 / std::sqrt(double(b.n)));
  CHECK_THROWS_AS((void)sample(InitialLaw::layered(1.5, 1.8, 2), 10, 0),
                  UnsupportedLaw);
}

TEST_CASE("SampleBatch binary round trip") {
  auto law = StableLaw::unit(1.5);
  auto b = sample(law, 257, 123);
  std::stringstream ss;
  b.write(ss);
  CHECK(ss.str().size() == 32 + 257 * 8);
  auto r = SampleBatch::read(ss);
  CHECK(r.d == b.d);
  CHECK(r.n == b.n);
  CHECK(r.seed == b.seed);
  CHECK(r.values == b.values);
  std::stringstream bad("XXXXXXXXgarbage");
  CHECK_THROWS_AS((void)SampleBatch::read(bad), IoError);
}

TEST_CASE("counter streams are uniform-range and index-keyed") {
  auto s1 = stream_for(1, "t", 0);
  auto s2 = stream_for(1, "t", 1);
  CHECK(s1.key != s2.key);
  for (int i = 0; i < 1000; ++i) {
    const double u = s1.u01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
