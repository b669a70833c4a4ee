#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "common.hpp"

namespace slb::spectral {

// Increasing truncation scales for the smooth cutoff family
// g_R(x) = x exp(-x^2 / R^2).
struct TruncationLadder {
  std::vector<double> scales{10.0, 20.0, 40.0, 80.0, 160.0};

  void validate() const;
};

// R-indexed values of one named quantity together with a least-squares
// extrapolation in 1/R (model c0 + c1/R + c2/R^2; limit = c0, residual =
// max deviation of the fitted model from the data).
struct SpectralReport {
  std::vector<double> scales;
  std::vector<double> values;
  double limit = 0.0;
  double residual = 0.0;
};

// g_R(x) and g_R'(x). Note the logarithmic-derivative identity
// x g_R'(x) = g_R(x) (1 - 2 x^2 / R^2).
std::pair<double, double> g_eval(double x, double R);

// Square root of the (negative) Laplacian applied to g_1, in closed form
// through Dawson's integral F:
//   a1rot_g1(x) = -(1 / (2 sqrt(pi))) (4 F(x) + 4 x - 8 x^2 F(x)),
// i.e. the inverse Fourier transform of -|xi| F[g_1](xi). The value for
// g_R follows from 1-homogeneity of the symbol: a1rot_g1(x / R).
double a1rot_g1(double x);

// The same operator applied to the standard Cauchy density on R^d:
//   p(x) (||x||^2 - d) / (1 + ||x||^2).
double a1rot_density(const std::vector<double>& x, int d);

// The 1D quadratures against the standard Cauchy weight that appear in the
// Rayleigh-quotient analysis of the cutoff family:
//   norm_sq     = ||g_R||^2
//   drift_sq    = ||x g_R'||^2
//   cross       = <x g_R', A g_R>
//   nonlocal_sq = ||A g_R||^2
//   form        = E(g_R, g_R) = 2 (<x g_R', g_R> - <A g_R, g_R>)
// where A is the square-root-of-the-Laplacian operator above.
struct CauchyGQuantities {
  double norm_sq = 0.0;
  double drift_sq = 0.0;
  double cross = 0.0;
  double nonlocal_sq = 0.0;
  double form = 0.0;
};
CauchyGQuantities cauchy_g_quantities(double R);

// ||L g_R + g_R||^2 / ||g_R||^2 with L f = -x f' + A f, per ladder scale,
// extrapolated. The limit is 3/4: -1 is not an approximate eigenvalue of
// the Cauchy Ornstein-Uhlenbeck generator along this family.
SpectralReport rayleigh_l1rot(const TruncationLadder& ladder);

// E(g_R, g_R) - ||g_R||^2 per ladder scale, extrapolated; the limit is
// 2/pi (drift part -> -1, nonlocal part -> (2 + pi)/pi).
SpectralReport form_minus_norm_cauchy(const TruncationLadder& ladder);

// Squared field operator of the Cauchy density against g_R:
//   Gamma(p, g_R)(x) = int (p(x+u) - p(x)) (g_R(x+u) - g_R(x)) du/(pi u^2),
// by quadrature split at |u| in {eps, 1, |x| + 1}; the u -> 0 region is
// bounded (integrand -> p'(x) g_R'(x) / pi).
double gamma1_p_g(double x, double R);

// The symmetrized ("carre de Mehler") generator applied to g_R:
//   L1(g_R)(x) = 2 A(g_R)(x) + Gamma(p, g_R)(x) / p(x).
// Pointwise L1(g_R)(x) -> -x as R grows.
double l1_apply_g(double x, double R);

// First report: ||g_R|| / ||L1 g_R|| (limit 1, so -1 sits in the
// approximate point spectrum of L1). Second: ||g_R||^2 - ||L1 g_R||^2
// (limit -4/pi).
std::pair<SpectralReport, SpectralReport> carre_diagnostics(
    const TruncationLadder& ladder);

// Poincare inequality data for the 1D symmetric alpha-stable law with
// cf exp(-|xi|^alpha) (alpha = 1 is the standard Cauchy): returns
//   variance = int (f - mean)^2 dmu
//   dirichlet_form = int int (f(x+u) - f(x))^2 nu(du) mu(dx)
// with nu(du) = c_alpha |u|^{-1-alpha} du (c_1 = 1/pi). The function is
// centered automatically; df is its derivative (used near u = 0).
struct PoincareResult {
  double variance = 0.0;
  double dirichlet_form = 0.0;
};
PoincareResult poincare_check(const std::function<double(double)>& f,
                              const std::function<double(double)>& df,
                              double alpha = 1.0);

// Weyl-sequence gap for alpha in (1, 2):
//   gap(R) = E(g_R, g_R) - ||g_R||^2_{L^2(mu_alpha)}
// with the form evaluated through the generator identity
// E = (2/alpha) (<x g_R', g_R> - <A_alpha g_R, g_R>), the nonlocal part
// applied in Fourier (symbol -alpha |xi|^alpha). The gap vanishes at rate
// R^{2 - 2 alpha}.
SpectralReport weyl_gap_alpha(const TruncationLadder& ladder, double alpha);

// Pointwise unit-exponent symmetric stable density (cf exp(-|xi|^alpha))
// for alpha in (0, 2): exact for alpha = 1 (standard Cauchy), otherwise a
// cached spline over the transform grid with the series tail beyond it.
double stable_density_1d(double alpha, double x);

// Density constant of the associated Levy measure: nu(du) = K |u|^{-1-alpha}
// du on each half line, fixed by int (cos(u xi) - 1) nu(du) = -|xi|^alpha
// (K = 1/pi at alpha = 1).
double levy_density_constant(double alpha);

// Least-squares fit of values(R) to c0 + c1/R + c2/R^2; returns
// (limit c0, max absolute fit deviation). Throws IllConditioned when fewer
// than 3 points are given or the normal equations are singular.
std::pair<double, double> extrapolate(const std::vector<double>& scales,
                                      const std::vector<double>& values);

}  // namespace slb::spectral
