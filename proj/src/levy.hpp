#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quad.hpp"

namespace slb::levy {

// Radial profile k(r) of a self-decomposable Lévy measure in polar form
// nu(du) = k(r)/r dr sigma(dy). Breakpoints mark kinks the quadrature must
// split at (e.g. the layered crossover).
struct KFunction {
  std::function<double(double)> eval;
  std::optional<double> declared_tail_exponent;  // r^a k(r) -> const at inf
  bool monotone_flag = false;
  std::vector<double> breakpoints;
};

// k(r) = c / r^alpha (scale-invariant stable profile)
KFunction k_stable(double alpha, double c = 1.0);
// k(r) = r^{-beta} on (0,1], r^{-alpha} on (1,inf) (layered profile)
KFunction k_layered(double alpha, double beta);

struct SphericalMeasure {
  struct Atom {
    std::vector<double> dir;  // unit vector
    double weight;
  };
  bool uniform = false;
  double total_mass = 0.0;  // for uniform kind
  std::vector<Atom> atoms;
  bool symmetric_flag = true;

  double mass() const;
  void validate(int d) const;
};

// The +/-e1 pair in d = 1 with weight w on each atom.
SphericalMeasure sphere_pm1(double w);

struct LevyMeasure {
  int d = 1;
  SphericalMeasure spherical;
  KFunction k;
};

// 1D symmetric alpha-stable Lévy measure normalized so the Lévy exponent is
// exactly -|xi|^alpha (k = c_alpha/r^alpha, atoms +/-1 with weight 1).
LevyMeasure nu_stable_1d(double alpha);

struct WeightFunction {
  std::function<double(double)> eval;
  std::string label;
  std::vector<double> breakpoints;
};

struct StableConstants {
  double c_alpha;        // alpha(1-alpha) / (2 Gamma(2-alpha) cos(alpha pi/2))
  double lambda1_alpha;  // ((1-alpha)/(2 Gamma(2-alpha) cos(alpha pi/2)))^{1/alpha}
  double c_alpha_d;      // rotational normalization constant
  double c_d;            // Gamma((d+1)/2) / pi^{(d+1)/2} (Cauchy density constant)
  double c_prime_d;      // equals c_d
};

// Throws OutOfRange outside alpha in (0,2); c_alpha/lambda1 require (1,2).
StableConstants stable_constants(double alpha, int d);

enum class Centering { none, full, unit_ball };

// int (e^{i<u,xi>} - 1 - i<u,xi>[centering]) nu(du) as a radial quadrature
// per spherical atom.
std::complex<double> levy_exponent(const LevyMeasure& nu,
                                   const std::vector<double>& xi,
                                   Centering centering);

// omega_n(r) = (k(nr/(n+1)) - k(nr)) / k(r)
WeightFunction weight_canonical(long n, const KFunction& k);

struct StableCanonicalWeight {
  double omega_n;  // (1+1/n)^alpha - n^{-alpha}
  double a_n;      // omega_n^{1/alpha}
};
StableCanonicalWeight weight_stable_canonical(long n, double alpha);

// omega(r) = n^{1-beta/alpha} r^{alpha-beta} on (0, n^{-1/alpha}], else 1.
WeightFunction weight_layered(long n, double alpha, double beta);

WeightFunction weight_sum(const WeightFunction& w1, const WeightFunction& w2);

enum class Region { inside, outside, all };

// sigma(S^{d-1}) * int r^p omega(r) k(r)/r dr over the radial region.
// Throws Divergent when the integral blows up at an endpoint.
double moment_integral(const LevyMeasure& nu, double p, Region region,
                       const WeightFunction* weight = nullptr);

// The three integrals driving the stability bound:
//   ( int_{r<=1} r^2 |omega-1| nu,  int_{r>=1} r |omega-1| nu,
//     int_{r>=1} |omega-1| nu )
std::array<double, 3> omega_error_integrals(const WeightFunction& weight,
                                            const LevyMeasure& nu_alpha);

enum class BoundStudy {
  canonical_sd,
  canonical_stable,
  layered_stable,
  layered_cauchy
};

struct BoundParams {
  double alpha = 1.5;
  double beta = 1.8;
  double second_moment = 1.0;  // int ||u||^2 nu for canonical-sd
};

// Explicit right-hand sides of the quantitative theorems, reported "up to
// C_{alpha,d}" which is not explicit in the source results.
double bound_eval(BoundStudy study, long n, const BoundParams& params,
                  double C_alpha_d = 1.0);

// (f1*f1)(x)/f1(x) for the one-sided Pareto density
// f1(x) = alpha/(1+x)^{alpha+1}; tends to 2 at infinity (subexponentiality).
double pareto_selfconv_ratio(double alpha, double x);

}  // namespace slb::levy
