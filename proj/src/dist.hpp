#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levy.hpp"

namespace slb::dist {

// Two stable normalizations coexist: the unit-exponent 1D convention
// (cf = exp(-|xi|^alpha)) and the rotationally invariant one
// (cf = exp(-||xi||^alpha / 2) for alpha != 1, and cf = exp(-||xi||) for the
// standard Cauchy alpha = 1). Every law carries its tag; mixing them silently
// is the main correctness hazard.
enum class Normalization { unit_exponent, rotational, spectral };

struct StableLaw {
  double alpha = 1.5;
  int d = 1;
  Normalization norm = Normalization::unit_exponent;
  levy::SphericalMeasure lambda;  // spectral measure (atoms), spectral kind

  static StableLaw unit(double alpha);               // d = 1
  static StableLaw rotational(double alpha, int d);  // standard Cauchy at 1
  static StableLaw with_spectral(double alpha, int d,
                                 levy::SphericalMeasure lambda);
  void validate() const;
  std::string tag() const;
};

enum class InitialKind {
  pareto_symmetrized,
  layered,
  canonical_stable,
  canonical_sd
};

struct InitialLaw {
  InitialKind kind = InitialKind::canonical_stable;
  double alpha = 1.5;
  double beta = 0.0;  // layered only
  int d = 1;
  levy::KFunction k;  // canonical_sd only

  static InitialLaw pareto_symmetrized(double alpha);
  static InitialLaw layered(double alpha, double beta, int d = 1);
  static InitialLaw canonical_stable(double alpha);
  static InitialLaw canonical_sd(levy::KFunction k);
  void validate() const;
  std::string tag() const;
};

struct SampleBatch {
  int d = 1;
  long n = 0;
  std::uint64_t seed = 0;
  std::string law_tag;
  std::vector<double> values;  // n x d, row-major

  void write(std::ostream& os) const;
  static SampleBatch read(std::istream& is);
};

struct GridSpec {
  double xmax = 40.0;
  long m = 16385;  // points over [-xmax, xmax]
};

// Equally spaced density table with a power tail model
// P(X > x) ~ tail_amp * x^{-tail_exponent} beyond the grid.
struct DensityGrid {
  std::vector<double> xs, ps, cdf;
  double tail_exponent = 0.0;
  double tail_amp = 0.0;

  double cdf_at(double x) const;
  double quantile(double p) const;
  double mass() const;  // trapezoid mass plus tail mass
};

std::complex<double> cf_eval(const StableLaw& law,
                             const std::vector<double>& xi);
std::complex<double> cf_eval(const InitialLaw& law, double xi);

// Characteristic function of the one-sided Pareto density
// alpha (1+x)^{-alpha-1} on (0, inf), evaluated by a rotated-contour
// quadrature (non-oscillatory).
std::complex<double> pareto_cf(double alpha, double xi);

// Lévy exponent psi of a 1D initial law, so that cf = exp(psi); defined for
// the infinitely divisible kinds (layered, canonical_stable, canonical_sd).
double levy_exponent_1d(const InitialLaw& law, double xi);

DensityGrid density_1d(const StableLaw& law, const GridSpec& spec = {});
DensityGrid density_1d(const InitialLaw& law, const GridSpec& spec = {});

// Builds (and internally caches) the law's DensityGrid, then inverts the CDF.
double quantile_1d(const StableLaw& law, double p);

SampleBatch sample(const StableLaw& law, long n, std::uint64_t seed);
SampleBatch sample(const InitialLaw& law, long n, std::uint64_t seed);

// batch_count realizations of S_n = b_n sum_{k<=n} X_k. Default b_n:
// lambda_1(alpha) n^{-1/alpha} for pareto_symmetrized, n^{-1/alpha}
// otherwise; canonical_stable shortcuts through the exact law a_n X_alpha.
SampleBatch partial_sum(const InitialLaw& law, long n, long batch_count,
                        std::uint64_t seed,
                        std::optional<double> bn = std::nullopt);

// Counter-based per-sample stream: draws depend only on (seed, tag, index),
// so parallel generation is reproducible independently of scheduling.
struct Stream {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  double u01();     // uniform on (0,1)
  double exp1();    // standard exponential
  double normal();  // standard normal
};

Stream stream_for(std::uint64_t seed, const std::string& tag,
                  std::uint64_t index);

}  // namespace slb::dist
