#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dist.hpp"

namespace slb::metrics {

struct SortedSample {
  std::vector<double> values;

  static SortedSample from(std::vector<double> v);
  std::size_t size() const { return values.size(); }
};

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> exponent_ci{0.0, 0.0};
};

// Exact W1 between the two empirical measures (comonotone coupling);
// unequal sizes go through the piecewise-constant quantile functions.
double w1_two_sample(const SortedSample& x, const SortedSample& y);

// W1 estimate against a target law given by its quantile function,
// evaluated at the per-order-statistic midpoints (i+1/2)/n.
double w1_vs_quantile(const SortedSample& x,
                      const std::function<double(double)>& q);

// Deterministic quasi-uniform unit directions used by sliced_w1.
std::vector<std::vector<double>> sliced_directions(int d, int n_directions,
                                                   std::uint64_t seed);

// Average over quasi-uniform directions of the projected two-sample W1.
double sliced_w1(const dist::SampleBatch& x, const dist::SampleBatch& y,
                 int n_directions, std::uint64_t seed);

// max over the grid of |cf_a(w) - cf_b(w)| / max(1, w^2). The test battery
// cos(wx)/max(1,w^2), sin(wx)/max(1,w^2) has M0, M1, M2 <= 1, so this is a
// certified lower bound for the smooth 2-Wasserstein distance.
double cf_battery_distance(
    const std::function<std::complex<double>(double)>& cf_a,
    const std::function<std::complex<double>(double)>& cf_b,
    const std::vector<double>& omega_grid);

// Least squares of log(distance) on log(n); CI by residual bootstrap.
RateFit fit_rate(const std::vector<double>& ns,
                 const std::vector<double>& distances, long bootstrap = 400,
                 std::uint64_t seed = 1234);

// Median of a replicate set (heavy-tail variance control for rate studies).
double median_of(std::vector<double> v);

}  // namespace slb::metrics
