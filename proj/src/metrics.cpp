#include "metrics.hpp"

#include <algorithm>
#include <cmath>

namespace slb::metrics {

SortedSample SortedSample::from(std::vector<double> v) {
  if (v.empty()) throw EmptySample("SortedSample: empty");
  for (double x : v)
    if (!std::isfinite(x)) throw ValidationError("SortedSample: non-finite");
  std::sort(v.begin(), v.end());
  return SortedSample{std::move(v)};
}

double w1_two_sample(const SortedSample& x, const SortedSample& y) {
  const std::size_t n = x.size(), m = y.size();
  if (n == 0 || m == 0) throw EmptySample("w1_two_sample: empty sample");
  if (n == m) {
    double tot = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      tot += std::abs(x.values[i] - y.values[i]);
    return tot / double(n);
  }
  // Piecewise-constant quantile functions: walk the merged breakpoints.
  double tot = 0.0, p = 0.0;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    const double pi = double(i + 1) / double(n);
    const double pj = double(j + 1) / double(m);
    const double pn = std::min(pi, pj);
    tot += (pn - p) * std::abs(x.values[i] - y.values[j]);
    p = pn;
    if (pi <= pn) ++i;
    if (pj <= pn) ++j;
  }
  return tot;
}

double w1_vs_quantile(const SortedSample& x,
                      const std::function<double(double)>& q) {
  const std::size_t n = x.size();
  if (n == 0) throw EmptySample("w1_vs_quantile: empty sample");
  double tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (double(i) + 0.5) / double(n);
    const double qi = q(p);
    if (!std::isfinite(qi))
      throw QuantileDomain("w1_vs_quantile: quantile not finite at p");
    tot += std::abs(x.values[i] - qi);
  }
  return tot / double(n);
}

std::vector<std::vector<double>> sliced_directions(int d, int n_directions,
                                                   std::uint64_t seed) {
  if (d < 1 || n_directions < 1)
    throw ValidationError("sliced_directions: d, n >= 1");
  std::vector<std::vector<double>> dirs;
  dirs.reserve(std::size_t(n_directions));
  if (d == 1) {
    for (int j = 0; j < n_directions; ++j) dirs.push_back({1.0});
    return dirs;
  }
  if (d == 2) {
    // Golden-angle Kronecker sequence on the half-circle, phase from seed.
    const double g = 0.61803398874989484820;
    dist::Stream st = dist::stream_for(seed, "sliced-phase", 0);
    const double phase = st.u01();
    for (int j = 0; j < n_directions; ++j) {
      const double t = kPi * std::fmod(phase + g * double(j + 1), 1.0);
      dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  // d >= 3: normalized Gaussian vectors from counter streams (deterministic).
  for (int j = 0; j < n_directions; ++j) {
    dist::Stream st = dist::stream_for(seed, "sliced-dir", std::uint64_t(j));
    std::vector<double> e(std::size_t(d), 0.0);
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (int i = 0; i < d; ++i) {
        e[std::size_t(i)] = st.normal();
        nrm += e[std::size_t(i)] * e[std::size_t(i)];
      }
      nrm = std::sqrt(nrm);
    } while (nrm == 0.0);
    for (int i = 0; i < d; ++i) e[std::size_t(i)] /= nrm;
    dirs.push_back(std::move(e));
  }
  return dirs;
}

double sliced_w1(const dist::SampleBatch& x, const dist::SampleBatch& y,
                 int n_directions, std::uint64_t seed) {
  if (x.d != y.d) throw DimensionMismatch("sliced_w1: dimension mismatch");
  if (x.n == 0 || y.n == 0) throw EmptySample("sliced_w1: empty batch");
  const auto dirs = sliced_directions(x.d, n_directions, seed);
  double tot = 0.0;
  std::vector<double> px(std::size_t(x.n)), py(std::size_t(y.n));
  for (const auto& e : dirs) {
    for (long i = 0; i < x.n; ++i) {
      double s = 0.0;
      for (int k = 0; k < x.d; ++k)
        s += e[std::size_t(k)] * x.values[std::size_t(i) * x.d + k];
      px[std::size_t(i)] = s;
    }
    for (long i = 0; i < y.n; ++i) {
      double s = 0.0;
      for (int k = 0; k < y.d; ++k)
        s += e[std::size_t(k)] * y.values[std::size_t(i) * y.d + k];
      py[std::size_t(i)] = s;
    }
    tot += w1_two_sample(SortedSample::from(px), SortedSample::from(py));
  }
  return tot / double(dirs.size());
}

double cf_battery_distance(
    const std::function<std::complex<double>(double)>& cf_a,
    const std::function<std::complex<double>(double)>& cf_b,
    const std::vector<double>& omega_grid) {
  if (omega_grid.empty())
    throw ValidationError("cf_battery_distance: empty grid");
  double worst = 0.0;
  for (double w : omega_grid) {
    if (!(w > 0.0))
      throw ValidationError("cf_battery_distance: omegas must be positive");
    const double gap = std::abs(cf_a(w) - cf_b(w)) / std::max(1.0, w * w);
    worst = std::max(worst, gap);
  }
  return worst;
}

namespace {
struct Ols {
  double slope, intercept, r2;
  std::vector<double> residuals;
};

Ols ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  Ols o;
  o.slope = sxy / sxx;
  o.intercept = my - o.slope * mx;
  double sse = 0.0;
  o.residuals.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    o.residuals[i] = ys[i] - (o.intercept + o.slope * xs[i]);
    sse += o.residuals[i] * o.residuals[i];
  }
  o.r2 = (syy > 0.0) ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  return o;
}
}  // namespace

double median_of(std::vector<double> v) {
  if (v.empty()) throw EmptySample("median_of: empty");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RateFit fit_rate(const std::vector<double>& ns,
                 const std::vector<double>& distances, long bootstrap,
                 std::uint64_t seed) {
  if (ns.size() != distances.size())
    throw ValidationError("fit_rate: length mismatch");
  if (ns.size() < 4) throw ValidationError("fit_rate: need >= 4 points");
  std::vector<double> xs(ns.size()), ys(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0)) throw ValidationError("fit_rate: n must be positive");
    if (!(distances[i] > 0.0))
      throw NonPositiveDistance("fit_rate: distances must be positive");
    xs[i] = std::log(ns[i]);
    ys[i] = std::log(distances[i]);
  }
  const Ols base = ols(xs, ys);
  RateFit fit;
  fit.exponent = base.slope;
  fit.intercept = base.intercept;
  fit.r_squared = base.r2;
  // Residual bootstrap for the exponent CI.
  std::vector<double> boots;
  boots.reserve(std::size_t(bootstrap));
  std::vector<double> yb(ys.size());
  for (long b = 0; b < bootstrap; ++b) {
    dist::Stream st = dist::stream_for(seed, "rate-bootstrap",
                                       std::uint64_t(b));
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const std::size_t j =
          std::min<std::size_t>(std::size_t(st.u01() * double(ys.size())),
                                ys.size() - 1);
      yb[i] = base.intercept + base.slope * xs[i] + base.residuals[j];
    }
    boots.push_back(ols(xs, yb).slope);
  }
  std::sort(boots.begin(), boots.end());
  if (!boots.empty()) {
    const std::size_t lo = std::size_t(0.025 * double(boots.size()));
    const std::size_t hi =
        std::min(boots.size() - 1, std::size_t(0.975 * double(boots.size())));
    fit.exponent_ci = {std::min(boots[lo], fit.exponent),
                       std::max(boots[hi], fit.exponent)};
  } else {
    fit.exponent_ci = {fit.exponent, fit.exponent};
  }
  return fit;
}

}  // namespace slb::metrics
