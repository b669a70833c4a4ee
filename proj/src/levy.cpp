#include "levy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slb::levy {
namespace {

const quad::QuadSpec kTightSpec{1e-12, 1e-12, 6000, 15};

// Split [lo, hi] at the breakpoints of k and omega and integrate piecewise.
double radial_quad(const std::function<double(double)>& f, double lo,
                   double hi, const std::vector<double>& breaks,
                   const quad::QuadSpec& spec = kTightSpec) {
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  // Decade cuts keep the adaptive rule efficient on wide power-law ranges.
  for (double c = 1e-6; c < hi; c *= 10.0)
    if (c > lo && c < hi) cuts.push_back(c);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += quad::integrate(f, cuts[i], cuts[i + 1], spec).value;
  return total;
}

// Estimate the local power exponent of g near zero (g ~ r^s) to detect
// non-integrable endpoints before handing the integrand to the quadrature.
double exponent_near_zero(const std::function<double(double)>& g) {
  const double r1 = 1e-7, r2 = 1e-6;
  const double g1 = std::abs(g(r1)), g2 = std::abs(g(r2));
  if (g1 == 0.0 || g2 == 0.0) return 0.0;
  return std::log(g2 / g1) / std::log(r2 / r1);
}

double exponent_near_inf(const std::function<double(double)>& g) {
  const double r1 = 1e6, r2 = 1e7;
  const double g1 = std::abs(g(r1)), g2 = std::abs(g(r2));
  if (g1 == 0.0 || g2 == 0.0) return -kInf;
  return std::log(g2 / g1) / std::log(r2 / r1);
}

}  // namespace

KFunction k_stable(double alpha, double c) {
  if (alpha <= 0 || alpha >= 2) throw OutOfRange("k_stable: alpha in (0,2)");
  KFunction k;
  k.eval = [alpha, c](double r) { return c * std::pow(r, -alpha); };
  k.declared_tail_exponent = alpha;
  k.monotone_flag = true;
  return k;
}

KFunction k_layered(double alpha, double beta) {
  if (!(beta > alpha)) throw OutOfRange("k_layered: beta > alpha required");
  KFunction k;
  k.eval = [alpha, beta](double r) {
    return (r <= 1.0) ? std::pow(r, -beta) : std::pow(r, -alpha);
  };
  k.declared_tail_exponent = alpha;
  k.monotone_flag = true;
  k.breakpoints = {1.0};
  return k;
}

double SphericalMeasure::mass() const {
  if (uniform) return total_mass;
  return std::accumulate(atoms.begin(), atoms.end(), 0.0,
                         [](double s, const Atom& a) { return s + a.weight; });
}

void SphericalMeasure::validate(int d) const {
  if (uniform) {
    if (total_mass <= 0) throw ValidationError("spherical: mass must be > 0");
    return;
  }
  for (const auto& a : atoms) {
    if (static_cast<int>(a.dir.size()) != d)
      throw ValidationError("spherical atom dimension mismatch");
    double n2 = 0;
    for (double v : a.dir) n2 += v * v;
    if (std::abs(n2 - 1.0) > 1e-12)
      throw ValidationError("spherical atom not unit-norm");
    if (a.weight <= 0) throw ValidationError("spherical atom weight <= 0");
  }
  if (symmetric_flag) {
    for (const auto& a : atoms) {
      bool found = false;
      for (const auto& b : atoms) {
        bool neg = true;
        for (size_t i = 0; i < a.dir.size(); ++i)
          if (std::abs(a.dir[i] + b.dir[i]) > 1e-12) neg = false;
        if (neg && std::abs(a.weight - b.weight) <= 1e-12) found = true;
      }
      if (!found)
        throw ValidationError("symmetric_flag set but atoms not paired");
    }
  }
}

SphericalMeasure sphere_pm1(double w) {
  SphericalMeasure s;
  s.atoms = {{{1.0}, w}, {{-1.0}, w}};
  s.symmetric_flag = true;
  return s;
}

LevyMeasure nu_stable_1d(double alpha) {
  const double c = stable_constants(alpha, 1).c_alpha;
  return LevyMeasure{1, sphere_pm1(1.0), k_stable(alpha, c)};
}

StableConstants stable_constants(double alpha, int d) {
  if (!(alpha > 0 && alpha < 2))
    throw OutOfRange("stable_constants: alpha in (0,2) required");
  if (d < 1) throw OutOfRange("stable_constants: d >= 1 required");
  StableConstants sc{};
  const double cd = std::tgamma((d + 1) / 2.0) /
                    std::pow(kPi, (d + 1) / 2.0);
  sc.c_d = cd;
  sc.c_prime_d = cd;
  if (alpha > 1.0) {
    const double denom = 2.0 * std::tgamma(2.0 - alpha) *
                         std::cos(alpha * kPi / 2.0);
    sc.c_alpha = alpha * (1.0 - alpha) / denom;
    sc.lambda1_alpha = std::pow((1.0 - alpha) / denom, 1.0 / alpha);
    sc.c_alpha_d = alpha * (1.0 - alpha) * std::tgamma((alpha + d) / 2.0) /
                   (4.0 * std::cos(alpha * kPi / 2.0) *
                    std::tgamma((alpha + 1) / 2.0) *
                    std::pow(kPi, (d - 1) / 2.0) * std::tgamma(2.0 - alpha));
  } else {
    sc.c_alpha = std::nan("");
    sc.lambda1_alpha = std::nan("");
    sc.c_alpha_d = std::nan("");
  }
  return sc;
}

namespace {
// sin(x) - x without cancellation near zero.
double sin_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    // Taylor: -x^3/6 (1 - x^2/20 (1 - x^2/42 (1 - x^2/72)))
    return -x * x2 / 6.0 *
           (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return std::sin(x) - x;
}
}  // namespace

std::complex<double> levy_exponent(const LevyMeasure& nu,
                                   const std::vector<double>& xi,
                                   Centering centering) {
  if (static_cast<int>(xi.size()) != nu.d)
    throw ValidationError("levy_exponent: xi dimension mismatch");
  if (nu.spherical.uniform)
    throw ValidationError("levy_exponent: uniform spherical measure needs "
                          "atom reduction first");
  nu.spherical.validate(nu.d);
  const auto& k = nu.k.eval;
  // Moment condition for full centering: r k(r)/r integrable past 1.
  if (centering == Centering::full) {
    auto tail = [&k](double r) { return k(r); };
    if (exponent_near_inf(tail) >= -1.0)
      throw Error("levy_exponent: IncompatibleCentering (first moment "
                  "diverges at infinity)");
  }
  std::complex<double> total{0.0, 0.0};
  for (const auto& atom : nu.spherical.atoms) {
    double t = 0.0;
    for (int i = 0; i < nu.d; ++i) t += atom.dir[i] * xi[i];
    if (t == 0.0) continue;
    // Real part: (cos(rt) - 1) k(r)/r, absolutely integrable.  Written as
    // -2 sin^2(rt/2) to avoid cancellation for small rt.
    auto re = [&k, t](double r) {
      const double s = std::sin(0.5 * r * t);
      return -2.0 * s * s * k(r) / r;
    };
    // Oscillatory tail handled by truncation: amplitude k(R)/R, and the
    // "-1" part approximated by the declared power tail. The radius must
    // scale like 1/|t|, otherwise the -1 replacement is wrong for small
    // frequencies (cos(rt) is still ~1 at r = R); the neglected oscillatory
    // remainder is then O(k(R)/(R|t|)), a ~1e-4 relative error.
    const double R = std::max(2e3, 2000.0 / std::abs(t));
    const quad::QuadSpec osc_spec{1e-9, 1e-9, 20000, 15};
    double re_val = radial_quad(re, 0.0, R, nu.k.breakpoints, osc_spec);
    double tail_alpha = nu.k.declared_tail_exponent.value_or(0.0);
    if (tail_alpha > 0.0) {
      const double K = k(R) * std::pow(R, tail_alpha);
      re_val -= K * std::pow(R, -tail_alpha) / tail_alpha;  // -1 term tail
    }
    double im_val = 0.0;
    if (centering == Centering::full) {
      auto im = [&k, t](double r) { return sin_minus_x(r * t) * k(r) / r; };
      im_val = radial_quad(im, 0.0, R, nu.k.breakpoints, osc_spec);
      if (tail_alpha > 1.0) {
        const double K = k(R) * std::pow(R, tail_alpha);
        im_val -= t * K * std::pow(R, 1.0 - tail_alpha) / (tail_alpha - 1.0);
      }
    } else if (centering == Centering::unit_ball) {
      auto im_in = [&k, t](double r) {
        return sin_minus_x(r * t) * k(r) / r;
      };
      auto im_out = [&k, t](double r) { return std::sin(r * t) * k(r) / r; };
      im_val = radial_quad(im_in, 0.0, 1.0, nu.k.breakpoints, osc_spec) +
               radial_quad(im_out, 1.0, R, nu.k.breakpoints, osc_spec);
    } else {
      auto im = [&k, t](double r) { return std::sin(r * t) * k(r) / r; };
      im_val = radial_quad(im, 1e-12, R, nu.k.breakpoints, osc_spec);
    }
    total += atom.weight * std::complex<double>{re_val, im_val};
  }
  return total;
}

WeightFunction weight_canonical(long n, const KFunction& k) {
  if (n < 1) throw ValidationError("weight_canonical: n >= 1");
  auto kf = k.eval;
  WeightFunction w;
  w.label = "canonical-" + std::to_string(n);
  w.eval = [kf, n](double r) {
    const double denom = kf(r);
    if (denom == 0.0)
      throw DivisionByZero("weight_canonical: k vanishes at r");
    return (kf(n * r / (n + 1.0)) - kf(n * r)) / denom;
  };
  for (double b : k.breakpoints) {
    w.breakpoints.push_back(b);
    w.breakpoints.push_back(b * (n + 1.0) / n);
    w.breakpoints.push_back(b / n);
  }
  return w;
}

StableCanonicalWeight weight_stable_canonical(long n, double alpha) {
  if (!(alpha > 0 && alpha < 2))
    throw OutOfRange("weight_stable_canonical: alpha in (0,2)");
  if (n < 1) throw ValidationError("weight_stable_canonical: n >= 1");
  const double omega =
      std::pow(1.0 + 1.0 / n, alpha) - std::pow(double(n), -alpha);
  return {omega, std::pow(omega, 1.0 / alpha)};
}

WeightFunction weight_layered(long n, double alpha, double beta) {
  if (!(beta > alpha)) throw OutOfRange("weight_layered: beta > alpha");
  if (n < 1) throw ValidationError("weight_layered: n >= 1");
  const double cut = std::pow(double(n), -1.0 / alpha);
  const double amp = std::pow(double(n), 1.0 - beta / alpha);
  WeightFunction w;
  w.label = "layered-" + std::to_string(n);
  w.eval = [cut, amp, alpha, beta](double r) {
    return (r <= cut) ? amp * std::pow(r, alpha - beta) : 1.0;
  };
  w.breakpoints = {cut};
  return w;
}

WeightFunction weight_sum(const WeightFunction& w1, const WeightFunction& w2) {
  WeightFunction w;
  w.label = w1.label + "+" + w2.label;
  auto e1 = w1.eval, e2 = w2.eval;
  w.eval = [e1, e2](double r) { return e1(r) + e2(r); };
  w.breakpoints = w1.breakpoints;
  w.breakpoints.insert(w.breakpoints.end(), w2.breakpoints.begin(),
                       w2.breakpoints.end());
  return w;
}

double moment_integral(const LevyMeasure& nu, double p, Region region,
                       const WeightFunction* weight) {
  const auto& k = nu.k.eval;
  std::function<double(double)> omega =
      weight ? weight->eval : std::function<double(double)>(
                                  [](double) { return 1.0; });
  auto g = [&k, &omega, p](double r) {
    return std::pow(r, p) * omega(r) * k(r) / r;
  };
  std::vector<double> breaks = nu.k.breakpoints;
  if (weight)
    breaks.insert(breaks.end(), weight->breakpoints.begin(),
                  weight->breakpoints.end());
  double lo = (region == Region::outside) ? 1.0 : 0.0;
  double hi = (region == Region::inside) ? 1.0 : kInf;
  if (lo == 0.0 && exponent_near_zero(g) <= -1.0)
    throw Divergent("moment_integral: non-integrable at 0");
  if (std::isinf(hi) && exponent_near_inf(g) >= -1.0)
    throw Divergent("moment_integral: non-integrable at infinity");
  double val;
  if (std::isinf(hi)) {
    val = radial_quad(g, lo, 1e6, breaks);
    // power-law tail correction using the declared exponent
    if (nu.k.declared_tail_exponent) {
      const double a = *nu.k.declared_tail_exponent;
      const double s = p - 1.0 - a;  // local integrand exponent
      if (s < -1.0) {
        const double K = g(1e6) * std::pow(1e6, -s);
        val += -K * std::pow(1e6, s + 1.0) / (s + 1.0);
      }
    }
  } else {
    val = radial_quad(g, lo, hi, breaks);
  }
  return nu.spherical.mass() * val;
}

std::array<double, 3> omega_error_integrals(const WeightFunction& weight,
                                            const LevyMeasure& nu_alpha) {
  const auto& k = nu_alpha.k.eval;
  const auto& om = weight.eval;
  std::vector<double> breaks = nu_alpha.k.breakpoints;
  breaks.insert(breaks.end(), weight.breakpoints.begin(),
                weight.breakpoints.end());
  auto dev = [&om](double r) { return std::abs(om(r) - 1.0); };
  auto g2 = [&k, &dev](double r) { return r * r * dev(r) * k(r) / r; };
  auto g1 = [&k, &dev](double r) { return r * dev(r) * k(r) / r; };
  auto g0 = [&k, &dev](double r) { return dev(r) * k(r) / r; };
  const double mass = nu_alpha.spherical.mass();
  // Outside integrals: truncate where the stable tail makes |omega-1| k/r
  // negligible; the in-scope weights are identically 1 far out, so this is
  // exact once past their breakpoints.
  double far = 1e6;
  const double i2 = mass * radial_quad(g2, 0.0, 1.0, breaks);
  double i1 = mass * radial_quad(g1, 1.0, far, breaks);
  double i0 = mass * radial_quad(g0, 1.0, far, breaks);
  // Power-law tail correction past the truncation point, from the local
  // exponent of the integrand (zero for weights that equal 1 far out).
  auto tail_fix = [far](const std::function<double(double)>& g) {
    const double gv = g(far);
    if (gv <= 0.0) return 0.0;
    const double s = std::log(g(10.0 * far) / gv) / std::log(10.0);
    if (s >= -1.0) throw Divergent("omega_error_integrals: tail diverges");
    return gv * far / (-s - 1.0);
  };
  i1 += mass * tail_fix(g1);
  i0 += mass * tail_fix(g0);
  return {i2, i1, i0};
}

double bound_eval(BoundStudy study, long n, const BoundParams& params,
                  double C_alpha_d) {
  if (n < 1) throw ValidationError("bound_eval: n >= 1");
  switch (study) {
    case BoundStudy::canonical_sd:
      return (1.0 / n) * (1.0 + 1.0 / n) * params.second_moment;
    case BoundStudy::canonical_stable: {
      const auto nu = nu_stable_1d(params.alpha);
      const double m1_out = moment_integral(nu, 1.0, Region::outside);
      const double m2_in = moment_integral(nu, 2.0, Region::inside);
      const double dev =
          std::abs(weight_stable_canonical(n, params.alpha).omega_n - 1.0);
      return (2.0 * m1_out + C_alpha_d * m2_in) * dev;
    }
    case BoundStudy::layered_stable: {
      const auto nu = nu_stable_1d(params.alpha);
      const auto w = weight_layered(n, params.alpha, params.beta);
      const auto e = omega_error_integrals(w, nu);
      return 2.0 * e[1] + C_alpha_d * e[0];
    }
    case BoundStudy::layered_cauchy: {
      // Cauchy reference nu_1 = dr/r^2 x sigma with sigma(+/-1) = 1/pi.
      LevyMeasure nu{
          1, sphere_pm1(1.0 / kPi),
          KFunction{[](double r) { return 1.0 / r; }, 1.0, true, {}}};
      const auto w = weight_layered(n, 1.0, params.beta);
      const auto e = omega_error_integrals(w, nu);
      return 2.0 * e[1] + C_alpha_d * e[0];
    }
  }
  throw ValidationError("bound_eval: unknown study");
}

double pareto_selfconv_ratio(double alpha, double x) {
  if (!(x > 0)) throw ValidationError("pareto_selfconv_ratio: x > 0");
  if (!(alpha > 0 && alpha < 2))
    throw OutOfRange("pareto_selfconv_ratio: alpha in (0,2)");
  auto f = [alpha](double y) {
    return y < 0.0 ? 0.0 : alpha * std::pow(1.0 + y, -alpha - 1.0);
  };
  // (f*f)(x) = 2 int_0^{x/2} f(y) f(x-y) dy by symmetry about x/2.
  auto g = [&f, x](double y) { return f(y) * f(x - y); };
  const double conv =
      2.0 * quad::integrate(g, 0.0, x / 2.0, {1e-13, 1e-11, 6000, 15}).value;
  return conv / f(x);
}

}  // namespace slb::levy
