#include "dist.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <cstring>
#include <sstream>

#include "quad.hpp"

namespace slb::dist {
namespace {

// --- counter-based RNG -----------------------------------------------------

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// --- law plumbing ----------------------------------------------------------

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Leading stable-tail coefficients for the unit-exponent normalization:
// P(X > x) = A1 x^{-alpha} + A2 x^{-2 alpha} + O(x^{-3 alpha}).
double tail_a1_unit(double alpha) {
  return std::tgamma(alpha) * std::sin(alpha * kPi / 2.0) / kPi;
}
double tail_a2_unit(double alpha) {
  return -std::tgamma(2.0 * alpha) / 2.0 * std::sin(alpha * kPi) / kPi;
}
double tail_a3_unit(double alpha) {
  return std::tgamma(3.0 * alpha) / 6.0 * std::sin(1.5 * alpha * kPi) / kPi;
}

struct Cf1d {
  std::function<double(double)> phi;  // symmetric, real
  double tail_a1 = 0.0;  // P(X > x) ~ a1 x^{-e1} + a2 x^{-e2} + a3 x^{-e3}
  double tail_a2 = 0.0;
  double tail_a3 = 0.0;
  double tail_e1 = 0.0;
  double tail_e2 = 0.0;
  double tail_e3 = 0.0;
};

Cf1d cf1d_of(const StableLaw& law) {
  law.validate();
  if (law.d != 1)
    throw InvalidDomain("density_1d: d = 1 required");
  const double a = law.alpha;
  // Scale relative to the unit-exponent law: cf = exp(-(c xi)^alpha).
  double c = 1.0;
  if (law.norm == Normalization::rotational)
    c = (a == 1.0) ? 1.0 : std::pow(2.0, -1.0 / a);
  else if (law.norm == Normalization::spectral)
    c = std::pow(law.lambda.mass(), 1.0 / a);
  Cf1d r;
  r.phi = [a, c](double xi) { return std::exp(-std::pow(c * std::abs(xi), a)); };
  r.tail_a1 = tail_a1_unit(a) * std::pow(c, a);
  r.tail_a2 = tail_a2_unit(a) * std::pow(c, 2.0 * a);
  r.tail_a3 = tail_a3_unit(a) * std::pow(c, 3.0 * a);
  r.tail_e1 = a;
  r.tail_e2 = 2.0 * a;
  r.tail_e3 = 3.0 * a;
  return r;
}

// Cubic Hermite interpolation of the Lévy exponent on a uniform grid, so the
// density quadrature does not re-run the radial quadrature per evaluation.
struct PsiTable {
  double h = 0.0, hi = 0.0;
  std::vector<double> v, s;  // values and slopes

  double operator()(double x) const {
    x = std::abs(x);
    if (x >= hi) return v.back() + (x - hi) * s.back();  // linear continuation
    const double t = x / h;
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(t), v.size() - 2);
    const double u = t - double(i);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v[i] + (u3 - 2 * u2 + u) * h * s[i] +
           (-2 * u3 + 3 * u2) * v[i + 1] + (u3 - u2) * h * s[i + 1];
  }
};

PsiTable tabulate_psi(const std::function<double(double)>& psi, double hi,
                      long np) {
  PsiTable t;
  t.hi = hi;
  t.h = hi / double(np);
  t.v.resize(np + 1);
  for (long i = 0; i <= np; ++i) t.v[i] = psi(t.h * double(i));
  t.s.resize(np + 1);
  for (long i = 1; i < np; ++i) t.s[i] = (t.v[i + 1] - t.v[i - 1]) / (2 * t.h);
  t.s[0] = 0.0;  // psi symmetric
  t.s[np] = (t.v[np] - t.v[np - 1]) / t.h;
  return t;
}

Cf1d cf1d_of(const InitialLaw& law) {
  law.validate();
  if (law.d != 1)
    throw InvalidDomain("density_1d: d = 1 required");
  Cf1d r;
  switch (law.kind) {
    case InitialKind::canonical_stable: {
      StableLaw s = StableLaw::unit(law.alpha);
      return cf1d_of(s);
    }
    case InitialKind::layered:
    case InitialKind::canonical_sd: {
      auto psi = [&law](double xi) { return levy_exponent_1d(law, xi); };
      // Cutoff where the cf drops below 1e-13.
      double hi = 1.0;
      while (psi(hi) > -30.0) {
        hi *= 2.0;
        if (hi > 1e4)
          throw NonConvergence("density_1d: cf does not decay");
      }
      auto table = std::make_shared<PsiTable>(tabulate_psi(psi, hi, 600));
      r.phi = [table](double xi) { return std::exp((*table)(xi)); };
      if (law.kind == InitialKind::layered) {
        r.tail_a1 = 1.0 / law.alpha;  // nu((x,inf)) for the unit outer layer
        r.tail_e1 = law.alpha;
      } else {
        const double a = law.k.declared_tail_exponent.value_or(0.0);
        if (a <= 0.0)
          throw UnsupportedLaw("density_1d: canonical-sd needs a declared "
                               "power tail");
        r.tail_a1 = law.k.eval(1e3) * std::pow(1e3, a) / a;
        r.tail_e1 = a;
      }
      r.tail_e2 = 2.0 * r.tail_e1;
      return r;
    }
    case InitialKind::pareto_symmetrized:
      throw UnsupportedLaw("density_1d: pareto-symmetrized cf is not "
                           "absolutely integrable at this accuracy");
  }
  throw UnsupportedLaw("density_1d: unknown law kind");
}

double cf_cutoff(const std::function<double(double)>& phi) {
  double hi = 1.0;
  while (std::abs(phi(hi)) > 1e-13) {
    hi *= 2.0;
    if (hi > 1e5) throw NonConvergence("density_1d: cf does not decay");
  }
  return hi;
}

DensityGrid invert_cf(const Cf1d& cf, const GridSpec& spec) {
  if (!(spec.xmax > 0) || spec.m < 3 || spec.m % 2 == 0)
    throw ValidationError("density_1d: xmax > 0 and odd m >= 3 required");
  const double hi = cf_cutoff(cf.phi);
  DensityGrid g;
  g.tail_exponent = cf.tail_e1;
  g.tail_amp = cf.tail_a1;
  const long m = spec.m;
  g.xs.resize(m);
  g.ps.resize(m);
  const double dx = 2.0 * spec.xmax / double(m - 1);
  const long mid = (m - 1) / 2;
  const quad::QuadSpec qs{1e-12, 1e-12, 40000, 15};
  double worst = 0.0;
  for (long j = mid; j < m; ++j) {
    const double x = dx * double(j - mid);
    auto fr = [&cf, x](double xi) { return cf.phi(xi) * std::cos(x * xi); };
    auto res = quad::integrate(fr, 0.0, hi, qs);
    const double p = std::max(0.0, res.value / kPi);
    worst = std::max(worst, res.error_estimate / kPi);
    g.xs[j] = x;
    g.ps[j] = p;
    g.xs[m - 1 - j] = -x;
    g.ps[m - 1 - j] = p;
  }
  if (worst > 1e-8)
    throw GridTooCoarse("density_1d: inversion error estimate " +
                        fmt(worst) + " exceeds 1e-8");
  // Trapezoid CDF anchored at the left power-tail mass.
  auto tail_mass = [&cf](double x) {
    return cf.tail_a1 * std::pow(x, -cf.tail_e1) +
           (cf.tail_e2 > 0 ? cf.tail_a2 * std::pow(x, -cf.tail_e2) : 0.0) +
           (cf.tail_e3 > 0 ? cf.tail_a3 * std::pow(x, -cf.tail_e3) : 0.0);
  };
  g.cdf.resize(m);
  g.cdf[0] = tail_mass(spec.xmax);
  for (long j = 1; j < m; ++j)
    g.cdf[j] = g.cdf[j - 1] + 0.5 * (g.ps[j - 1] + g.ps[j]) * dx;
  // Euler-Maclaurin endpoint correction knocks the trapezoid error down to
  // O(dx^4): int_a^x p = T - (dx^2/12)(p'(x) - p'(a)).
  std::vector<double> dp(m);
  dp[0] = (g.ps[1] - g.ps[0]) / dx;
  dp[m - 1] = (g.ps[m - 1] - g.ps[m - 2]) / dx;
  for (long j = 1; j < m - 1; ++j)
    dp[j] = (g.ps[j + 1] - g.ps[j - 1]) / (2.0 * dx);
  for (long j = 0; j < m; ++j)
    g.cdf[j] -= dx * dx / 12.0 * (dp[j] - dp[0]);
  return g;
}

// Shared grid cache keyed by law tag (quantile_1d and layered sampling).
std::mutex g_grid_mutex;
std::map<std::string, std::shared_ptr<const DensityGrid>> g_grid_cache;

template <class Law>
std::shared_ptr<const DensityGrid> cached_grid(const Law& law) {
  const std::string key = law.tag();
  std::lock_guard<std::mutex> lock(g_grid_mutex);
  auto it = g_grid_cache.find(key);
  if (it != g_grid_cache.end()) return it->second;
  auto g = std::make_shared<DensityGrid>(density_1d(law, GridSpec{}));
  g_grid_cache.emplace(key, g);
  return g;
}

// --- samplers --------------------------------------------------------------

// Chambers-Mallows-Stuck draw of the unit-exponent symmetric alpha-stable
// law (cf exp(-|xi|^alpha)); reduces to tan(U) at alpha = 1.
double cms_symmetric(double alpha, Stream& st) {
  const double u = kPi * (st.u01() - 0.5);
  const double w = st.exp1();
  return std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
}

// Kanter draw of the positive rho-stable law with Laplace transform
// exp(-lambda^rho), rho in (0,1).
double kanter_positive(double rho, Stream& st) {
  const double u = kPi * st.u01();
  const double w = st.exp1();
  const double a = std::pow(std::sin(rho * u), rho / (1.0 - rho)) *
                   std::sin((1.0 - rho) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - rho));
  return std::pow(a / w, (1.0 - rho) / rho);
}

void draw_stable(const StableLaw& law, Stream& st, double* out) {
  const double a = law.alpha;
  switch (law.norm) {
    case Normalization::unit_exponent:
      out[0] = cms_symmetric(a, st);
      return;
    case Normalization::rotational: {
      if (law.d == 1) {
        out[0] = (a == 1.0) ? cms_symmetric(1.0, st)
                            : std::pow(2.0, -1.0 / a) * cms_symmetric(a, st);
        return;
      }
      // Gaussian subordination: X = sqrt(s S) Z with S positive
      // (alpha/2)-stable; s matches the law's normalization.
      const double s = (a == 1.0) ? 2.0 : std::pow(2.0, 1.0 - 2.0 / a);
      const double S = kanter_positive(a / 2.0, st);
      const double root = std::sqrt(s * S);
      for (int i = 0; i < law.d; ++i) out[i] = root * st.normal();
      return;
    }
    case Normalization::spectral: {
      // Independent scalar stables along the atom directions multiply the
      // cfs into exp(-sum_j w_j |<xi, y_j>|^alpha).
      for (int i = 0; i < law.d; ++i) out[i] = 0.0;
      for (const auto& atom : law.lambda.atoms) {
        const double x = std::pow(atom.weight, 1.0 / a) * cms_symmetric(a, st);
        for (int i = 0; i < law.d; ++i) out[i] += x * atom.dir[i];
      }
      return;
    }
  }
}

double draw_initial_1d(const InitialLaw& law, Stream& st,
                       const DensityGrid* grid) {
  switch (law.kind) {
    case InitialKind::pareto_symmetrized: {
      const double y1 = std::pow(st.u01(), -1.0 / law.alpha) - 1.0;
      const double y2 = std::pow(st.u01(), -1.0 / law.alpha) - 1.0;
      return y1 - y2;
    }
    case InitialKind::canonical_stable:
      return cms_symmetric(law.alpha, st);
    case InitialKind::layered:
      return grid->quantile(st.u01());
    case InitialKind::canonical_sd:
      throw UnsupportedLaw("sample: generic canonical-sd sampling not "
                           "supported");
  }
  throw UnsupportedLaw("sample: unknown law kind");
}

}  // namespace

// --- Stream ----------------------------------------------------------------

double Stream::u01() {
  const std::uint64_t x = mix64(key + (++ctr) * 0x9e3779b97f4a7c15ULL);
  return (double(x >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::exp1() { return -std::log(u01()); }

double Stream::normal() {
  const double u1 = u01(), u2 = u01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Stream stream_for(std::uint64_t seed, const std::string& tag,
                  std::uint64_t index) {
  Stream st;
  st.key = mix64(mix64(mix64(seed) + fnv1a(tag)) + index);
  return st;
}

// --- laws ------------------------------------------------------------------

StableLaw StableLaw::unit(double alpha) {
  StableLaw law{alpha, 1, Normalization::unit_exponent, {}};
  law.validate();
  return law;
}

StableLaw StableLaw::rotational(double alpha, int d) {
  StableLaw law{alpha, d, Normalization::rotational, {}};
  law.validate();
  return law;
}

StableLaw StableLaw::with_spectral(double alpha, int d,
                                   levy::SphericalMeasure lambda) {
  StableLaw law{alpha, d, Normalization::spectral, std::move(lambda)};
  law.validate();
  return law;
}

void StableLaw::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw OutOfRange("StableLaw: alpha in (0,2]");
  if (d < 1) throw ValidationError("StableLaw: d >= 1");
  if (norm == Normalization::unit_exponent && d != 1)
    throw ValidationError("StableLaw: unit-exponent normalization is 1D");
  if (norm == Normalization::spectral) {
    lambda.validate(d);
    if (lambda.uniform)
      throw ValidationError("StableLaw: spectral kind takes an atom measure");
    if (!lambda.symmetric_flag)
      throw ValidationError("StableLaw: spectral measure must be symmetric");
    // Symmetry of the atom list: each direction has its mirror.
    for (const auto& a : lambda.atoms) {
      bool found = false;
      for (const auto& b : lambda.atoms) {
        double dot = 0.0, nrm = 0.0;
        for (int i = 0; i < d; ++i) {
          dot += a.dir[i] * b.dir[i];
          nrm += a.dir[i] * a.dir[i];
        }
        if (std::abs(dot + nrm) < 1e-12 &&
            std::abs(a.weight - b.weight) < 1e-12) {
          found = true;
          break;
        }
      }
      if (!found)
        throw ValidationError("StableLaw: spectral atom list not symmetric");
    }
    // Non-degeneracy: inf over unit directions of sum w |<e,y>|^alpha > 0,
    // probed on a deterministic direction set.
    std::vector<std::vector<double>> dirs;
    if (d == 1) {
      dirs.push_back({1.0});
    } else if (d == 2) {
      for (int j = 0; j < 360; ++j) {
        const double th = kPi * double(j) / 360.0;
        dirs.push_back({std::cos(th), std::sin(th)});
      }
    } else {
      Stream st = stream_for(12345, "nondegeneracy-probe", 0);
      for (int j = 0; j < 2000; ++j) {
        std::vector<double> e(d);
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) {
          e[i] = st.normal();
          nrm += e[i] * e[i];
        }
        nrm = std::sqrt(nrm);
        for (int i = 0; i < d; ++i) e[i] /= nrm;
        dirs.push_back(std::move(e));
      }
    }
    double lo = kInf;
    for (const auto& e : dirs) {
      double s = 0.0;
      for (const auto& atom : lambda.atoms) {
        double dot = 0.0;
        for (int i = 0; i < d; ++i) dot += e[i] * atom.dir[i];
        s += atom.weight * std::pow(std::abs(dot), alpha);
      }
      lo = std::min(lo, s);
    }
    if (!(lo > 1e-10))
      throw ValidationError("StableLaw: degenerate spectral measure");
  }
}

std::string StableLaw::tag() const {
  switch (norm) {
    case Normalization::unit_exponent:
      return "stable-unit-" + fmt(alpha);
    case Normalization::rotational:
      return "stable-rot-" + fmt(alpha) + "-d" + std::to_string(d);
    case Normalization::spectral: {
      std::string t = "stable-spec-" + fmt(alpha) + "-d" + std::to_string(d);
      for (const auto& a : lambda.atoms) {
        t += "-w" + fmt(a.weight);
        for (double x : a.dir) t += "," + fmt(x);
      }
      return t;
    }
  }
  return "stable";
}

InitialLaw InitialLaw::pareto_symmetrized(double alpha) {
  InitialLaw law;
  law.kind = InitialKind::pareto_symmetrized;
  law.alpha = alpha;
  law.validate();
  return law;
}

InitialLaw InitialLaw::layered(double alpha, double beta, int d) {
  InitialLaw law;
  law.kind = InitialKind::layered;
  law.alpha = alpha;
  law.beta = beta;
  law.d = d;
  law.validate();
  return law;
}

InitialLaw InitialLaw::canonical_stable(double alpha) {
  InitialLaw law;
  law.kind = InitialKind::canonical_stable;
  law.alpha = alpha;
  law.validate();
  return law;
}

InitialLaw InitialLaw::canonical_sd(levy::KFunction k) {
  InitialLaw law;
  law.kind = InitialKind::canonical_sd;
  law.k = std::move(k);
  law.validate();
  return law;
}

void InitialLaw::validate() const {
  switch (kind) {
    case InitialKind::pareto_symmetrized:
      if (!(alpha > 1.0 && alpha < 2.0))
        throw OutOfRange("InitialLaw: pareto-symmetrized needs alpha in "
                         "(1,2)");
      break;
    case InitialKind::layered:
      if (!(alpha > 0.0 && alpha < 2.0))
        throw OutOfRange("InitialLaw: layered needs alpha in (0,2)");
      if (!(beta > alpha && beta < 2.0))
        throw OutOfRange("InitialLaw: layered needs beta in (alpha,2)");
      break;
    case InitialKind::canonical_stable:
      if (!(alpha > 0.0 && alpha < 2.0))
        throw OutOfRange("InitialLaw: canonical-stable needs alpha in (0,2)");
      break;
    case InitialKind::canonical_sd:
      if (!k.eval) throw ValidationError("InitialLaw: canonical-sd needs k");
      break;
  }
  if (d < 1) throw ValidationError("InitialLaw: d >= 1");
}

std::string InitialLaw::tag() const {
  switch (kind) {
    case InitialKind::pareto_symmetrized:
      return "pareto-sym-" + fmt(alpha);
    case InitialKind::layered:
      return "layered-" + fmt(alpha) + "-" + fmt(beta) + "-d" +
             std::to_string(d);
    case InitialKind::canonical_stable:
      return "canonical-stable-" + fmt(alpha);
    case InitialKind::canonical_sd:
      return "canonical-sd";
  }
  return "initial";
}

// --- characteristic functions ----------------------------------------------

std::complex<double> cf_eval(const StableLaw& law,
                             const std::vector<double>& xi) {
  law.validate();
  if (static_cast<int>(xi.size()) != law.d)
    throw ValidationError("cf_eval: xi dimension mismatch");
  switch (law.norm) {
    case Normalization::unit_exponent:
      return {std::exp(-std::pow(std::abs(xi[0]), law.alpha)), 0.0};
    case Normalization::rotational: {
      double n2 = 0.0;
      for (double x : xi) n2 += x * x;
      const double nrm = std::sqrt(n2);
      const double ex = (law.alpha == 1.0)
                            ? nrm
                            : std::pow(nrm, law.alpha) / 2.0;
      return {std::exp(-ex), 0.0};
    }
    case Normalization::spectral: {
      double s = 0.0;
      for (const auto& atom : law.lambda.atoms) {
        double dot = 0.0;
        for (int i = 0; i < law.d; ++i) dot += xi[i] * atom.dir[i];
        s += atom.weight * std::pow(std::abs(dot), law.alpha);
      }
      return {std::exp(-s), 0.0};
    }
  }
  throw ValidationError("cf_eval: unknown normalization");
}

std::complex<double> pareto_cf(double alpha, double xi) {
  if (!(alpha > 0.0)) throw OutOfRange("pareto_cf: alpha > 0");
  if (xi == 0.0) return {1.0, 0.0};
  const double s = std::abs(xi);
  // phi(s) = alpha e^{-is} int_1^inf e^{isu} u^{-alpha-1} du; rotating the
  // contour to u = 1 + it turns it into i alpha int_0^inf e^{-st}
  // (1+it)^{-alpha-1} dt, which decays monotonically.
  const quad::QuadSpec qs{1e-13, 1e-13, 8000, 15};
  auto part = [alpha, s, &qs](bool real_part) {
    return quad::integrate(
               [alpha, s, real_part](double t) {
                 const std::complex<double> z =
                     std::pow(std::complex<double>(1.0, t), -alpha - 1.0);
                 const double e = std::exp(-s * t);
                 return real_part ? e * z.real() : e * z.imag();
               },
               0.0, kInf, qs)
        .value;
  };
  const std::complex<double> I{part(true), part(false)};
  std::complex<double> phi = std::complex<double>(0.0, alpha) * I;
  if (xi < 0.0) phi = std::conj(phi);
  return phi;
}

double levy_exponent_1d(const InitialLaw& law, double xi) {
  law.validate();
  if (law.d != 1) throw InvalidDomain("levy_exponent_1d: d = 1 required");
  switch (law.kind) {
    case InitialKind::canonical_stable:
      return -std::pow(std::abs(xi), law.alpha);
    case InitialKind::layered: {
      levy::LevyMeasure nu{1, levy::sphere_pm1(1.0),
                           levy::k_layered(law.alpha, law.beta)};
      const auto centering = (law.alpha > 1.0) ? levy::Centering::full
                                               : levy::Centering::unit_ball;
      return levy_exponent(nu, {xi}, centering).real();
    }
    case InitialKind::canonical_sd: {
      levy::LevyMeasure nu{1, levy::sphere_pm1(1.0), law.k};
      const auto centering =
          (law.k.declared_tail_exponent.value_or(0.0) > 1.0)
              ? levy::Centering::full
              : levy::Centering::unit_ball;
      return levy_exponent(nu, {xi}, centering).real();
    }
    case InitialKind::pareto_symmetrized:
      throw UnsupportedLaw("levy_exponent_1d: pareto-symmetrized goes "
                           "through pareto_cf");
  }
  throw UnsupportedLaw("levy_exponent_1d: unknown law kind");
}

std::complex<double> cf_eval(const InitialLaw& law, double xi) {
  if (law.kind == InitialKind::pareto_symmetrized) {
    const std::complex<double> phi = pareto_cf(law.alpha, xi);
    return {std::norm(phi), 0.0};
  }
  return {std::exp(levy_exponent_1d(law, xi)), 0.0};
}

// --- density / quantile ----------------------------------------------------

DensityGrid density_1d(const StableLaw& law, const GridSpec& spec) {
  return invert_cf(cf1d_of(law), spec);
}

DensityGrid density_1d(const InitialLaw& law, const GridSpec& spec) {
  return invert_cf(cf1d_of(law), spec);
}

double DensityGrid::mass() const {
  // cdf.front() holds the analytic tail mass beyond xmax; by symmetry the
  // right tail contributes the same amount on top of cdf.back().
  return cdf.back() + cdf.front();
}

double DensityGrid::cdf_at(double x) const {
  const double xmax = xs.back();
  if (x <= -xmax)
    return tail_amp * std::pow(-x, -tail_exponent);
  if (x >= xmax)
    return 1.0 - tail_amp * std::pow(x, -tail_exponent);
  const double dx = xs[1] - xs[0];
  const double t = (x - xs[0]) / dx;
  const std::size_t i =
      std::min<std::size_t>(static_cast<std::size_t>(t), xs.size() - 2);
  const double u = t - double(i);
  return cdf[i] + u * (cdf[i + 1] - cdf[i]);
}

double DensityGrid::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw OutOfRange("quantile: p in (0,1) required");
  if (p < cdf.front()) {
    if (!(tail_exponent > 0.0))
      throw OutOfGrid("quantile: no tail model below the grid");
    return -std::pow(tail_amp / p, 1.0 / tail_exponent);
  }
  if (p > cdf.back()) {
    if (!(tail_exponent > 0.0))
      throw OutOfGrid("quantile: no tail model above the grid");
    return std::pow(tail_amp / (1.0 - p), 1.0 / tail_exponent);
  }
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
  std::size_t i = (it == cdf.begin()) ? 0 : std::size_t(it - cdf.begin() - 1);
  const double denom = cdf[i + 1] - cdf[i];
  const double u = (denom > 0.0) ? (p - cdf[i]) / denom : 0.5;
  return xs[i] + u * (xs[i + 1] - xs[i]);
}

double quantile_1d(const StableLaw& law, double p) {
  return cached_grid(law)->quantile(p);
}

// --- sampling --------------------------------------------------------------

SampleBatch sample(const StableLaw& law, long n, std::uint64_t seed) {
  law.validate();
  if (n < 1) throw ValidationError("sample: n >= 1");
  SampleBatch b;
  b.d = law.d;
  b.n = n;
  b.seed = seed;
  b.law_tag = law.tag();
  b.values.resize(std::size_t(n) * law.d);
  for (long i = 0; i < n; ++i) {
    Stream st = stream_for(seed, b.law_tag, std::uint64_t(i));
    draw_stable(law, st, b.values.data() + std::size_t(i) * law.d);
  }
  return b;
}

SampleBatch sample(const InitialLaw& law, long n, std::uint64_t seed) {
  law.validate();
  if (n < 1) throw ValidationError("sample: n >= 1");
  if (law.kind == InitialKind::layered && law.d != 1)
    throw UnsupportedLaw("sample: layered d >= 2 out of scope");
  std::shared_ptr<const DensityGrid> grid;
  if (law.kind == InitialKind::layered) grid = cached_grid(law);
  SampleBatch b;
  b.d = 1;
  b.n = n;
  b.seed = seed;
  b.law_tag = law.tag();
  b.values.resize(std::size_t(n));
  for (long i = 0; i < n; ++i) {
    Stream st = stream_for(seed, b.law_tag, std::uint64_t(i));
    b.values[std::size_t(i)] = draw_initial_1d(law, st, grid.get());
  }
  return b;
}

SampleBatch partial_sum(const InitialLaw& law, long n, long batch_count,
                        std::uint64_t seed, std::optional<double> bn) {
  law.validate();
  if (n < 1 || batch_count < 1)
    throw ValidationError("partial_sum: n, batch_count >= 1");
  if (law.d != 1) throw UnsupportedLaw("partial_sum: d = 1 only");
  SampleBatch b;
  b.d = 1;
  b.n = batch_count;
  b.seed = seed;
  b.law_tag = law.tag();
  b.values.resize(std::size_t(batch_count));
  if (!bn && law.kind == InitialKind::canonical_stable) {
    // Exact equality in law: S_n = a_n X_alpha.
    const double an = levy::weight_stable_canonical(n, law.alpha).a_n;
    for (long j = 0; j < batch_count; ++j) {
      Stream st = stream_for(seed, b.law_tag, std::uint64_t(j));
      b.values[std::size_t(j)] = an * cms_symmetric(law.alpha, st);
    }
    return b;
  }
  double scale;
  if (bn) {
    if (!(*bn > 0.0)) throw ValidationError("partial_sum: bn > 0");
    scale = *bn;
  } else if (law.kind == InitialKind::pareto_symmetrized) {
    scale = levy::stable_constants(law.alpha, 1).lambda1_alpha *
            std::pow(double(n), -1.0 / law.alpha);
  } else if (law.kind == InitialKind::layered) {
    scale = std::pow(double(n), -1.0 / law.alpha);
  } else {
    throw ValidationError("partial_sum: canonical-sd needs an explicit bn");
  }
  std::shared_ptr<const DensityGrid> grid;
  if (law.kind == InitialKind::layered) grid = cached_grid(law);
  for (long j = 0; j < batch_count; ++j) {
    Stream st = stream_for(seed, b.law_tag, std::uint64_t(j));
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += draw_initial_1d(law, st, grid.get());
    b.values[std::size_t(j)] = scale * s;
  }
  return b;
}

// --- serialization ---------------------------------------------------------

namespace {
constexpr char kMagic[9] = "SLBSMP01";

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw IoError("SampleBatch: truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}
}  // namespace

void SampleBatch::write(std::ostream& os) const {
  os.write(kMagic, 8);
  put_u64(os, std::uint64_t(d));
  put_u64(os, std::uint64_t(n));
  put_u64(os, seed);
  for (double v : values) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
  }
  if (!os) throw IoError("SampleBatch: write failed");
}

SampleBatch SampleBatch::read(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("SampleBatch: bad magic");
  SampleBatch b;
  b.d = int(get_u64(is));
  b.n = long(get_u64(is));
  b.seed = get_u64(is);
  if (b.d < 1 || b.n < 0) throw IoError("SampleBatch: bad header");
  b.values.resize(std::size_t(b.n) * b.d);
  for (double& v : b.values) {
    const std::uint64_t bits = get_u64(is);
    std::memcpy(&v, &bits, 8);
  }
  return b;
}

}  // namespace slb::dist
