#include "study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "dist.hpp"
#include "levy.hpp"
#include "special.hpp"
#include "spectral.hpp"
#include "stein.hpp"

namespace slb::study {

namespace {

const std::map<std::string, StudyId>& name_table() {
  static const std::map<std::string, StudyId> t{
      {"rates-canonical-stable", StudyId::rates_canonical_stable},
      {"rates-pareto-sym", StudyId::rates_pareto_sym},
      {"rates-layered-stable", StudyId::rates_layered_stable},
      {"rates-layered-cauchy", StudyId::rates_layered_cauchy},
      {"spectral-suite", StudyId::spectral_suite},
      {"stein-suite", StudyId::stein_suite},
      {"specfun-suite", StudyId::specfun_suite},
      {"poincare-suite", StudyId::poincare_suite},
  };
  return t;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

std::vector<long> default_n_grid(StudyId id) {
  std::vector<long> g;
  switch (id) {
    case StudyId::rates_canonical_stable:
    case StudyId::rates_layered_cauchy:
      for (long n = 2; n <= 4096; n *= 2) g.push_back(n);
      break;
    case StudyId::rates_pareto_sym:
    case StudyId::rates_layered_stable:
      for (long n = 16; n <= 16384; n *= 2) g.push_back(n);
      break;
    default:
      break;
  }
  return g;
}

// The cf test battery is evaluated on a fixed geometric frequency grid.
std::vector<double> omega_grid() {
  std::vector<double> g;
  for (double w = 0.25; w <= 8.0; w *= std::sqrt(2.0)) g.push_back(w);
  return g;
}

// Mixes (seed, n, replicate) into an independent stream seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n,
                       std::uint64_t rep) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (n + 1) +
                    0xbf58476d1ce4e5b9ull * (rep + 1);
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Runs job(i) for i in [0, count) on `workers` threads; results land in
// per-index slots, so scheduling cannot affect the output.
void parallel_rows(long count, int workers,
                   const std::function<void(long)>& job) {
  if (workers <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
  };
  std::vector<std::thread> pool;
  const int k = std::min<long>(workers, count);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

struct RowSlot {
  ResultRow row;
  bool ok = false;
  std::string error;
};

// Computes one row per grid index (worker pool), collecting errors without
// aborting the remaining rows.
void collect_rows(const ExperimentConfig& cfg, const std::vector<long>& grid,
                  const std::function<ResultRow(long n)>& make_row,
                  StudyOutcome& out, std::vector<double>* distances) {
  std::vector<RowSlot> slots(grid.size());
  parallel_rows(static_cast<long>(grid.size()), cfg.workers, [&](long i) {
    const double t0 = now_seconds();
    try {
      slots[i].row = make_row(grid[i]);
      slots[i].row.seconds = now_seconds() - t0;
      slots[i].ok = true;
    } catch (const Error& e) {
      slots[i].error = e.what();
    }
  });
  for (auto& s : slots) {
    if (s.ok) {
      out.rows.push_back(s.row);
      if (distances) distances->push_back(s.row.estimate);
    } else {
      out.row_errors.push_back(s.error);
    }
  }
}

// The fitted exponent estimates the asymptotic rate, so the fit uses the
// upper half of the doubling grid (at least 3 points); pre-asymptotic rows
// are still reported. On short grids everything is fitted.
metrics::RateFit fit_of(const std::vector<long>& grid,
                        const std::vector<double>& distances) {
  const std::size_t m = distances.size();
  const std::size_t keep = std::max<std::size_t>((m + 1) / 2, std::min<std::size_t>(m, 3));
  std::vector<double> ns, ds;
  for (std::size_t i = m - keep; i < m; ++i) {
    ns.push_back(double(grid[i]));
    ds.push_back(distances[i]);
  }
  return metrics::fit_rate(ns, ds);
}

// E|X_alpha| for the unit-exponent symmetric stable law (alpha > 1).
double stable_abs_mean(double alpha) {
  return 2.0 * std::tgamma(1.0 - 1.0 / alpha) / kPi;
}

StudyOutcome run_canonical_stable(const ExperimentConfig& cfg) {
  StudyOutcome out;
  const double m1 = stable_abs_mean(cfg.alpha);
  std::vector<double> dists;
  collect_rows(
      cfg, cfg.n_grid,
      [&](long n) {
        ResultRow r;
        r.study = study_name(cfg.study);
        r.n_or_R = double(n);
        r.seed = cfg.seed;
        // Exact equality in law S_n = a_n X_alpha gives W1 in closed form.
        const double an = levy::weight_stable_canonical(n, cfg.alpha).a_n;
        r.estimate = std::abs(an - 1.0) * m1;
        r.bound = levy::bound_eval(levy::BoundStudy::canonical_stable, n,
                                   {cfg.alpha, cfg.beta, 1.0});
        return r;
      },
      out, &dists);
  if (dists.size() == cfg.n_grid.size()) out.fit = fit_of(cfg.n_grid, dists);
  return out;
}

StudyOutcome run_pareto_sym(const ExperimentConfig& cfg) {
  StudyOutcome out;
  const auto law = dist::InitialLaw::pareto_symmetrized(cfg.alpha);
  const double lam1 = levy::stable_constants(cfg.alpha, 1).lambda1_alpha;
  const auto grid_w = omega_grid();
  auto target = [a = cfg.alpha](double w) {
    return std::complex<double>(std::exp(-std::pow(w, a)), 0.0);
  };
  std::vector<double> dists;
  collect_rows(
      cfg, cfg.n_grid,
      [&](long n) {
        ResultRow r;
        r.study = study_name(cfg.study);
        r.n_or_R = double(n);
        r.seed = cfg.seed;
        const double bn = lam1 * std::pow(double(n), -1.0 / cfg.alpha);
        auto cfn = [&law, bn, n](double w) {
          return std::pow(dist::cf_eval(law, bn * w), double(n));
        };
        r.estimate = metrics::cf_battery_distance(cfn, target, grid_w);
        return r;
      },
      out, &dists);
  if (dists.size() == cfg.n_grid.size()) out.fit = fit_of(cfg.n_grid, dists);

  if (cfg.mc_track) {
    // Monte Carlo W1 against the exact stable quantile; the heavy track runs
    // on the leading part of the grid (cost grows linearly in n) with
    // median-of-replicates variance control.
    std::vector<long> mc_grid;
    for (long n : cfg.n_grid)
      if (n <= 1024) mc_grid.push_back(n);
    const auto stable = dist::StableLaw::unit(cfg.alpha);
    (void)dist::quantile_1d(stable, 0.5);  // warm the shared density cache
    auto q = [&stable](double p) { return dist::quantile_1d(stable, p); };
    std::vector<double> mc_dists;
    StudyOutcome mc_out;
    collect_rows(
        cfg, mc_grid,
        [&](long n) {
          ResultRow r;
          r.study = study_name(cfg.study) + "-mc";
          r.n_or_R = double(n);
          r.seed = cfg.seed;
          std::vector<double> reps(cfg.replicates);
          for (int k = 0; k < cfg.replicates; ++k) {
            auto batch = dist::partial_sum(law, n, cfg.sample_count,
                                           mix_seed(cfg.seed, n, k));
            reps[k] = metrics::w1_vs_quantile(
                metrics::SortedSample::from(std::move(batch.values)), q);
          }
          double mean = 0.0;
          for (double v : reps) mean += v;
          mean /= reps.size();
          double var = 0.0;
          for (double v : reps) var += (v - mean) * (v - mean);
          if (reps.size() > 1) var /= double(reps.size() - 1);
          r.estimate = metrics::median_of(reps);
          r.stderr_or_residual = std::sqrt(var / double(reps.size()));
          return r;
        },
        mc_out, &mc_dists);
    for (auto& r : mc_out.rows) out.rows.push_back(r);
    for (auto& e : mc_out.row_errors) out.row_errors.push_back(e);
    if (mc_dists.size() == mc_grid.size())
      out.mc_fit = fit_of(mc_grid, mc_dists);
  }
  return out;
}

StudyOutcome run_layered(const ExperimentConfig& cfg) {
  StudyOutcome out;
  const bool cauchy = cfg.study == StudyId::rates_layered_cauchy;
  const double alpha = cauchy ? 1.0 : cfg.alpha;
  const auto law = dist::InitialLaw::layered(alpha, cfg.beta);
  // Scaling the exponent by the stable density constant c_alpha makes the
  // limit the unit-exponent stable cf exp(-|w|^alpha).
  const double c = spectral::levy_density_constant(alpha);
  const auto grid_w = omega_grid();
  auto target = [alpha](double w) {
    return std::complex<double>(std::exp(-std::pow(w, alpha)), 0.0);
  };
  const auto bound_kind = cauchy ? levy::BoundStudy::layered_cauchy
                                 : levy::BoundStudy::layered_stable;
  std::vector<double> dists;
  collect_rows(
      cfg, cfg.n_grid,
      [&](long n) {
        ResultRow r;
        r.study = study_name(cfg.study);
        r.n_or_R = double(n);
        r.seed = cfg.seed;
        const double bn = std::pow(double(n), -1.0 / alpha);
        auto cfn = [&law, c, bn, n](double w) {
          return std::complex<double>(
              std::exp(c * double(n) *
                       dist::levy_exponent_1d(law, bn * w)),
              0.0);
        };
        r.estimate = metrics::cf_battery_distance(cfn, target, grid_w);
        r.bound = levy::bound_eval(bound_kind, n, {alpha, cfg.beta, 1.0});
        return r;
      },
      out, &dists);
  if (dists.size() == cfg.n_grid.size()) out.fit = fit_of(cfg.n_grid, dists);

  if (!cauchy) {
    // Companion track: the driving integral of the theorem bound (exact
    // quadrature), whose slope identifies the rate.
    const auto nu = levy::nu_stable_1d(alpha);
    StudyOutcome omega_out;
    collect_rows(
        cfg, cfg.n_grid,
        [&](long n) {
          ResultRow r;
          r.study = study_name(cfg.study) + "-omega";
          r.n_or_R = double(n);
          r.seed = cfg.seed;
          const auto w = levy::weight_layered(n, alpha, cfg.beta);
          r.estimate = levy::omega_error_integrals(w, nu)[0];
          return r;
        },
        omega_out, nullptr);
    for (auto& r : omega_out.rows) out.rows.push_back(r);
    for (auto& e : omega_out.row_errors) out.row_errors.push_back(e);
  }
  return out;
}

void push_report(StudyOutcome& out, const std::string& label,
                 const spectral::SpectralReport& rep, double target,
                 std::uint64_t seed, double seconds) {
  const double per_row = seconds / double(rep.scales.size() + 1);
  for (std::size_t i = 0; i < rep.scales.size(); ++i) {
    out.rows.push_back(
        {label, rep.scales[i], rep.values[i],
         std::numeric_limits<double>::quiet_NaN(),
         std::numeric_limits<double>::quiet_NaN(), per_row, seed});
  }
  // Scale 0 row: the extrapolated limit, its fit residual, and the known
  // target value in the bound column.
  out.rows.push_back(
      {label, 0.0, rep.limit, rep.residual, target, per_row, seed});
}

StudyOutcome run_spectral_suite(const ExperimentConfig& cfg) {
  StudyOutcome out;
  spectral::TruncationLadder big;
  if (!cfg.ladder.empty()) big.scales = cfg.ladder;
  spectral::TruncationLadder small;  // nested quadratures: keep scales modest
  small.scales = {5.0, 10.0, 20.0, 40.0, 80.0};
  if (!cfg.ladder.empty()) small.scales = cfg.ladder;

  double t0 = now_seconds();
  push_report(out, "spectral-rayleigh", spectral::rayleigh_l1rot(big), 0.75,
              cfg.seed, now_seconds() - t0);
  t0 = now_seconds();
  push_report(out, "spectral-form-minus-norm",
              spectral::form_minus_norm_cauchy(big), 2.0 / kPi, cfg.seed,
              now_seconds() - t0);
  t0 = now_seconds();
  const auto carre = spectral::carre_diagnostics(small);
  const double dt = now_seconds() - t0;
  push_report(out, "spectral-carre-ratio", carre.first, 1.0, cfg.seed,
              dt / 2.0);
  push_report(out, "spectral-carre-diff", carre.second, -4.0 / kPi, cfg.seed,
              dt / 2.0);
  return out;
}

StudyOutcome run_stein_suite(const ExperimentConfig& cfg) {
  StudyOutcome out;
  stein::SteinSolveSpec spec;
  spec.alpha = 1.0;
  const auto battery = stein::h2_battery();
  collect_rows(
      cfg, [&] {
        std::vector<long> idx;
        for (long i = 0; i < long(battery.size()); ++i) idx.push_back(i);
        return idx;
      }(),
      [&](long i) {
        ResultRow r;
        r.study = "stein-residual";
        r.n_or_R = double(i);
        r.seed = cfg.seed;
        r.estimate = stein::stein_residual(battery[i], spec);
        r.bound = 5e-3;
        return r;
      },
      out, nullptr);
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const double t0 = now_seconds();
    try {
      const auto b = stein::stein_bounds_check(battery[i], spec);
      const double dt = (now_seconds() - t0) / 3.0;
      out.rows.push_back({"stein-m1", double(i), b.M1_f,
                          std::numeric_limits<double>::quiet_NaN(), 1.0, dt,
                          cfg.seed});
      out.rows.push_back({"stein-m2", double(i), b.M2_f,
                          std::numeric_limits<double>::quiet_NaN(), 0.5, dt,
                          cfg.seed});
      out.rows.push_back({"stein-log-increment-slack", double(i),
                          b.log_increment_slack,
                          std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), dt,
                          cfg.seed});
    } catch (const Error& e) {
      out.row_errors.push_back(e.what());
    }
  }
  return out;
}

StudyOutcome run_specfun_suite(const ExperimentConfig& cfg) {
  StudyOutcome out;
  double t0 = now_seconds();
  const auto [i1, i2] = special::dawson_identity_integrals();
  const double dt = (now_seconds() - t0) / 2.0;
  const double t1 = kPi * kSqrtPi / 4.0;  // pi^{3/2}/4
  const double t2 = kSqrtPi / 4.0;
  out.rows.push_back(
      {"specfun-dawson-id1", 0.0, i1, std::abs(i1 - t1), t1, dt, cfg.seed});
  out.rows.push_back(
      {"specfun-dawson-id2", 0.0, i2, std::abs(i2 - t2), t2, dt, cfg.seed});

  // Closed form through Dawson's integral vs the direct sine-transform
  // quadrature of the sqrt-Laplacian applied to x e^{-x^2}.
  t0 = now_seconds();
  double max_err = 0.0;
  for (double x = -4.0; x <= 4.0 + 1e-12; x += 0.25) {
    const double ref =
        -(1.0 / (2.0 * kSqrtPi)) *
        quad::integrate(
            [x](double xi) {
              return xi * xi * std::exp(-xi * xi / 4.0) * std::sin(x * xi);
            },
            0.0, 40.0, {1e-12, 1e-12, 4000, 15})
            .value;
    max_err = std::max(max_err, std::abs(spectral::a1rot_g1(x) - ref));
  }
  out.rows.push_back({"specfun-sine-transform", 0.0, max_err,
                      std::numeric_limits<double>::quiet_NaN(), 1e-8,
                      now_seconds() - t0, cfg.seed});
  return out;
}

StudyOutcome run_poincare_suite(const ExperimentConfig& cfg) {
  StudyOutcome out;
  using Fn = std::function<double(double)>;
  std::vector<std::pair<Fn, Fn>> fs;
  for (double c : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    fs.emplace_back(
        [c](double x) { return std::exp(-(x - c) * (x - c)); },
        [c](double x) { return -2 * (x - c) * std::exp(-(x - c) * (x - c)); });
    fs.emplace_back([c](double x) { return std::tanh(x - c); },
                    [c](double x) {
                      const double t = std::tanh(x - c);
                      return 1.0 - t * t;
                    });
  }
  for (double k : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    fs.emplace_back([k](double x) { return std::sin(k * x); },
                    [k](double x) { return k * std::cos(k * x); });
    fs.emplace_back([k](double x) { return std::cos(k * x); },
                    [k](double x) { return -k * std::sin(k * x); });
  }
  std::vector<long> idx;
  for (long i = 0; i < long(fs.size()); ++i) idx.push_back(i);
  collect_rows(
      cfg, idx,
      [&](long i) {
        ResultRow r;
        r.study = "poincare";
        r.n_or_R = double(i);
        r.seed = cfg.seed;
        const auto res =
            spectral::poincare_check(fs[i].first, fs[i].second, cfg.alpha);
        r.estimate = res.variance;
        r.bound = res.dirichlet_form;
        r.stderr_or_residual = res.dirichlet_form - res.variance;
        return r;
      },
      out, nullptr);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config line " + std::to_string(line) + ": bad number '" +
                     v + "' for key " + key);
  }
}

long parse_long(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config line " + std::to_string(line) +
                     ": bad integer '" + v + "' for key " + key);
  }
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string num_field(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string study_name(StudyId id) {
  for (const auto& [name, sid] : name_table())
    if (sid == id) return name;
  throw ValidationError("study_name: unknown study id");
}

StudyId study_from_name(const std::string& name) {
  const auto it = name_table().find(name);
  if (it == name_table().end())
    throw ValidationError("unknown study '" + name + "'");
  return it->second;
}

void ExperimentConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw ValidationError("config field alpha: must lie in (0, 2)");
  if (!(beta > 0.0 && beta < 2.0))
    throw ValidationError("config field beta: must lie in (0, 2)");
  if (d != 1) throw ValidationError("config field d: only d = 1 studies");
  if (study == StudyId::rates_canonical_stable ||
      study == StudyId::rates_pareto_sym ||
      study == StudyId::rates_layered_stable) {
    if (!(alpha > 1.0))
      throw ValidationError("config field alpha: rates studies need (1, 2)");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1)
      throw ValidationError("config field n_grid: entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw ValidationError("config field n_grid: strictly increasing");
  }
  if (sample_count < 1)
    throw ValidationError("config field sample_count: must be >= 1");
  if (replicates < 1)
    throw ValidationError("config field replicates: must be >= 1");
  if (workers < 1) throw ValidationError("config field workers: must be >= 1");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0))
      throw ValidationError("config field ladder: scales must be positive");
    if (i > 0 && ladder[i] <= ladder[i - 1])
      throw ValidationError("config field ladder: strictly increasing");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string stripped =
        trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(line) +
                       ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(line) + ": empty key");
    if (seen.count(key))
      throw ParseError("config line " + std::to_string(line) +
                       ": duplicate key '" + key + "' (first at line " +
                       std::to_string(seen[key]) + ")");
    seen[key] = line;
    if (key == "study") {
      cfg.study = study_from_name(value);
    } else if (key == "alpha") {
      cfg.alpha = parse_double(value, key, line);
    } else if (key == "beta") {
      cfg.beta = parse_double(value, key, line);
    } else if (key == "d") {
      cfg.d = int(parse_long(value, key, line));
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      for (const auto& p : split_commas(value))
        cfg.n_grid.push_back(parse_long(p, key, line));
    } else if (key == "sample_count") {
      cfg.sample_count = parse_long(value, key, line);
    } else if (key == "replicates") {
      cfg.replicates = int(parse_long(value, key, line));
    } else if (key == "mc_track") {
      if (value == "1" || value == "true")
        cfg.mc_track = true;
      else if (value == "0" || value == "false")
        cfg.mc_track = false;
      else
        throw ParseError("config line " + std::to_string(line) +
                         ": mc_track must be 0/1/true/false");
    } else if (key == "ladder") {
      cfg.ladder.clear();
      for (const auto& p : split_commas(value))
        cfg.ladder.push_back(parse_double(p, key, line));
    } else if (key == "seed") {
      cfg.seed = std::uint64_t(parse_long(value, key, line));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "workers") {
      cfg.workers = int(parse_long(value, key, line));
    } else {
      throw ParseError("config line " + std::to_string(line) +
                       ": unknown key '" + key + "'");
    }
  }
  if (cfg.n_grid.empty()) cfg.n_grid = default_n_grid(cfg.study);
  cfg.validate();
  return cfg;
}

StudyOutcome run_study(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  if (cfg.n_grid.empty()) cfg.n_grid = default_n_grid(cfg.study);
  cfg.validate();
  switch (cfg.study) {
    case StudyId::rates_canonical_stable:
      return run_canonical_stable(cfg);
    case StudyId::rates_pareto_sym:
      return run_pareto_sym(cfg);
    case StudyId::rates_layered_stable:
    case StudyId::rates_layered_cauchy:
      return run_layered(cfg);
    case StudyId::spectral_suite:
      return run_spectral_suite(cfg);
    case StudyId::stein_suite:
      return run_stein_suite(cfg);
    case StudyId::specfun_suite:
      return run_specfun_suite(cfg);
    case StudyId::poincare_suite:
      return run_poincare_suite(cfg);
  }
  throw ValidationError("run_study: unknown study id");
}

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  for (const auto& r : rows) {
    if (!std::isfinite(r.estimate))
      throw ValidationError("emit_csv: non-finite estimate in study " +
                            r.study);
    if (r.seconds < 0.0)
      throw ValidationError("emit_csv: negative seconds in study " + r.study);
  }
  os << "study,n_or_R,estimate,stderr,bound,seconds,seed\n";
  for (const auto& r : rows) {
    os << csv_field(r.study) << ',' << num_field(r.n_or_R) << ','
       << num_field(r.estimate) << ',' << num_field(r.stderr_or_residual)
       << ',' << num_field(r.bound) << ',' << num_field(r.seconds) << ','
       << r.seed << '\n';
  }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("emit_csv: cannot open '" + path + "'");
  emit_csv(rows, os);
  if (!os.good()) throw IoError("emit_csv: write failed for '" + path + "'");
}

}  // namespace slb::study
