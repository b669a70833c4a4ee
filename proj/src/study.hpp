#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace slb::study {

enum class StudyId {
  rates_canonical_stable,
  rates_pareto_sym,
  rates_layered_stable,
  rates_layered_cauchy,
  spectral_suite,
  stein_suite,
  specfun_suite,
  poincare_suite
};

// "rates-canonical-stable" etc.; from_string throws ValidationError on an
// unknown id.
std::string study_name(StudyId id);
StudyId study_from_name(const std::string& name);

struct ExperimentConfig {
  StudyId study = StudyId::rates_canonical_stable;
  double alpha = 1.5;
  double beta = 1.8;
  int d = 1;
  std::vector<long> n_grid;       // empty = per-study default (doubling)
  long sample_count = 200000;     // MC track batch size per n
  int replicates = 5;             // median-of-replicates for MC rows
  bool mc_track = false;          // heavy Monte Carlo W1 track (rates studies)
  std::vector<double> ladder;     // empty = per-study default scales
  std::uint64_t seed = 1;
  std::string out;                // CSV path; empty = no file
  int workers = 1;

  void validate() const;
};

// key = value lines, '#' comments, unknown keys rejected, duplicates are
// ParseError (with line number); values validated field by field.
ExperimentConfig parse_config(const std::string& text);

struct ResultRow {
  std::string study;     // study id, possibly with a track suffix
  double n_or_R = 0.0;
  double estimate = 0.0;
  double stderr_or_residual = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();  // NaN = none
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

struct StudyOutcome {
  std::vector<ResultRow> rows;
  std::optional<metrics::RateFit> fit;     // deterministic rates track
  std::optional<metrics::RateFit> mc_fit;  // Monte Carlo track (if run)
  std::vector<std::string> row_errors;     // messages; rows for these are kept
                                           // out, remaining rows still emitted
};

// Deterministic for fixed (config, seed) regardless of worker count; rows
// for a rates study carry the evaluated theorem bound where one is defined.
StudyOutcome run_study(const ExperimentConfig& config);

// Header `study,n_or_R,estimate,stderr,bound,seconds,seed`, 17 significant
// digits, RFC-4180 quoting, trailing newline; NaN fields emitted empty.
// Non-finite estimates are refused with ValidationError before writing.
void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace slb::study
