#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "adeglab/amplify.hpp"
#include "adeglab/boolfn.hpp"
#include "adeglab/degrees.hpp"
#include "adeglab/gadgets.hpp"

namespace adeglab {

std::string_view library_version();

/// Runs job(0..count-1) on up to `jobs` threads. Results must be written by
/// index so that output order never depends on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& job);

struct NamedFunction {
  std::string id;
  BooleanFunction fn;
};

/// Parses an expression and keeps its canonical text as the id.
NamedFunction named(std::string_view expr);

/// Key/value provenance lines written as '#' comments ahead of every table.
struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;

  Manifest& add(std::string key, std::string value);
  void write_comments(std::ostream& out) const;
  Json to_json() const;
};

// --- composition table ----------------------------------------------------

struct ExperimentRow {
  std::string f_id;
  std::string g_id;
  int total_arity = 0;
  int adeg_f = -1;
  int adeg_g = -1;
  int adeg_fg = -1;
  int deg_f = -1;
  int deg_g = -1;
  int deg_fg = -1;
  double lambda_f = 0;
  double lambda_g = 0;
  double lambda_fg = 0;
  /// adeg_fg / (adeg_f * adeg_g); zero when a factor is zero.
  Rational ratio;
  /// max(adeg_f, adeg_g) <= adeg_fg <= deg_f * deg_g.
  bool sandwich_ok = false;
  /// Budget or numerical failure of this row; the other fields are then unset.
  std::string error;
  long long runtime_ms = 0;
};

struct CompositionOptions {
  Rational epsilon{1, 3};
  DegreeOptions degree;
  int jobs = 1;
};

/// The fixed grid of twelve pairs (total arity <= 12).
std::vector<std::pair<NamedFunction, NamedFunction>> default_composition_grid();

std::vector<ExperimentRow> composition_table(const std::vector<std::pair<NamedFunction, NamedFunction>>& pairs,
                                             const CompositionOptions& options);

/// Fixed column order. Runtime is the last column and omitted when
/// with_runtime is false, which makes reruns byte-identical.
void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, const Manifest& manifest,
                    bool with_runtime = true);
/// One manifest line, then one JSON object per row.
void write_rows_jsonl(std::ostream& out, const std::vector<ExperimentRow>& rows, const Manifest& manifest,
                      bool with_runtime = true);
Json row_to_json(const ExperimentRow& row, bool with_runtime = true);

// --- gadget census --------------------------------------------------------

struct CensusEntry {
  BooleanFunction function;
  bool passed = false;
  int and_depth = 0;
  int or_depth = 0;
  SensitiveBlock block;
  std::string failure;
};

struct CensusReport {
  int t = 0;
  std::optional<std::uint64_t> sample;
  std::uint64_t seed = 0;
  /// Functions examined (all 2^(2^t) when exhaustive).
  std::uint64_t examined = 0;
  std::uint64_t qualifying = 0;
  std::uint64_t passed = 0;
  /// Closed-form count of qualifying functions (exhaustive runs only).
  std::optional<std::uint64_t> expected_qualifying;
  std::vector<CensusEntry> entries;
};

/// Functions on t bits that depend on every variable, minus AND, OR and the
/// two parities (inclusion-exclusion over the ignored variables).
std::uint64_t qualifying_count(int t);

/// Exhaustive for t <= 4 unless a sample size is given; sampling draws
/// uniform tables until `sample` qualifying functions have been checked.
CensusReport gadget_census(int t, std::optional<std::uint64_t> sample, std::uint64_t seed, int jobs = 1);

Json census_to_json(const CensusReport& report, bool with_entries);
void write_census_csv(std::ostream& out, const CensusReport& report, const Manifest& manifest);

// --- amplifier pipeline suite ---------------------------------------------

struct PipelineOutcome {
  /// "outer / middle t / inner", for rows that fail before producing a report.
  std::string label;
  std::optional<AmplifierReport> report;
  std::string error;
  /// The run threw InvariantError (as opposed to a limit or precondition).
  bool invariant_error = false;

  bool ok() const { return report && report->invariants_ok(); }
};

/// {AND2, OR2, XOR2} x {XOR2, OR2} x {t = 1, 3} with a MAJ middle, plus a
/// MAJ3 inner run and a one-sided AND-middle run.
std::vector<PipelineConfig> default_pipeline_suite(const Rational& epsilon, const Rational& delta,
                                                   const DegreeOptions& options);

std::vector<PipelineOutcome> pipeline_suite(const std::vector<PipelineConfig>& configs, int jobs = 1);

void write_pipeline_csv(std::ostream& out, const std::vector<PipelineOutcome>& outcomes, const Manifest& manifest);

}  // namespace adeglab
