#pragma once

// Configuration, experiment orchestration, persistence and reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsfstab/error.hpp"
#include "nsfstab/evolution.hpp"
#include "nsfstab/functionals.hpp"
#include "nsfstab/steady.hpp"
#include "nsfstab/thermo.hpp"

namespace nsfstab {

struct ConvergenceSettings {
  int levels = 3;             // dt levels and h levels
  double t_probe = 5.0;       // physical time at which identities are compared, s
  int coarse_nx = 32;         // coarsest grid of the h study (doubled per level)
  double dt_fraction = 0.25;  // h study: dt = fraction * stable dt of the finest grid
};

struct RunConfig {
  int nx = 64;
  int ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  Material material;
  BoundaryProfile boundary = BoundaryProfile::constant(300.0);
  double steady_tol = 1e-10;
  InitialPerturbation initial;
  double m = 0.6;
  double n = 0.9;
  std::vector<double> l_values{3.0};
  double t_end = 10.0;
  double sample_interval = 1.0;
  StepControl step;
  std::string output_dir = "out";
  bool snapshots = false;
  ConvergenceSettings convergence;

  Grid grid() const { return Grid(nx, ny, lx, ly); }
  ExponentPair pair() const { return ExponentPair(m, n); }

  // Throws Error(kInput) naming the first violated invariant.
  void validate() const;
};

// Parses the JSON schema documented in the README. Unknown keys are
// rejected; missing keys take their defaults. `source` labels messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
// Reads a file, or standard input when path is "-".
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& config);

struct Criterion {
  std::string id;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::vector<Criterion> criteria;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::pair<std::string, double>> values;  // raw numbers for offline use
  std::vector<std::pair<std::string, double>> timings;  // seconds
  std::optional<std::string> error;
  std::optional<ErrorCategory> error_category;

  bool all_passed() const;
  void add(Criterion c) { criteria.push_back(std::move(c)); }
  std::string to_json() const;
};

inline constexpr int kSchemaVersion = 1;

// Exit code convention: 0 all-pass, 1 criterion failure, 2 input error,
// 3 numerical failure.
int exit_code_for(const RunReport& report);
int exit_code_for(ErrorCategory category);

struct ExperimentResult {
  FunctionalTrace trace;
  RunReport report;
  long steps = 0;
  double max_divergence = 0.0;
  double max_cell_reynolds = 0.0;
  double max_cell_peclet = 0.0;
};

struct ExperimentOptions {
  bool write_files = true;
  std::ostream* log = nullptr;  // warnings and progress; null for quiet
};

// Solves the steady state, integrates, samples every functional, writes
// trace.csv, summary.json and optional snapshots into config.output_dir.
// Solver and positivity failures are captured in report.error with the
// partial trace flushed; input errors propagate as exceptions.
ExperimentResult run_experiment(const RunConfig& config, const ExperimentOptions& options = {});

// Run-level criteria for a finished trace (energy envelope, decay,
// differential inequality, Lemma 1 hypotheses, non-negativity).
void evaluate_run_criteria(const RunConfig& config, const SteadyState& steady,
                           ExperimentResult& result);

void write_trace_csv(const FunctionalTrace& trace, std::ostream& os);

// Scalar lemma suite: x_crit, the two lemma 9 constants, random (m, n)
// property sweeps and the constraint-sharpness probe.
RunReport verify_lemmas(std::uint64_t seed = 1, int pairs = 50, int samples = 10000);

// Refinement study of the energy identity, the Lyapunov derivative
// formulas and the pointwise identities.
RunReport convergence_study(const RunConfig& config, std::ostream* log = nullptr);

// Steady solve only.
RunReport steady_report(const RunConfig& config);

// Korn check on random no-slip fields on grid n and 2n:
// |2 int D:D - int |grad v|^2 - int (div v)^2| / int |grad v|^2,
// with |grad v|^2 interpolated to cell centres.
struct KornResult {
  double coarse = 0.0;
  double fine = 0.0;
  double ratio = 0.0;
};
KornResult korn_check(int n, std::uint64_t seed, int modes = 3);

// Writes a field as CSV rows (j outer) plus a JSON sidecar.
void write_snapshot(const std::string& dir, const std::string& name, const std::vector<double>& values,
                    int cols, int rows, double t);

}  // namespace nsfstab
