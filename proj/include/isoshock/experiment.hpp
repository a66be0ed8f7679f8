// Runs that combine the solver with the functional diagnostics, and the
// mode drivers behind the command-line tool.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isoshock/config.hpp"
#include "isoshock/euler2d.hpp"
#include "isoshock/functionals.hpp"
#include "isoshock/lifespan.hpp"

namespace isoshock {

PerturbationSpec make_spec(const ExperimentConfig& c, double epsilon);
PerturbationSpec make_spec(const ExperimentConfig& c);

/// Grid of the config with nx and ny multiplied by 2^level.
Grid2D make_grid(const ExperimentConfig& c, int level = 0);

struct DiagnosticsOptions {
  double t_max = 2.0;
  int stride = 0;  // solver steps per sample at the initial time step; 0 gives dt_sample ~ dx
  SupportCone cone;
  double support_tol = 1e-8;
  double violation_factor = 2.0;  // v multiplier of the manufactured series
  StepOptions step;
};

DiagnosticsOptions make_diagnostics_options(const ExperimentConfig& c);

struct RunOutcome {
  FunctionalSeries series;        // with Z, W, r1, r2 filled
  FunctionalSeries manufactured;  // same run with v scaled in post-processing
  double sample_dt = 0.0;
  double h = 0.0;                 // dx of the run
  long steps = 0;
  double x_route_max_diff = 0.0;  // max |compute_X - compute_X_background| / max(1, |X|)
  double support_max_violation = 0.0;  // max |v| outside the all-time cone over the samples
  int support_failures = 0;
  double boundary_mass_inflow = 0.0;
  std::optional<std::string> breakdown;  // set when the solver signalled blow-up
  ConservedField final_field;
};

/// Advances the perturbed problem to t_max, sampling the functionals on a
/// uniform time grid. A blow-up signal ends the run early and is recorded.
RunOutcome run_with_diagnostics(const PerturbationSpec& spec, const Grid2D& grid,
                                const DiagnosticsOptions& options);

struct LadderOutcome {
  std::vector<RunOutcome> runs;  // coarse to fine
  LadderReport lemma;
  LadderReport manufactured;
};

/// Same problem on grids refined by factors of two; residuals on each level.
LadderOutcome run_ladder(const ExperimentConfig& c, int levels);

/// Sweep driver that runs the solver for each epsilon with the config grid.
SeriesDriver simulation_driver(const ExperimentConfig& c);
/// Sweep driver emitting closed-form Riccati W with W0 = riccati_k * epsilon.
SeriesDriver riccati_driver(const ExperimentConfig& c);
Threshold make_threshold(const ExperimentConfig& c);

enum class Mode { simulate, verify_identities, sweep, testfn };

/// Exit status of a mode run.
enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitBreakdown = 3, kExitInternal = 4 };

/// Runs one mode, writing artifacts under c.output_dir (created if needed)
/// and a short log to `log`. Returns an ExitCode; exceptions are not mapped.
int run_experiment(const ExperimentConfig& c, Mode mode, std::ostream& log);

/// Text reports, shared by run_experiment and the bindings.
std::string testfn_report(const ExperimentConfig& c);
std::string riemann_report(const GasState& left, const GasState& right);

}  // namespace isoshock
