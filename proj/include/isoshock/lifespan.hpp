// Riccati comparison ODEs W' >= C W^2 (1+t)^{-q}, their blow-up times, power
// and exponential lifespan fits, and threshold sweeps over epsilon.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isoshock/functionals.hpp"

namespace isoshock {

/// dimension 2 gives q = 1/2, dimension 3 gives q = 1.
struct RiccatiParams {
  double C = 1.0;
  double t0 = 0.0;
  double W0 = 0.1;
  int dimension = 2;

  double exponent() const;
  void validate() const;
};

enum class LifespanMethod { closed_form, numeric, simulation_proxy };
const char* to_string(LifespanMethod m);

struct LifespanEstimate {
  double blowup_time = 0.0;  // horizon when censored
  bool censored = false;
  LifespanMethod method = LifespanMethod::closed_form;
};

LifespanEstimate riccati_blowup_time(const RiccatiParams& p);

/// Closed-form solution of the equality W' = C W^2 (1+t)^{-q} from (t0, W0);
/// +inf at and after the blow-up time.
double riccati_solution(const RiccatiParams& p, double t);

/// Time at which the closed-form solution reaches `level` (+inf if never).
double riccati_threshold_time(const RiccatiParams& p, double level);

struct RiccatiTrajectory {
  std::vector<double> t, W;
  LifespanEstimate estimate;
};

/// Integrates the equality version in the variable s = ln W (where it is
/// regular up to the singularity) by RK4 with step-doubling error control at
/// local tolerance 1e-10. Blow-up is declared once W >= 1/(machine eps * W0);
/// no single step advances t by more than `dt`.
RiccatiTrajectory integrate_riccati(const RiccatiParams& p, double horizon, double dt);

struct FitResult {
  double slope = 0.0;      // exponent p (power law) or rate c (exponential law)
  double prefactor = 0.0;  // A
  double max_rel_residual = 0.0;
};

/// Least squares log T = p log eps + log A.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& samples);
/// Least squares log T = c / eps + log A.
FitResult fit_exp_law(const std::vector<std::pair<double, double>>& samples);

struct SweepEntry {
  double epsilon = 0.0;
  LifespanEstimate estimate;
  double threshold = 0.0;              // absolute W level actually used
  std::optional<double> breakdown_time;  // when the run ended early
  std::string breakdown_reason;
};

/// Overloads that reject censored entries.
FitResult fit_power_law(const std::vector<SweepEntry>& entries);
FitResult fit_exp_law(const std::vector<SweepEntry>& entries);

/// Either a fixed W level or a multiple of W at the first sample with t >= t_ref.
struct Threshold {
  enum class Kind { absolute, relative } kind = Kind::relative;
  double value = 1e3;
  double t_ref = 1.0;

  static Threshold absolute_level(double w) { return {Kind::absolute, w, 0.0}; }
  static Threshold relative_factor(double f, double t_ref = 1.0) { return {Kind::relative, f, t_ref}; }
  double level_for(const FunctionalSeries& s) const;
};

using SeriesDriver = std::function<FunctionalSeries(double epsilon)>;

/// Per epsilon, the first sample time with W >= threshold; censored at the
/// series horizon otherwise. Results are ordered by epsilon. A driver
/// exception is rethrown as SweepError naming the epsilon.
std::vector<SweepEntry> lifespan_sweep(std::vector<double> plan, const Threshold& threshold,
                                       const SeriesDriver& driver);

/// Samples the closed-form 2-D/3-D Riccati W on t = 0, h, 2h, ... up to the
/// horizon or the blow-up time (whichever comes first); X, Y, S are zero.
FunctionalSeries riccati_series(const RiccatiParams& p, double horizon, double h);

/// Largest relative amount by which a closed-form lower envelope started at
/// any sample exceeds the later samples (<= 0 means the comparison holds).
double comparison_violation(const FunctionalSeries& s, double C, int dimension);

void write_sweep_csv(const std::string& path, const std::vector<SweepEntry>& entries);

}  // namespace isoshock
