// Weighted blow-up functionals X, Y, S, Z, W on field snapshots, front
// localization, and the residual / inequality reports built on them.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "isoshock/euler2d.hpp"

namespace isoshock {

/// e^y + e^-y, the weight of X, S and M.
inline double weight_even(double y) { return std::exp(y) + std::exp(-y); }
/// e^y - e^-y, the weight of Y.
inline double weight_odd(double y) { return std::exp(y) - std::exp(-y); }

/// Per-row front positions; entry j belongs to grid row j.
struct FrontLocus {
  double t = 0.0;
  std::vector<double> y;
  std::vector<double> pi_minus, pi_zero, pi_plus;
};

/// Tracer zero crossing nearest u_m t for the contact; half-level density
/// crossings scanning outward from it for the shocks. When the density at
/// the contact is below a shock's half level (no resolved middle state yet,
/// e.g. at t = 0) that shock is placed on the contact.
FrontLocus detect_fronts(const ConservedField& field, const RiemannFan& fan);
FrontLocus detect_fronts(const ConservedField& field, const PerturbationSpec& spec);

/// Region-wise weighted integrals of rho minus the region constant plus the
/// two front-displacement terms. Throws ValidationError if a front lies
/// outside the grid.
double compute_X(const ConservedField& field, const FrontLocus& fronts, const RiemannFan& fan);
/// Sum of weight_even * (rho - background) with the background integrated
/// exactly per row. Equals compute_X for a two-shock fan, whatever the fronts.
double compute_X_background(const ConservedField& field, const BackgroundSolution& background);
double compute_Y(const ConservedField& field);
double compute_S(const ConservedField& field);

/// Weighted mass of the disk x^2 + y^2 <= radius^2: grid cells whose center
/// lies inside, plus the background over the part of the disk beyond the grid.
double compute_M(const ConservedField& field, const BackgroundSolution& background, double radius);

/// max over cells with r >= far_radius, away from the detected fronts, of the
/// deviation of (rho, u, v) from the background.
double far_field_deviation(const ConservedField& field, const BackgroundSolution& background,
                           const FrontLocus& fronts, double far_radius, int band_cells = 4);

/// Integral of weight_even * rho0 plus (rho_l - rho_r) * integral of weight_even * Pi.
double hypothesis_x0(const PerturbationSpec& spec, int n = 400);
/// Y at t = 0 computed from the cell averages of the generated initial data.
double initial_Y(const PerturbationSpec& spec, const Grid2D& grid);

struct FunctionalSeries {
  std::vector<double> t, X, Y, S, Z, W, r1, r2, M, holder_slack, far_field;
  /// Set when the producing run stopped before its horizon.
  bool terminated_early = false;
  std::string termination_reason;
  double horizon = 0.0;

  std::size_t size() const { return t.size(); }
  /// Appends one sample; derived columns are filled by compute_W_series.
  void push(double ti, double x, double y, double s, double m = 0.0, double slack = 0.0,
            double far = 0.0);
  void write_csv(const std::string& path) const;
};

/// Fills Z, W, r1 = X' - Y and r2 = Y' - X - S. Z and W use the cumulative
/// trapezoid of Y; derivatives are centered inside and second-order
/// one-sided at the ends. Requires a uniform time grid starting at t = 0.
FunctionalSeries compute_W_series(FunctionalSeries series);

/// Centered / one-sided second-order derivative of samples on a uniform grid.
std::vector<double> uniform_derivative(const std::vector<double>& f, double h);

struct ResidualNorms {
  double h = 0.0;  // grid spacing of the run
  double r1_max = 0.0, r1_l2 = 0.0;
  double r2_max = 0.0, r2_l2 = 0.0;
};

/// Max and L2-in-time norms of r1, r2 over the series.
ResidualNorms residual_norms(const FunctionalSeries& series, double h = 0.0);

struct LadderReport {
  std::vector<ResidualNorms> levels;  // coarse to fine
  std::vector<double> r1_rate, r2_rate;  // L2 rates between consecutive levels
  bool r1_monotone = false, r2_monotone = false;
  double min_rate() const;
};

/// Empirical convergence order log(e_k / e_{k+1}) / log(h_k / h_{k+1}).
std::vector<double> convergence_rates(const std::vector<double>& h, const std::vector<double>& err);
LadderReport verify_lemma31(const std::vector<ResidualNorms>& levels);

struct ChainReport {
  int samples_checked = 0;
  int holder_failures = 0;
  double holder_worst_ratio = 0.0;  // max of Y^2 / (M S)
  double C_M = 0.0;                 // sup of M / ((t+1)^{1/2} e^t) over t >= t0
  double c_riccati = 0.0;           // inf of (Y' - X(0) - int Y) / (Y^2 e^-t (t+1)^{-1/2})
  bool c_defined = false;
  int z_decreases = 0;              // samples where Z dropped beyond tolerance
  double t0 = 1.0;
};

/// Checks the Hoelder step at every sample and estimates the constants of the
/// weighted-mass bound and of the Riccati-type lower bound for t >= t0.
ChainReport verify_inequality_chain(const FunctionalSeries& series, double t0 = 1.0,
                                    double holder_rel_slack = 1e-12, double z_tol = 1e-10);

}  // namespace isoshock
