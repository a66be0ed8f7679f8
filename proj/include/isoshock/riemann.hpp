// Exact Riemann solver for the isothermal Euler equations (p = rho, unit
// sound speed). Works in the lab frame; the entropy check shifts to the frame
// in which the contact is at rest.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace isoshock {

/// Primitive state. Pressure is not stored: p = rho.
struct GasState {
  double rho = 1.0;
  double u = 0.0;  // normal velocity
  double v = 0.0;  // tangential velocity, carried passively in 1-D solves
};

bool operator==(const GasState& a, const GasState& b);

/// Throws DomainError unless rho > 0 and all fields are finite.
void validate(const GasState& s);

enum class WaveKind { none, shock, rarefaction };

const char* to_string(WaveKind k);

/// Solved 1-D wave structure. For a rarefaction, sigma_* is the head speed and
/// *_tail the tail speed; for a shock both coincide.
struct RiemannFan {
  GasState left, middle, right;
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;
  double left_tail = 0.0;
  double right_tail = 0.0;
  WaveKind left_wave = WaveKind::none;
  WaveKind right_wave = WaveKind::none;
  double contact_speed = 0.0;  // u_m
  int iterations = 0;
  double residual = 0.0;
};

struct DensityBounds {
  double rho_star;
  double rho_star_upper;
};

/// Velocity jump across a single wave with downstream density `rho` and
/// upstream density `rho0`: shock branch (rho-rho0)/sqrt(rho*rho0) for
/// rho >= rho0, Riemann-invariant branch ln(rho/rho0) otherwise.
double wave_curve_phi(double rho, double rho0);

/// d(phi)/d(rho).
double wave_curve_phi_derivative(double rho, double rho0);

constexpr double kDefaultRiemannTol = 1e-12;

/// Solve u_l - phi(rho_m; rho_l) = u_r + phi(rho_m; rho_r) for the middle
/// density by safeguarded Newton (log-density variable) with bisection
/// fallback on [min(rho)*1e-6, max(rho)*1e6]. Throws ConvergenceError if the
/// root is not bracketed or `tol` is not met.
RiemannFan solve_middle_state(const GasState& left, const GasState& right,
                              double tol = kDefaultRiemannTol);

/// solve_middle_state with the log densities supplied by the caller and no
/// input validation; the flux kernel caches ln(rho) per cell.
RiemannFan solve_middle_state_log(const GasState& left, double log_rho_left, const GasState& right,
                                  double log_rho_right, double tol = kDefaultRiemannTol);

struct EntropyReport {
  bool applicable = false;
  bool admissible = false;
  std::vector<std::string> violations;
  // fan quantities in the frame where the contact is at rest
  double u_left = 0.0, u_right = 0.0, sigma_minus = 0.0, sigma_plus = 0.0;
};

/// Two-shock admissibility: rho_m > rho_l, rho_m > rho_r, u_l > 0, u_r < 0,
/// 1 + u_r < sigma_+ < 1 and -1 < sigma_- < -1 + u_l, all in the contact
/// frame. Not applicable when either wave has zero strength.
EntropyReport check_entropy(const RiemannFan& fan);

/// Rankine-Hugoniot residuals s[rho]-[rho u] and s[rho u]-[rho u^2 + rho],
/// with [q] = q(downstream) - q(upstream).
std::pair<double, double> rh_residual(const GasState& upstream, const GasState& downstream,
                                      double speed);

/// Exact self-similar solution at xi = x/t.
GasState sample_self_similar(const RiemannFan& fan, double xi);

}  // namespace isoshock
