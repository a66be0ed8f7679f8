#include "isoshock/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "isoshock/errors.hpp"

namespace isoshock {

namespace {

constexpr int kMaxIterations = 100;
// Relative density gap below which a wave is treated as having zero strength.
constexpr double kZeroStrength = 1e-12;

// Wave curve in the log-density variable s = ln(rho): 2 sinh((s - s0)/2) on
// the shock branch, (s - s0) on the rarefaction branch.
inline double phi_log(double s, double s0) {
  const double d = s - s0;
  return d >= 0.0 ? 2.0 * std::sinh(0.5 * d) : d;
}

WaveKind classify(double rho_m, double rho_side) {
  if (std::abs(rho_m - rho_side) <= kZeroStrength * rho_side) return WaveKind::none;
  return rho_m > rho_side ? WaveKind::shock : WaveKind::rarefaction;
}

}  // namespace

bool operator==(const GasState& a, const GasState& b) {
  return a.rho == b.rho && a.u == b.u && a.v == b.v;
}

void validate(const GasState& s) {
  if (!(std::isfinite(s.rho) && std::isfinite(s.u) && std::isfinite(s.v)))
    throw DomainError("gas state has non-finite fields");
  if (!(s.rho > 0.0)) throw DomainError("gas state density must be positive");
}

const char* to_string(WaveKind k) {
  switch (k) {
    case WaveKind::none: return "none";
    case WaveKind::shock: return "shock";
    case WaveKind::rarefaction: return "rarefaction";
  }
  return "?";
}

double wave_curve_phi(double rho, double rho0) {
  if (!(rho > 0.0) || !(rho0 > 0.0)) throw DomainError("wave_curve_phi: densities must be positive");
  if (rho >= rho0) return (rho - rho0) / std::sqrt(rho * rho0);
  return std::log(rho / rho0);
}

double wave_curve_phi_derivative(double rho, double rho0) {
  if (!(rho > 0.0) || !(rho0 > 0.0)) throw DomainError("wave_curve_phi: densities must be positive");
  if (rho >= rho0) return 0.5 * (rho + rho0) / (rho * std::sqrt(rho * rho0));
  return 1.0 / rho;
}

RiemannFan solve_middle_state(const GasState& left, const GasState& right, double tol) {
  if (!(left.rho > 0.0) || !(right.rho > 0.0))
    throw DomainError("solve_middle_state: densities must be positive");
  return solve_middle_state_log(left, std::log(left.rho), right, std::log(right.rho), tol);
}

RiemannFan solve_middle_state_log(const GasState& left, double sl, const GasState& right, double sr,
                                  double tol) {
  const double du = right.u - left.u;
  // Residual and slope share one exponential per shock side.
  auto eval = [&](double s, double& slope) {
    double f = du, g = 0.0;
    for (double s0 : {sl, sr}) {
      const double d = s - s0;
      if (d >= 0.0) {
        const double e = std::exp(0.5 * d), ie = 1.0 / e;
        f += e - ie;
        g += 0.5 * (e + ie);
      } else {
        f += d;
        g += 1.0;
      }
    }
    slope = g;
    return f;
  };

  double lo = std::min(sl, sr) + std::log(1e-6);
  double hi = std::max(sl, sr) + std::log(1e6);
  auto unbracketed = [&]() {
    std::ostringstream msg;
    msg << "solve_middle_state: root not bracketed in rho in [" << std::exp(lo) << ", "
        << std::exp(hi) << "]";
    return ConvergenceError(msg.str(), std::exp(lo), std::exp(hi));
  };
  // lo is below both states, where both waves are rarefactions.
  if ((lo - sl) + (lo - sr) + du > 0.0) throw unbracketed();

  // The two-rarefaction root is exact when both waves are rarefactions and
  // otherwise lies on the right of the true root; f is convex in s, so Newton
  // from here approaches the root monotonically.
  double slope = 0.0;
  double s = std::clamp(0.5 * (sl + sr) - 0.5 * du, lo, hi);
  double f = eval(s, slope);
  if (s == hi && f < 0.0) throw unbracketed();
  // Achievable precision is limited by the magnitude of the summed terms.
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(left.u) + std::abs(right.u) + 1.0);
  const double target = std::max(tol, floor);
  int it = 0;
  while (std::abs(f) > target) {
    if (++it > kMaxIterations) {
      std::ostringstream msg;
      msg << "solve_middle_state: tolerance " << tol << " not reached; residual " << f
          << ", bracket rho in [" << std::exp(lo) << ", " << std::exp(hi) << "]";
      throw ConvergenceError(msg.str(), std::exp(lo), std::exp(hi));
    }
    if (f > 0.0) hi = s; else lo = s;
    double next = s - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) break;
    s = next;
    f = eval(s, slope);
  }

  RiemannFan fan;
  fan.left = left;
  fan.right = right;
  fan.iterations = it;
  fan.residual = f;
  const double rho_m = std::exp(s);
  const double phil = phi_log(s, sl);
  const double phir = phi_log(s, sr);
  // Averaging both sides keeps the solver exactly covariant under reflection.
  const double u_m = 0.5 * ((left.u - phil) + (right.u + phir));
  fan.middle = GasState{rho_m, u_m, 0.0};
  fan.contact_speed = u_m;
  fan.left_wave = classify(rho_m, left.rho);
  fan.right_wave = classify(rho_m, right.rho);

  if (fan.left_wave == WaveKind::rarefaction) {
    fan.sigma_minus = left.u - 1.0;
    fan.left_tail = u_m - 1.0;
  } else {
    fan.sigma_minus = u_m - std::sqrt(left.rho / rho_m);
    fan.left_tail = fan.sigma_minus;
  }
  if (fan.right_wave == WaveKind::rarefaction) {
    fan.sigma_plus = right.u + 1.0;
    fan.right_tail = u_m + 1.0;
  } else {
    fan.sigma_plus = u_m + std::sqrt(right.rho / rho_m);
    fan.right_tail = fan.sigma_plus;
  }
  return fan;
}

EntropyReport check_entropy(const RiemannFan& fan) {
  EntropyReport rep;
  const double um = fan.contact_speed;
  rep.u_left = fan.left.u - um;
  rep.u_right = fan.right.u - um;
  rep.sigma_minus = fan.sigma_minus - um;
  rep.sigma_plus = fan.sigma_plus - um;
  if (fan.left_wave == WaveKind::none || fan.right_wave == WaveKind::none) {
    rep.applicable = false;
    rep.admissible = false;
    rep.violations.emplace_back("not applicable: zero-strength wave");
    return rep;
  }
  rep.applicable = true;
  const double rm = fan.middle.rho;
  auto need = [&](bool ok, const char* what) {
    if (!ok) rep.violations.emplace_back(what);
  };
  need(rm > fan.left.rho, "rho_m > rho_l violated");
  need(rm > fan.right.rho, "rho_m > rho_r violated");
  need(rep.u_left > 0.0, "u_l > 0 violated");
  need(rep.u_right < 0.0, "u_r < 0 violated");
  need(1.0 + rep.u_right < rep.sigma_plus && rep.sigma_plus < 1.0,
       "1 + u_r < sigma_+ < 1 violated");
  need(-1.0 < rep.sigma_minus && rep.sigma_minus < -1.0 + rep.u_left,
       "-1 < sigma_- < -1 + u_l violated");
  rep.admissible = rep.violations.empty();
  return rep;
}

std::pair<double, double> rh_residual(const GasState& upstream, const GasState& downstream,
                                      double speed) {
  const double jump_rho = downstream.rho - upstream.rho;
  const double mu = downstream.rho * downstream.u;
  const double mu0 = upstream.rho * upstream.u;
  const double jump_mom = mu - mu0;
  const double jump_flux = (mu * downstream.u + downstream.rho) - (mu0 * upstream.u + upstream.rho);
  return {speed * jump_rho - jump_mom, speed * jump_mom - jump_flux};
}

GasState sample_self_similar(const RiemannFan& fan, double xi) {
  const double um = fan.contact_speed;
  if (xi < um) {
    const GasState& l = fan.left;
    if (fan.left_wave == WaveKind::rarefaction) {
      if (xi <= fan.sigma_minus) return l;
      if (xi >= fan.left_tail) return GasState{fan.middle.rho, um, l.v};
      const double u = xi + 1.0;
      return GasState{l.rho * std::exp(l.u - u), u, l.v};
    }
    if (xi < fan.sigma_minus) return l;
    return GasState{fan.middle.rho, um, l.v};
  }
  const GasState& r = fan.right;
  if (fan.right_wave == WaveKind::rarefaction) {
    if (xi >= fan.sigma_plus) return r;
    if (xi <= fan.right_tail) return GasState{fan.middle.rho, um, r.v};
    const double u = xi - 1.0;
    return GasState{r.rho * std::exp(u - r.u), u, r.v};
  }
  if (xi > fan.sigma_plus) return r;
  return GasState{fan.middle.rho, um, r.v};
}

}  // namespace isoshock
