#include "isoshock/testfn3d.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "isoshock/errors.hpp"

namespace isoshock {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_radius(double r) {
  if (!(r >= 0.0)) throw DomainError("test function: radius must be non-negative");
  if (r > kTestFnMaxRadius) {
    std::ostringstream msg;
    msg << "test function: radius " << r << " beyond the overflow-safe limit " << kTestFnMaxRadius;
    throw RangeError(msg.str());
  }
}

int default_nodes(double r) { return 64 + 2 * static_cast<int>(std::ceil(r)); }

// Trapezoid rule for int_0^{2pi} cos(m theta) e^{r cos theta} dtheta, m in {0, 1}.
double angular_trapezoid(double r, int m, int nodes) {
  if (nodes <= 0) nodes = default_nodes(r);
  const double h = kTwoPi / nodes;
  double s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double c = std::cos(k * h);
    s += (m == 0 ? 1.0 : c) * std::exp(r * c);
  }
  return s * h;
}

double bump3(double r) {
  if (!(r < 1.0)) return 0.0;
  const double s = 1.0 - r * r;
  return s * s * s * s;
}

}  // namespace

double eval_F(double r) {
  check_radius(r);
  return kTwoPi * std::cyl_bessel_i(0.0, r);
}

double eval_F_quadrature(double r, int nodes) {
  check_radius(r);
  return angular_trapezoid(r, 0, nodes);
}

double eval_F_series(double r) {
  check_radius(r);
  const double q = 0.25 * r * r;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return kTwoPi * sum;
}

double eval_dF(double r) {
  check_radius(r);
  return kTwoPi * std::cyl_bessel_i(1.0, r);
}

double eval_dF_quadrature(double r, int nodes) {
  check_radius(r);
  return angular_trapezoid(r, 1, nodes);
}

double eval_dF_series(double r) {
  check_radius(r);
  const double q = 0.25 * r * r;
  double term = 0.5 * r, sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return kTwoPi * sum;
}

std::array<double, 2> eval_gradF(double y1, double y2) {
  const double r = std::hypot(y1, y2);
  check_radius(r);
  if (r == 0.0) return {0.0, 0.0};
  const double d = eval_dF(r) / r;
  return {d * y1, d * y2};
}

PdeResidualReport verify_pde_identity(double r_max, double h) {
  if (!(h > 0.0) || !(r_max > 2.0 * h)) throw ValidationError("verify_pde_identity: need 0 < 2h < r_max");
  PdeResidualReport rep;
  rep.h = h;
  auto interior = [&](double hh, double& at_one) {
    constexpr int n = 200;
    double worst = 0.0;
    auto res = [&](double r) {
      const double fm = eval_F(std::abs(r - hh)), f0 = eval_F(r), fp = eval_F(r + hh);
      const double d2 = (fp - 2.0 * f0 + fm) / (hh * hh);
      const double d1 = (fp - fm) / (2.0 * hh);
      return d2 + d1 / r - f0;
    };
    for (int k = 1; k <= n; ++k) {
      const double r = std::max(4.0 * h, (r_max - hh) * k / n);
      worst = std::max(worst, std::abs(res(r)) / eval_F(r));
    }
    at_one = std::abs(res(1.0));
    return worst;
  };
  auto origin = [&](double hh) {
    // F is even, so F''(0) = 2 (F(h) - F(0)) / h^2.
    const double d2 = 2.0 * (eval_F(hh) - eval_F(0.0)) / (hh * hh);
    return std::abs(2.0 * d2 - eval_F(0.0));
  };
  double dummy = 0.0;
  rep.max_rel_residual = interior(h, rep.residual_at_1);
  rep.max_rel_residual_half = interior(0.5 * h, dummy);
  rep.origin_residual = origin(h);
  rep.origin_residual_half = origin(0.5 * h);
  rep.order = std::log2(rep.max_rel_residual / rep.max_rel_residual_half);
  rep.origin_order = std::log2(rep.origin_residual / rep.origin_residual_half);
  return rep;
}

GrowthReport verify_growth_bound(double r_max, int points) {
  check_radius(r_max);
  if (points < 2 || !(r_max > 1e-3)) throw ValidationError("verify_growth_bound: bad grid");
  GrowthReport rep;
  rep.limit = std::sqrt(kTwoPi);
  const double a = std::log(1e-3), b = std::log(r_max);
  for (int k = 0; k < points; ++k) {
    const double r = std::exp(a + (b - a) * k / (points - 1));
    const double f = eval_F(r);
    const double g = f * std::sqrt(r) * std::exp(-r);
    rep.nonnegative = rep.nonnegative && f >= 0.0;
    rep.finite = rep.finite && std::isfinite(g);
    if (g > rep.sup) {
      rep.sup = g;
      rep.argsup = r;
    }
  }
  rep.tail = eval_F(r_max) * std::sqrt(r_max) * std::exp(-r_max);
  return rep;
}

ThreeDInitialData ThreeDInitialData::default_family(double epsilon, double a, double b, double pi_amplitude) {
  ThreeDInitialData d;
  d.epsilon = epsilon;
  d.interface_profile = [pi_amplitude](double y1, double y2) { return pi_amplitude * bump3(std::hypot(y1, y2)); };
  d.rho0 = [a](double x, double y1, double y2) { return a * bump3(std::sqrt(x * x + y1 * y1 + y2 * y2)); };
  d.v01 = [b](double x, double y1, double y2) { return b * y1 * bump3(std::sqrt(x * x + y1 * y1 + y2 * y2)); };
  d.v02 = [b](double x, double y1, double y2) { return b * y2 * bump3(std::sqrt(x * x + y1 * y1 + y2 * y2)); };
  return d;
}

void ThreeDInitialData::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ValidationError("3-D data: epsilon must be non-negative");
  if (!(rho_l > 0.0) || !(rho_r > 0.0)) throw ValidationError("3-D data: densities must be positive");
  if (!interface_profile || !rho0 || !v01 || !v02) throw ValidationError("3-D data: all profiles must be set");
  for (int k = 0; k < 64; ++k) {
    const double th = kTwoPi * k / 64;
    for (double r : {1.05, 1.5, 2.5}) {
      const double y1 = r * std::cos(th), y2 = r * std::sin(th);
      if (interface_profile(y1, y2) != 0.0) throw ValidationError("3-D data: Pi must vanish for |y| > 1");
      for (double x : {-1.2, 0.0, 1.2})
        if (rho0(x, y1, y2) != 0.0 || v01(x, y1, y2) != 0.0 || v02(x, y1, y2) != 0.0)
          throw ValidationError("3-D data: rho0, v0 must vanish outside the unit ball");
    }
    for (double x : {-1.5, 1.5})
      if (rho0(x, 0.0, 0.0) != 0.0 || v01(x, 0.0, 0.0) != 0.0 || v02(x, 0.0, 0.0) != 0.0)
        throw ValidationError("3-D data: rho0, v0 must vanish outside the unit ball");
  }
}

ThreeDFunctionals threeD_initial_functionals(const ThreeDInitialData& d, int n) {
  d.validate();
  if (n < 4) throw ValidationError("threeD_initial_functionals: n too small");
  const double h = 2.0 / n;
  double x_area = 0.0, x_line = 0.0, y_sum = 0.0;
  for (int j2 = 0; j2 < n; ++j2) {
    const double y2 = -1.0 + (j2 + 0.5) * h;
    for (int j1 = 0; j1 < n; ++j1) {
      const double y1 = -1.0 + (j1 + 0.5) * h;
      const double F = eval_F(std::hypot(y1, y2));
      const auto gF = eval_gradF(y1, y2);
      const double front = d.epsilon * d.interface_profile(y1, y2);
      x_line += F * d.interface_profile(y1, y2);
      double col_rho0 = 0.0, col_y = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = -1.0 + (i + 0.5) * h;
        const double r0 = d.rho0(x, y1, y2);
        col_rho0 += r0;
        const double rho = (x > front ? d.rho_r : d.rho_l) + d.epsilon * r0;
        col_y += rho * (gF[0] * d.v01(x, y1, y2) + gF[1] * d.v02(x, y1, y2));
      }
      x_area += F * col_rho0;
      y_sum += col_y;
    }
  }
  ThreeDFunctionals out;
  out.X0 = x_area * h * h * h + (d.rho_l - d.rho_r) * x_line * h * h;
  out.Y0 = y_sum * h * h * h;
  out.x0_nonnegative = out.X0 >= 0.0;
  out.y0_positive = out.Y0 > 0.0;
  return out;
}

}  // namespace isoshock
