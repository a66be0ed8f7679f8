// The circle-averaged exponential F(y) = int_{|w|=1} e^{y.w} dsigma on the
// plane, which equals 2 pi I0(|y|), its gradient, and the t = 0 functionals
// of three-dimensional perturbed plane-shock data.
#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace isoshock {

/// Largest radius for which e^r stays finite in double precision with margin.
constexpr double kTestFnMaxRadius = 700.0;

/// 2 pi I0(r) via the special function. Throws DomainError for r < 0,
/// RangeError beyond kTestFnMaxRadius.
double eval_F(double r);
/// Trapezoid rule in the angle; `nodes` = 0 picks 64 + 2 ceil(r).
double eval_F_quadrature(double r, int nodes = 0);
/// Power series 2 pi sum (r^2/4)^k / (k!)^2. Intended for r <= 30.
double eval_F_series(double r);

/// F'(r) = 2 pi I1(r), with quadrature and series counterparts.
double eval_dF(double r);
double eval_dF_quadrature(double r, int nodes = 0);
double eval_dF_series(double r);

/// grad F(y) = F'(|y|) y / |y|, zero at the origin.
std::array<double, 2> eval_gradF(double y1, double y2);

/// Analogues of F and grad F on the zero-sphere {-1, +1}.
inline double sphere0_F(double y) { return std::exp(y) + std::exp(-y); }
inline double sphere0_gradF(double y) { return std::exp(y) - std::exp(-y); }

struct PdeResidualReport {
  double h = 0.0;
  double max_rel_residual = 0.0;      // max |F'' + F'/r - F| / F on (0, r_max]
  double residual_at_1 = 0.0;         // absolute residual at r = 1
  double origin_residual = 0.0;       // |2 F''(0) - F(0)|
  double max_rel_residual_half = 0.0; // same with h/2
  double origin_residual_half = 0.0;
  double order = 0.0;                 // log2 of the ratio of the interior residuals
  double origin_order = 0.0;
};

/// Centered-difference residual of the radial form of Laplacian F = F.
PdeResidualReport verify_pde_identity(double r_max, double h);

struct GrowthReport {
  double sup = 0.0;        // sup of F(r) r^{1/2} e^{-r} on a log-spaced grid
  double argsup = 0.0;
  double tail = 0.0;       // value at r_max
  double limit = 0.0;      // sqrt(2 pi)
  bool nonnegative = true;
  bool finite = true;
};

GrowthReport verify_growth_bound(double r_max, int points = 400);

/// Perturbation of a plane shock in three dimensions; y = (y1, y2).
struct ThreeDInitialData {
  double epsilon = 0.1;
  double rho_l = 1.0, rho_r = 1.0;
  std::function<double(double, double)> interface_profile;          // Pi(y), supp |y| <= 1
  std::function<double(double, double, double)> rho0, v01, v02;     // supp x^2 + |y|^2 <= 1

  /// rho0 = a psi, v0 = b psi (y1, y2), Pi = pi_amplitude psi(|y|) with the
  /// bump psi(r) = (1 - r^2)^4 of the 3-D radius.
  static ThreeDInitialData default_family(double epsilon, double a = 0.5, double b = 1.0,
                                          double pi_amplitude = 0.5);
  void validate() const;
};

struct ThreeDFunctionals {
  double X0 = 0.0;
  double Y0 = 0.0;
  bool x0_nonnegative = false;
  bool y0_positive = false;
};

/// X0 = int F(y) int rho0 dx dy + (rho_l - rho_r) int F Pi dy and
/// Y0 = int int rho(0) grad F(y) . v0 dx dy by midpoint quadrature with n
/// points per direction on the unit cube.
ThreeDFunctionals threeD_initial_functionals(const ThreeDInitialData& data, int n = 64);

}  // namespace isoshock
