// First-order Godunov finite-volume solver for 2-D isothermal Euler flow with
// a passive contact tracer, plus the plane-shock background solution and the
// perturbed initial-data generator.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "isoshock/riemann.hpp"

namespace isoshock {

struct Grid2D {
  int nx = 0;
  int ny = 0;
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;

  /// Grid on [-lx, lx] x [-ly, ly].
  static Grid2D symmetric(int nx, int ny, double lx, double ly);

  double dx() const { return (xmax - xmin) / nx; }
  double dy() const { return (ymax - ymin) / ny; }
  double cell_area() const { return dx() * dy(); }
  double xc(int i) const;
  double yc(int j) const;
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  void validate() const;
};

/// Conserved variables of one cell: (rho, rho u, rho v, rho phi).
struct Conserved {
  double rho = 1.0;
  double mx = 0.0;
  double my = 0.0;
  double tracer = 0.0;
};

class ConservedField {
 public:
  ConservedField() = default;
  explicit ConservedField(const Grid2D& grid, double t = 0.0);

  const Grid2D& grid() const { return grid_; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  Conserved& operator()(int i, int j) { return cells_[grid_.index(i, j)]; }
  const Conserved& operator()(int i, int j) const { return cells_[grid_.index(i, j)]; }
  std::span<Conserved> cells() { return cells_; }
  std::span<const Conserved> cells() const { return cells_; }

  /// Primitive (rho, u, v) of a cell.
  GasState primitive(int i, int j) const;
  /// Tracer value phi = (rho phi) / rho.
  double tracer(int i, int j) const;

 private:
  Grid2D grid_;
  double t_ = 0.0;
  std::vector<Conserved> cells_;
};

/// Exact unperturbed plane Riemann solution.
class BackgroundSolution {
 public:
  BackgroundSolution(const GasState& left, const GasState& right);

  const RiemannFan& fan() const { return fan_; }
  /// State at (t, x); at t = 0 the jump sits at x = 0 with x = 0 on the right.
  GasState at(double t, double x) const;
  /// Integral of the background density over [xlo, xhi] at time t.
  double mass(double t, double xlo, double xhi) const;

 private:
  RiemannFan fan_;
};

/// Compactly supported perturbation of the plane two-shock solution.
struct PerturbationSpec {
  double epsilon = 0.1;
  std::function<double(double)> interface_profile;          // Pi(y), supp in |y| <= 1
  std::function<double(double, double)> rho0, u0, v0;       // supp in the unit disk
  GasState left{1.0, 1.0, 0.0};
  GasState right{1.0, -1.0, 0.0};

  /// rho0 = a psi(r), u0 = 0, v0 = b y psi(r), Pi = pi_amplitude psi(|y|),
  /// with psi(r) = (1 - r^2)^4 on r < 1.
  static PerturbationSpec default_family(double epsilon, double a = 0.5, double b = 1.0,
                                         double pi_amplitude = 0.5,
                                         GasState left = {1.0, 1.0, 0.0},
                                         GasState right = {1.0, -1.0, 0.0});

  /// Checks positivity, compact supports (by sampling) and that the induced
  /// plane fan is an admissible two-shock configuration.
  void validate() const;
};

/// Bump (1 - r^2)^4 on r < 1, zero outside.
double bump(double r);

GasState sample_background(const PerturbationSpec& spec, double t, double x, double y);

/// Cell averages of the unperturbed background at time t; the tracer is the
/// sign of x - u_m t.
ConservedField make_background_field(const BackgroundSolution& background, const Grid2D& grid,
                                      double t);

/// Cell averages of the perturbed initial data; the tracer is sign(x - eps Pi(y)).
/// Requires at least 20 cells across the unit disk in each direction.
ConservedField make_initial_data(const PerturbationSpec& spec, const Grid2D& grid);

enum class Axis { x, y };

/// Flux of (rho, rho u, rho v, rho phi) through a face with the given normal.
struct Flux {
  double mass = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double tracer = 0.0;
};

/// Exact-solver Godunov flux. u and v in the states are the x and y velocity
/// components; the solver rotates them so that the Riemann problem is posed in
/// the face normal. Tangential velocity and tracer are upwinded by the contact.
Flux godunov_flux(const GasState& left, const GasState& right, Axis normal, double phi_left = 0.0,
                  double phi_right = 0.0);

constexpr double kDefaultCfl = 0.45;

/// cfl * min(dx, dy) / max over cells of max(|u| + 1, |v| + 1).
double cfl_dt(const ConservedField& field, double cfl = kDefaultCfl);

struct StepOptions {
  double cfl = kDefaultCfl;
  std::optional<DensityBounds> bounds;
};

/// Advances a field by first-order unsplit finite volumes. x ghost cells are
/// the exact background; y ghost cells copy the adjacent row.
class Euler2DSolver {
 public:
  Euler2DSolver(const GasState& left, const GasState& right, StepOptions options = {});

  const BackgroundSolution& background() const { return background_; }
  const StepOptions& options() const { return options_; }

  /// Writes the updated field into `out` (resized as needed). Throws
  /// BlowUpSuspected on loss of positivity, non-finite values or a density
  /// bound violation; ValidationError if dt exceeds the CFL limit.
  void step(const ConservedField& in, double dt, ConservedField& out);

  /// Net mass that entered through the domain boundary during the last step.
  double last_boundary_mass_inflow() const { return last_inflow_; }

 private:
  struct Prim {
    GasState s;
    double phi;
    double log_rho;
  };
  BackgroundSolution background_;
  StepOptions options_;
  std::vector<Prim> prim_;
  std::vector<Flux> fx_, gbelow_, gabove_;
  double last_inflow_ = 0.0;
};

/// Functional form of `Euler2DSolver::step` with a default-configured solver.
ConservedField step(const ConservedField& field, double dt, const GasState& left,
                    const GasState& right);

/// Owns the single mutable field of a run.
class Simulation {
 public:
  Simulation(const PerturbationSpec& spec, const Grid2D& grid, StepOptions options = {});

  const ConservedField& field() const { return field_; }
  const PerturbationSpec& spec() const { return spec_; }
  const BackgroundSolution& background() const { return solver_.background(); }
  double time() const { return field_.time(); }
  long steps() const { return steps_; }
  /// Mass that entered through the boundary since t = 0.
  double boundary_mass_inflow() const { return inflow_; }

  void step(double dt);
  /// Takes CFL-limited substeps that land exactly on `t_target`; returns the count.
  int advance_to(double t_target);

 private:
  PerturbationSpec spec_;
  Euler2DSolver solver_;
  ConservedField field_;
  ConservedField scratch_;
  long steps_ = 0;
  double inflow_ = 0.0;
};

/// Finite-propagation cone for the tangential velocity. `all_time` uses the
/// radius C0 t + 1; `late` uses t + C1 (valid for t >= t0).
struct SupportCone {
  double C0 = 2.0;
  double t0 = 1.0;
  double C1 = 2.0;
  double R = 2.0;

  static SupportCone for_background(const GasState& left, const GasState& right, double t0 = 1.0,
                                    double far_radius = 2.0);
  double radius_all_time(double t) const { return C0 * t + 1.0; }
  double radius_late(double t) const { return t + C1; }
  /// Late form for t >= t0, all-time form before.
  double radius(double t) const { return t >= t0 ? radius_late(t) : radius_all_time(t); }
};

enum class ConeForm { all_time, late, piecewise };

struct SupportCheck {
  bool ok = true;
  double max_violation = 0.0;
  int i = -1, j = -1;
  double radius = 0.0;
};

/// max |v| over cells lying entirely outside the cone must not exceed tol.
SupportCheck support_radius_check(const ConservedField& field, const SupportCone& cone, double tol,
                                  ConeForm form = ConeForm::all_time);

}  // namespace isoshock
