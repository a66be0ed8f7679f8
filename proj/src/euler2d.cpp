#include "isoshock/euler2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isoshock/errors.hpp"

namespace isoshock {

// ---------------------------------------------------------------------------
// Grid and field

Grid2D Grid2D::symmetric(int nx, int ny, double lx, double ly) {
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.xmin = -lx;
  g.xmax = lx;
  g.ymin = -ly;
  g.ymax = ly;
  return g;
}

double Grid2D::xc(int i) const {
  // Centered index keeps symmetric grids exactly antisymmetric in the cell centers.
  if (xmin == -xmax) return (i + 0.5 - 0.5 * nx) * dx();
  return xmin + (i + 0.5) * dx();
}

double Grid2D::yc(int j) const {
  if (ymin == -ymax) return (j + 0.5 - 0.5 * ny) * dy();
  return ymin + (j + 0.5) * dy();
}

void Grid2D::validate() const {
  if (nx < 1 || ny < 1) throw ValidationError("grid needs at least one cell in each direction");
  if (!(xmax > xmin) || !(ymax > ymin) || !std::isfinite(xmax - xmin) || !std::isfinite(ymax - ymin))
    throw ValidationError("grid extents must be finite and non-degenerate");
}

ConservedField::ConservedField(const Grid2D& grid, double t) : grid_(grid), t_(t) {
  grid_.validate();
  cells_.assign(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny), Conserved{});
}

GasState ConservedField::primitive(int i, int j) const {
  const Conserved& c = (*this)(i, j);
  return GasState{c.rho, c.mx / c.rho, c.my / c.rho};
}

double ConservedField::tracer(int i, int j) const {
  const Conserved& c = (*this)(i, j);
  return c.tracer / c.rho;
}

// ---------------------------------------------------------------------------
// Background

BackgroundSolution::BackgroundSolution(const GasState& left, const GasState& right)
    : fan_(solve_middle_state(left, right)) {}

GasState BackgroundSolution::at(double t, double x) const {
  if (t <= 0.0) return x < 0.0 ? fan_.left : fan_.right;
  return sample_self_similar(fan_, x / t);
}

double BackgroundSolution::mass(double t, double xlo, double xhi) const {
  if (!(xhi > xlo)) return 0.0;
  auto overlap = [&](double a, double b) { return std::max(0.0, std::min(b, xhi) - std::max(a, xlo)); };
  constexpr double inf = std::numeric_limits<double>::infinity();
  const RiemannFan& f = fan_;
  if (t <= 0.0) return f.left.rho * overlap(-inf, 0.0) + f.right.rho * overlap(0.0, inf);

  const double a_head = f.sigma_minus * t, a_tail = f.left_tail * t;
  const double b_tail = f.right_tail * t, b_head = f.sigma_plus * t;
  double m = f.left.rho * overlap(-inf, a_head) + f.middle.rho * overlap(a_tail, b_tail) +
             f.right.rho * overlap(b_head, inf);
  if (f.left_wave == WaveKind::rarefaction) {
    const double a = std::max(a_head, xlo), b = std::min(a_tail, xhi);
    if (b > a) {
      const double c = f.left.u - 1.0;
      m += t * f.left.rho * (std::exp(c - a / t) - std::exp(c - b / t));
    }
  }
  if (f.right_wave == WaveKind::rarefaction) {
    const double a = std::max(b_tail, xlo), b = std::min(b_head, xhi);
    if (b > a) {
      const double c = -1.0 - f.right.u;
      m += t * f.right.rho * (std::exp(b / t + c) - std::exp(a / t + c));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Perturbation and initial data

double bump(double r) {
  if (!(r < 1.0)) return 0.0;
  const double s = 1.0 - r * r;
  const double s2 = s * s;
  return s2 * s2;
}

PerturbationSpec PerturbationSpec::default_family(double epsilon, double a, double b,
                                                  double pi_amplitude, GasState left,
                                                  GasState right) {
  PerturbationSpec spec;
  spec.epsilon = epsilon;
  spec.left = left;
  spec.right = right;
  spec.interface_profile = [pi_amplitude](double y) { return pi_amplitude * bump(std::abs(y)); };
  spec.rho0 = [a](double x, double y) { return a * bump(std::hypot(x, y)); };
  spec.u0 = [](double, double) { return 0.0; };
  spec.v0 = [b](double x, double y) { return b * y * bump(std::hypot(x, y)); };
  return spec;
}

void PerturbationSpec::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("perturbation: epsilon must be finite and non-negative");
  if (!interface_profile || !rho0 || !u0 || !v0)
    throw ValidationError("perturbation: all profile functions must be set");
  try {
    isoshock::validate(left);
    isoshock::validate(right);
  } catch (const DomainError& e) {
    throw ValidationError(std::string("perturbation background: ") + e.what());
  }
  for (int k = 1; k <= 80; ++k) {
    const double y = 1.0 + 0.05 * k;
    if (interface_profile(y) != 0.0 || interface_profile(-y) != 0.0)
      throw ValidationError("perturbation: interface profile not supported in |y| <= 1");
  }
  for (int jy = 0; jy <= 60; ++jy) {
    for (int ix = 0; ix <= 60; ++ix) {
      const double x = -3.0 + 0.1 * ix, y = -3.0 + 0.1 * jy;
      const double r = std::hypot(x, y);
      const double side_rho = x > epsilon * interface_profile(y) ? right.rho : left.rho;
      if (!(side_rho + epsilon * rho0(x, y) > 0.0))
        throw ValidationError("perturbation: initial density must stay positive");
      if (r > 1.0 + 1e-12 && (rho0(x, y) != 0.0 || u0(x, y) != 0.0 || v0(x, y) != 0.0))
        throw ValidationError("perturbation: rho0, u0, v0 must vanish outside the unit disk");
    }
  }
  const EntropyReport rep = check_entropy(solve_middle_state(left, right));
  if (!rep.applicable || !rep.admissible) {
    std::string msg = "perturbation: background is not an admissible two-shock fan";
    for (const auto& v : rep.violations) msg += "; " + v;
    throw ValidationError(msg);
  }
}

GasState sample_background(const PerturbationSpec& spec, double t, double x, double /*y*/) {
  return BackgroundSolution(spec.left, spec.right).at(t, x);
}

ConservedField make_background_field(const BackgroundSolution& background, const Grid2D& grid,
                                      double t) {
  ConservedField field(grid, t);
  const double dx = grid.dx();
  const double um = background.fan().contact_speed;
  constexpr int nsub = 64;
  for (int i = 0; i < grid.nx; ++i) {
    const double xlo = grid.xc(i) - 0.5 * dx;
    Conserved c{background.mass(t, xlo, xlo + dx) / dx, 0.0, 0.0, 0.0};
    for (int s = 0; s < nsub; ++s) {
      const double x = xlo + (s + 0.5) * dx / nsub;
      const GasState g = background.at(t, x);
      c.mx += g.rho * g.u / nsub;
      c.my += g.rho * g.v / nsub;
      c.tracer += (x > um * t ? g.rho : -g.rho) / nsub;
    }
    for (int j = 0; j < grid.ny; ++j) field(i, j) = c;
  }
  return field;
}

ConservedField make_initial_data(const PerturbationSpec& spec, const Grid2D& grid) {
  grid.validate();
  spec.validate();
  if (2.0 / grid.dx() < 20.0 - 1e-9 || 2.0 / grid.dy() < 20.0 - 1e-9)
    throw ValidationError("grid must resolve the unit disk with at least 20 cells across");
  if (grid.xmin > -1.0 || grid.xmax < 1.0 || grid.ymin > -1.0 || grid.ymax < 1.0)
    throw ValidationError("grid must contain the perturbation support [-1,1]^2");

  ConservedField field(grid, 0.0);
  const double eps = spec.epsilon;
  const GasState& L = spec.left;
  const GasState& R = spec.right;
  const double dx = grid.dx(), dy = grid.dy();
  constexpr int nsub = 8;

  for (int j = 0; j < grid.ny; ++j) {
    const double yc = grid.yc(j);
    const double ylo = yc - 0.5 * dy, yhi = yc + 0.5 * dy;
    const double ydist = (ylo <= 0.0 && yhi >= 0.0) ? 0.0 : std::min(std::abs(ylo), std::abs(yhi));
    for (int i = 0; i < grid.nx; ++i) {
      const double xc = grid.xc(i);
      const double xlo = xc - 0.5 * dx, xhi = xc + 0.5 * dx;
      Conserved& c = field(i, j);
      if (ydist >= 1.0) {
        // Unperturbed: only the plane jump at x = 0 can cut the cell.
        const double fr = std::clamp(xhi / dx, 0.0, 1.0);
        const double fl = 1.0 - fr;
        c.rho = fl * L.rho + fr * R.rho;
        c.mx = fl * L.rho * L.u + fr * R.rho * R.u;
        c.my = fl * L.rho * L.v + fr * R.rho * R.v;
        c.tracer = fr * R.rho - fl * L.rho;
        continue;
      }
      Conserved acc{0.0, 0.0, 0.0, 0.0};
      for (int sj = 0; sj < nsub; ++sj) {
        const double y = ylo + (sj + 0.5) * dy / nsub;
        const double front = eps * spec.interface_profile(y);
        for (int si = 0; si < nsub; ++si) {
          const double x = xlo + (si + 0.5) * dx / nsub;
          const bool right_side = x > front;
          const GasState& side = right_side ? R : L;
          const double rho = side.rho + eps * spec.rho0(x, y);
          acc.rho += rho;
          acc.mx += rho * (side.u + eps * spec.u0(x, y));
          acc.my += rho * (side.v + eps * spec.v0(x, y));
          acc.tracer += right_side ? rho : -rho;
        }
      }
      const double inv = 1.0 / (nsub * nsub);
      c = Conserved{acc.rho * inv, acc.mx * inv, acc.my * inv, acc.tracer * inv};
    }
  }
  return field;
}

// ---------------------------------------------------------------------------
// Fluxes

namespace {

inline Flux physical_flux_normal(double rho, double un, double ut, double phi) {
  const double m = rho * un;
  return Flux{m, m * un + rho, m * ut, m * phi};
}

inline Flux rotate_back(const Flux& n, Axis normal) {
  if (normal == Axis::x) return n;
  return Flux{n.mass, n.my, n.mx, n.tracer};
}

// Normal-frame Godunov flux: (mass, normal momentum, tangential momentum, tracer)
// packed into (mass, mx, my, tracer).
inline Flux normal_flux(double rl, double unl, double utl, double phil, double rr, double unr,
                        double utr, double phir, double lrl, double lrr) {
  if (rl == rr && unl == unr && utl == utr && phil == phir) return physical_flux_normal(rl, unl, utl, phil);
  const RiemannFan fan = solve_middle_state_log(GasState{rl, unl, utl}, lrl, GasState{rr, unr, utr}, lrr);
  const GasState s = sample_self_similar(fan, 0.0);
  const double phi = 0.0 < fan.contact_speed ? phil : phir;
  return physical_flux_normal(s.rho, s.u, s.v, phi);
}

}  // namespace

Flux godunov_flux(const GasState& left, const GasState& right, Axis normal, double phi_left,
                  double phi_right) {
  if (!(left.rho > 0.0) || !(right.rho > 0.0)) throw DomainError("godunov_flux: densities must be positive");
  const double ll = std::log(left.rho), lr = std::log(right.rho);
  if (normal == Axis::x)
    return normal_flux(left.rho, left.u, left.v, phi_left, right.rho, right.u, right.v, phi_right, ll, lr);
  return rotate_back(
      normal_flux(left.rho, left.v, left.u, phi_left, right.rho, right.v, right.u, phi_right, ll, lr), Axis::y);
}

double cfl_dt(const ConservedField& field, double cfl) {
  if (!(cfl > 0.0 && cfl < 1.0)) throw ValidationError("cfl must lie in (0, 1)");
  double smax = 0.0;
  for (const Conserved& c : field.cells()) {
    const double u = c.mx / c.rho, v = c.my / c.rho;
    const double s = std::max(std::abs(u), std::abs(v)) + 1.0;
    if (!std::isfinite(s) || !(c.rho > 0.0)) throw DomainError("cfl_dt: non-finite or non-positive field");
    smax = std::max(smax, s);
  }
  const Grid2D& g = field.grid();
  return cfl * std::min(g.dx(), g.dy()) / smax;
}

// ---------------------------------------------------------------------------
// Solver

Euler2DSolver::Euler2DSolver(const GasState& left, const GasState& right, StepOptions options)
    : background_(left, right), options_(options) {}

void Euler2DSolver::step(const ConservedField& in, double dt, ConservedField& out) {
  const Grid2D& g = in.grid();
  const int nx = g.nx, ny = g.ny;
  const double t = in.time();
  const double dx = g.dx(), dy = g.dy();

  prim_.resize(static_cast<std::size_t>(nx) * ny);
  double smax = 0.0;
  for (std::size_t k = 0; k < prim_.size(); ++k) {
    const Conserved& c = in.cells()[k];
    const double inv = 1.0 / c.rho;
    if (!(c.rho > 0.0)) throw DomainError("step: input density must be positive");
    prim_[k] = Prim{GasState{c.rho, c.mx * inv, c.my * inv}, c.tracer * inv, std::log(c.rho)};
    smax = std::max(smax, std::max(std::abs(prim_[k].s.u), std::abs(prim_[k].s.v)) + 1.0);
  }
  const double dt_max = options_.cfl * std::min(dx, dy) / smax;
  if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step: dt = " << dt << " violates the CFL limit " << dt_max;
    throw ValidationError(msg.str());
  }

  const Grid2D& og = out.grid();
  if (og.nx != nx || og.ny != ny || og.xmin != g.xmin || og.xmax != g.xmax || og.ymin != g.ymin ||
      og.ymax != g.ymax || out.cells().size() != in.cells().size())
    out = ConservedField(g, t);

  // Ghost columns are uniform far-field states; sampled at the current level.
  const GasState bl = background_.at(t, g.xmin - 0.5 * dx);
  const GasState br = background_.at(t, g.xmax + 0.5 * dx);
  const Prim gl{bl, -1.0, std::log(bl.rho)}, gr{br, 1.0, std::log(br.rho)};

  fx_.resize(static_cast<std::size_t>(nx) + 1);
  gbelow_.resize(nx);
  gabove_.resize(nx);

  auto yflux = [&](const Prim& a, const Prim& b) {
    return rotate_back(
        normal_flux(a.s.rho, a.s.v, a.s.u, a.phi, b.s.rho, b.s.v, b.s.u, b.phi, a.log_rho, b.log_rho), Axis::y);
  };
  auto xflux = [&](const Prim& a, const Prim& b) {
    return normal_flux(a.s.rho, a.s.u, a.s.v, a.phi, b.s.rho, b.s.u, b.s.v, b.phi, a.log_rho, b.log_rho);
  };

  const double lx = dt / dx, ly = dt / dy;
  double inflow = 0.0;
  try {
    // Bottom ghost row copies row 0: the flux is the physical one.
    for (int i = 0; i < nx; ++i) gbelow_[i] = yflux(prim_[g.index(i, 0)], prim_[g.index(i, 0)]);
    for (int i = 0; i < nx; ++i) inflow += gbelow_[i].mass * dx * dt;

    for (int j = 0; j < ny; ++j) {
      const Prim* row = &prim_[g.index(0, j)];
      const Prim* up = (j + 1 < ny) ? &prim_[g.index(0, j + 1)] : row;
      fx_[0] = xflux(gl, row[0]);
      for (int i = 1; i < nx; ++i) fx_[i] = xflux(row[i - 1], row[i]);
      fx_[nx] = xflux(row[nx - 1], gr);
      for (int i = 0; i < nx; ++i) gabove_[i] = yflux(row[i], up[i]);

      inflow += (fx_[0].mass - fx_[nx].mass) * dy * dt;

      const Conserved* src = &in.cells()[g.index(0, j)];
      Conserved* dst = &out.cells()[g.index(0, j)];
      for (int i = 0; i < nx; ++i) {
        const Flux& fl = fx_[i];
        const Flux& fr = fx_[i + 1];
        const Flux& gb = gbelow_[i];
        const Flux& ga = gabove_[i];
        Conserved c;
        c.rho = src[i].rho - lx * (fr.mass - fl.mass) - ly * (ga.mass - gb.mass);
        c.mx = src[i].mx - lx * (fr.mx - fl.mx) - ly * (ga.mx - gb.mx);
        c.my = src[i].my - lx * (fr.my - fl.my) - ly * (ga.my - gb.my);
        c.tracer = src[i].tracer - lx * (fr.tracer - fl.tracer) - ly * (ga.tracer - gb.tracer);
        dst[i] = c;
      }
      std::swap(gbelow_, gabove_);
    }
    // gbelow_ now holds the top boundary flux.
    for (int i = 0; i < nx; ++i) inflow -= gbelow_[i].mass * dx * dt;
  } catch (const ConvergenceError& e) {
    throw BlowUpSuspected(std::string("Riemann solve failed during step: ") + e.what(), -1, -1,
                          0.0, 0.0, t);
  }

  const double tn = t + dt;
  out.set_time(tn);
  last_inflow_ = inflow;

  const auto& bounds = options_.bounds;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Conserved& c = out(i, j);
      const bool finite = std::isfinite(c.rho) && std::isfinite(c.mx) && std::isfinite(c.my) &&
                          std::isfinite(c.tracer);
      const char* why = nullptr;
      if (!finite) why = "non-finite value";
      else if (!(c.rho > 0.0)) why = "non-positive density";
      else if (bounds && !(c.rho > bounds->rho_star && c.rho < bounds->rho_star_upper))
        why = "density bounds violated";
      if (why) {
        std::ostringstream msg;
        msg << "blow-up suspected: " << why << " at cell (" << i << ", " << j << "), x = "
            << g.xc(i) << ", y = " << g.yc(j) << ", t = " << tn << ", rho = " << c.rho;
        throw BlowUpSuspected(msg.str(), i, j, g.xc(i), g.yc(j), tn);
      }
    }
  }
}

ConservedField step(const ConservedField& field, double dt, const GasState& left,
                    const GasState& right) {
  Euler2DSolver solver(left, right);
  ConservedField out;
  solver.step(field, dt, out);
  return out;
}

Simulation::Simulation(const PerturbationSpec& spec, const Grid2D& grid, StepOptions options)
    : spec_(spec), solver_(spec.left, spec.right, options), field_(make_initial_data(spec, grid)) {}

void Simulation::step(double dt) {
  solver_.step(field_, dt, scratch_);
  std::swap(field_, scratch_);
  inflow_ += solver_.last_boundary_mass_inflow();
  ++steps_;
}

int Simulation::advance_to(double t_target) {
  int n = 0;
  while (field_.time() < t_target) {
    const double remaining = t_target - field_.time();
    const double dt_max = cfl_dt(field_, solver_.options().cfl);
    const double k = std::ceil(remaining / dt_max * (1.0 - 1e-12));
    const double dt = remaining / std::max(1.0, k);
    step(dt);
    ++n;
    if (k <= 1.0) field_.set_time(t_target);
  }
  return n;
}

SupportCone SupportCone::for_background(const GasState& left, const GasState& right, double t0,
                                        double far_radius) {
  SupportCone c;
  c.C0 = 1.0 + std::max(std::abs(left.u), std::abs(right.u));
  c.t0 = t0;
  c.C1 = (c.C0 - 1.0) * t0 + 1.0;
  c.R = far_radius;
  return c;
}

SupportCheck support_radius_check(const ConservedField& field, const SupportCone& cone, double tol,
                                  ConeForm form) {
  const double t = field.time();
  const Grid2D& g = field.grid();
  SupportCheck out;
  switch (form) {
    case ConeForm::all_time: out.radius = cone.radius_all_time(t); break;
    case ConeForm::late: out.radius = cone.radius_late(t); break;
    case ConeForm::piecewise: out.radius = cone.radius(t); break;
  }
  const double hx = 0.5 * g.dx(), hy = 0.5 * g.dy();
  for (int j = 0; j < g.ny; ++j) {
    const double yc = g.yc(j);
    const double ylo = yc - hy, yhi = yc + hy;
    const double ydist = (ylo <= 0.0 && yhi >= 0.0) ? 0.0 : std::min(std::abs(ylo), std::abs(yhi));
    for (int i = 0; i < g.nx; ++i) {
      const double xc = g.xc(i);
      const double xlo = xc - hx, xhi = xc + hx;
      const double xdist = (xlo <= 0.0 && xhi >= 0.0) ? 0.0 : std::min(std::abs(xlo), std::abs(xhi));
      if (std::hypot(xdist, ydist) <= out.radius) continue;
      const Conserved& c = field(i, j);
      const double v = std::abs(c.my / c.rho);
      if (v > out.max_violation) {
        out.max_violation = v;
        out.i = i;
        out.j = j;
      }
    }
  }
  out.ok = out.max_violation <= tol;
  return out;
}

}  // namespace isoshock
