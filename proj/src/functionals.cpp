#include "isoshock/functionals.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "isoshock/errors.hpp"

namespace isoshock {

// ---------------------------------------------------------------------------
// Fronts

FrontLocus detect_fronts(const ConservedField& field, const RiemannFan& fan) {
  const Grid2D& g = field.grid();
  const double t = field.time();
  const double dx = g.dx();
  const double x_contact = fan.contact_speed * t;
  const double level_plus = 0.5 * (fan.middle.rho + fan.right.rho);
  const double level_minus = 0.5 * (fan.middle.rho + fan.left.rho);

  FrontLocus out;
  out.t = t;
  out.y.resize(g.ny);
  out.pi_minus.resize(g.ny);
  out.pi_zero.resize(g.ny);
  out.pi_plus.resize(g.ny);

  auto fail = [&](const char* what, int j) {
    std::ostringstream msg;
    msg << "detect_fronts: " << what << " in row " << j << " (y = " << g.yc(j) << ", t = " << t << ")";
    throw FrontDetectionError(msg.str(), j);
  };

  for (int j = 0; j < g.ny; ++j) {
    out.y[j] = g.yc(j);
    const Conserved* row = &field.cells()[g.index(0, j)];
    auto phi = [&](int i) { return row[i].tracer / row[i].rho; };

    int k = -1;
    double x0 = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double a = phi(i), b = phi(i + 1);
      if ((a < 0.0) == (b < 0.0)) continue;
      const double x = g.xc(i) + dx * a / (a - b);
      if (std::abs(x - x_contact) < best) {
        best = std::abs(x - x_contact);
        k = i;
        x0 = x;
      }
    }
    if (k < 0) fail("no tracer zero crossing", j);
    out.pi_zero[j] = x0;

    const double rho_c = std::max(row[k].rho, row[k + 1].rho);

    double xp = x0;
    if (rho_c >= level_plus) {
      int i = k;
      while (i + 1 < g.nx && !(row[i].rho >= level_plus && row[i + 1].rho < level_plus)) ++i;
      if (i + 1 >= g.nx) fail("no right shock crossing", j);
      xp = std::max(x0, g.xc(i) + dx * (row[i].rho - level_plus) / (row[i].rho - row[i + 1].rho));
    }
    double xm = x0;
    if (rho_c >= level_minus) {
      int i = k + 1;
      while (i >= 1 && !(row[i].rho >= level_minus && row[i - 1].rho < level_minus)) --i;
      if (i < 1) fail("no left shock crossing", j);
      xm = std::min(x0, g.xc(i) - dx * (row[i].rho - level_minus) / (row[i].rho - row[i - 1].rho));
    }
    out.pi_plus[j] = xp;
    out.pi_minus[j] = xm;
  }
  return out;
}

FrontLocus detect_fronts(const ConservedField& field, const PerturbationSpec& spec) {
  return detect_fronts(field, solve_middle_state(spec.left, spec.right));
}

// ---------------------------------------------------------------------------
// Functionals

double compute_X(const ConservedField& field, const FrontLocus& fronts, const RiemannFan& fan) {
  const Grid2D& g = field.grid();
  if (static_cast<int>(fronts.pi_plus.size()) != g.ny)
    throw ValidationError("compute_X: front locus does not match the grid");
  const double t = field.time();
  const double rl = fan.left.rho, rm = fan.middle.rho, rr = fan.right.rho;
  const double dx = g.dx(), dy = g.dy();
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double pm = fronts.pi_minus[j], pp = fronts.pi_plus[j];
    if (pm < g.xmin || pp > g.xmax) {
      std::ostringstream msg;
      msg << "compute_X: front outside the grid in row " << j;
      throw ValidationError(msg.str());
    }
    double row_mass = 0.0;
    const Conserved* row = &field.cells()[g.index(0, j)];
    for (int i = 0; i < g.nx; ++i) row_mass += row[i].rho;
    row_mass *= dx;
    // Region constants integrated over the split cells reduce to these lengths.
    const double regions = rl * (pm - g.xmin) + rm * (pp - pm) + rr * (g.xmax - pp);
    const double front_terms = (rm - rr) * (pp - fan.sigma_plus * t) + (rm - rl) * (fan.sigma_minus * t - pm);
    total += weight_even(g.yc(j)) * (row_mass - regions + front_terms);
  }
  return total * dy;
}

double compute_X_background(const ConservedField& field, const BackgroundSolution& background) {
  const Grid2D& g = field.grid();
  const double bg = background.mass(field.time(), g.xmin, g.xmax);
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    double row_mass = 0.0;
    const Conserved* row = &field.cells()[g.index(0, j)];
    for (int i = 0; i < g.nx; ++i) row_mass += row[i].rho;
    total += weight_even(g.yc(j)) * (row_mass * g.dx() - bg);
  }
  return total * g.dy();
}

double compute_Y(const ConservedField& field) {
  const Grid2D& g = field.grid();
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    double row_sum = 0.0;
    const Conserved* row = &field.cells()[g.index(0, j)];
    for (int i = 0; i < g.nx; ++i) row_sum += row[i].my;
    total += weight_odd(g.yc(j)) * row_sum;
  }
  return total * g.cell_area();
}

double compute_S(const ConservedField& field) {
  const Grid2D& g = field.grid();
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    double row_sum = 0.0;
    const Conserved* row = &field.cells()[g.index(0, j)];
    for (int i = 0; i < g.nx; ++i) row_sum += row[i].my * row[i].my / row[i].rho;
    total += weight_even(g.yc(j)) * row_sum;
  }
  return total * g.cell_area();
}

namespace {

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace

double compute_M(const ConservedField& field, const BackgroundSolution& background, double radius) {
  const Grid2D& g = field.grid();
  const double t = field.time();
  const double r2 = radius * radius;

  double inside = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.yc(j);
    if (y * y > r2) continue;
    double row_sum = 0.0;
    const Conserved* row = &field.cells()[g.index(0, j)];
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.xc(i);
      if (x * x + y * y <= r2) row_sum += row[i].rho;
    }
    inside += weight_even(y) * row_sum;
  }
  inside *= g.cell_area();

  // Part of the disk not covered by the grid rectangle, with y = R sin(theta).
  // The chord jumps where y crosses the grid edge; `beyond` is decided per
  // segment so that the endpoint evaluations take the segment's branch.
  auto outside_row = [&](double y, bool beyond) {
    const double h = std::sqrt(std::max(0.0, r2 - y * y));
    if (beyond) return background.mass(t, -h, h);
    double m = 0.0;
    if (-h < g.xmin) m += background.mass(t, -h, std::min(h, g.xmin));
    if (h > g.xmax) m += background.mass(t, std::max(-h, g.xmax), h);
    return m;
  };
  auto integrand = [&](double theta, bool beyond) {
    const double y = radius * std::sin(theta);
    return weight_even(y) * outside_row(y, beyond) * radius * std::cos(theta);
  };
  const double half_pi = 0.5 * std::acos(-1.0);
  std::vector<double> cuts{-half_pi, half_pi};
  auto add_cut_y = [&](double y) {
    if (std::abs(y) < radius) cuts.push_back(std::asin(y / radius));
  };
  add_cut_y(g.ymin);
  add_cut_y(g.ymax);
  const RiemannFan& f = background.fan();
  for (double x : {g.xmin, g.xmax, f.sigma_minus * t, f.left_tail * t, f.right_tail * t, f.sigma_plus * t}) {
    if (std::abs(x) < radius) {
      const double y = std::sqrt(r2 - x * x);
      add_cut_y(y);
      add_cut_y(-y);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double outside = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double ymid = radius * std::sin(0.5 * (cuts[k] + cuts[k + 1]));
    const bool beyond = ymid < g.ymin || ymid > g.ymax;
    outside += simpson([&](double th) { return integrand(th, beyond); }, cuts[k], cuts[k + 1], 400);
  }
  return inside + outside;
}

double far_field_deviation(const ConservedField& field, const BackgroundSolution& background,
                           const FrontLocus& fronts, double far_radius, int band_cells) {
  const Grid2D& g = field.grid();
  const double t = field.time();
  const double band = band_cells * g.dx();
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.yc(j);
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.xc(i);
      if (std::hypot(x, y) < far_radius) continue;
      if (std::abs(x - fronts.pi_minus[j]) <= band || std::abs(x - fronts.pi_zero[j]) <= band ||
          std::abs(x - fronts.pi_plus[j]) <= band)
        continue;
      const GasState s = field.primitive(i, j);
      const GasState b = background.at(t, x);
      worst = std::max({worst, std::abs(s.rho - b.rho), std::abs(s.u - b.u), std::abs(s.v - b.v)});
    }
  }
  return worst;
}

double hypothesis_x0(const PerturbationSpec& spec, int n) {
  const double h = 2.0 / n;
  double area = 0.0, line = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = -1.0 + (j + 0.5) * h;
    const double w = weight_even(y);
    double row = 0.0;
    for (int i = 0; i < n; ++i) row += spec.rho0(-1.0 + (i + 0.5) * h, y);
    area += w * row;
    line += w * spec.interface_profile(y);
  }
  return area * h * h + (spec.left.rho - spec.right.rho) * line * h;
}

double initial_Y(const PerturbationSpec& spec, const Grid2D& grid) {
  return compute_Y(make_initial_data(spec, grid));
}

// ---------------------------------------------------------------------------
// Series

void FunctionalSeries::push(double ti, double x, double y, double s, double m, double slack, double far) {
  t.push_back(ti);
  X.push_back(x);
  Y.push_back(y);
  S.push_back(s);
  M.push_back(m);
  holder_slack.push_back(slack);
  far_field.push_back(far);
}

void FunctionalSeries::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "t,X,Y,S,Z,W,r1,r2,M,holder_slack,far_field_deviation\n";
  auto col = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
  };
  char buf[64];
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::vector<double>* cols[] = {&t, &X, &Y, &S, &Z, &W, &r1, &r2, &M, &holder_slack, &far_field};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", col(*cols[c], i));
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<double> uniform_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

namespace {

double uniform_spacing(const std::vector<double>& t) {
  if (t.empty()) throw ValidationError("series is empty");
  if (std::abs(t[0]) > 1e-12) throw ValidationError("series must start at t = 0");
  if (t.size() == 1) return 0.0;
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw ValidationError("series times must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double expect = i * h;
    if (std::abs(t[i] - expect) > 1e-9 * std::max(1.0, expect)) {
      std::ostringstream msg;
      msg << "series time grid is not uniform at sample " << i << " (t = " << t[i] << ")";
      throw ValidationError(msg.str());
    }
  }
  return h;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

}  // namespace

FunctionalSeries compute_W_series(FunctionalSeries s) {
  const double h = uniform_spacing(s.t);
  const std::size_t n = s.t.size();
  if (s.X.size() != n || s.Y.size() != n || s.S.size() != n)
    throw ValidationError("series columns have inconsistent lengths");
  const std::vector<double> I = cumulative_trapezoid(s.Y, h);
  s.Z.resize(n);
  s.W.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-s.t[i]);
    s.Z[i] = e * I[i];
    s.W[i] = e * (s.Y[i] + I[i]);
  }
  const std::vector<double> dX = uniform_derivative(s.X, h);
  const std::vector<double> dY = uniform_derivative(s.Y, h);
  s.r1.resize(n);
  s.r2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.r1[i] = dX[i] - s.Y[i];
    s.r2[i] = dY[i] - s.X[i] - s.S[i];
  }
  return s;
}

ResidualNorms residual_norms(const FunctionalSeries& s, double h) {
  ResidualNorms out;
  out.h = h;
  const double dt = s.t.size() > 1 ? s.t[1] - s.t[0] : 0.0;
  double a1 = 0.0, a2 = 0.0;
  for (std::size_t i = 0; i < s.r1.size(); ++i) {
    if (std::isfinite(s.r1[i])) {
      out.r1_max = std::max(out.r1_max, std::abs(s.r1[i]));
      a1 += s.r1[i] * s.r1[i];
    }
    if (std::isfinite(s.r2[i])) {
      out.r2_max = std::max(out.r2_max, std::abs(s.r2[i]));
      a2 += s.r2[i] * s.r2[i];
    }
  }
  out.r1_l2 = std::sqrt(dt * a1);
  out.r2_l2 = std::sqrt(dt * a2);
  return out;
}

std::vector<double> convergence_rates(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw ValidationError("convergence_rates: length mismatch");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < h.size(); ++k)
    out.push_back(std::log(err[k] / err[k + 1]) / std::log(h[k] / h[k + 1]));
  return out;
}

double LadderReport::min_rate() const {
  double m = std::numeric_limits<double>::infinity();
  for (double r : r1_rate) m = std::min(m, r);
  for (double r : r2_rate) m = std::min(m, r);
  return m;
}

LadderReport verify_lemma31(const std::vector<ResidualNorms>& levels) {
  LadderReport rep;
  rep.levels = levels;
  std::vector<double> h, e1, e2;
  for (const auto& l : levels) {
    h.push_back(l.h);
    e1.push_back(l.r1_l2);
    e2.push_back(l.r2_l2);
  }
  rep.r1_rate = convergence_rates(h, e1);
  rep.r2_rate = convergence_rates(h, e2);
  rep.r1_monotone = rep.r2_monotone = levels.size() >= 2;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    rep.r1_monotone = rep.r1_monotone && e1[k + 1] < e1[k];
    rep.r2_monotone = rep.r2_monotone && e2[k + 1] < e2[k];
  }
  return rep;
}

ChainReport verify_inequality_chain(const FunctionalSeries& s, double t0, double holder_rel_slack,
                                    double z_tol) {
  ChainReport rep;
  rep.t0 = t0;
  const std::size_t n = s.t.size();
  const double h = n > 1 ? s.t[1] - s.t[0] : 0.0;
  const std::vector<double> dY = n > 2 ? uniform_derivative(s.Y, h) : std::vector<double>(n, 0.0);
  const std::vector<double> I = cumulative_trapezoid(s.Y, h);
  double c_inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    ++rep.samples_checked;
    const double lhs = s.Y[i] * s.Y[i];
    const double rhs = s.M[i] * s.S[i];
    if (lhs > rhs * (1.0 + holder_rel_slack)) ++rep.holder_failures;
    if (rhs > 0.0) rep.holder_worst_ratio = std::max(rep.holder_worst_ratio, lhs / rhs);

    if (s.t[i] < t0) continue;
    const double tt = s.t[i];
    rep.C_M = std::max(rep.C_M, s.M[i] / (std::sqrt(tt + 1.0) * std::exp(tt)));
    const double denom = lhs * std::exp(-tt) / std::sqrt(tt + 1.0);
    if (denom > 0.0 && std::isfinite(dY[i])) {
      c_inf = std::min(c_inf, (dY[i] - s.X[0] - I[i]) / denom);
      rep.c_defined = true;
    }
  }
  if (rep.c_defined) rep.c_riccati = c_inf;
  for (std::size_t i = 1; i < s.Z.size(); ++i)
    if (s.Z[i] < s.Z[i - 1] - z_tol * std::max(1.0, std::abs(s.Z[i - 1]))) ++rep.z_decreases;
  return rep;
}

}  // namespace isoshock
