#include "isoshock/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "isoshock/errors.hpp"
#include "isoshock/field_io.hpp"
#include "isoshock/testfn3d.hpp"

namespace isoshock {

namespace fs = std::filesystem;

PerturbationSpec make_spec(const ExperimentConfig& c, double epsilon) {
  return PerturbationSpec::default_family(epsilon, c.a, c.b, c.pi_amplitude, GasState{c.rho_l, c.u_l, 0.0},
                                          GasState{c.rho_r, c.u_r, 0.0});
}

PerturbationSpec make_spec(const ExperimentConfig& c) { return make_spec(c, c.epsilon); }

Grid2D make_grid(const ExperimentConfig& c, int level) {
  const int f = 1 << level;
  return Grid2D::symmetric(c.nx * f, c.ny * f, c.lx, c.ly);
}

DiagnosticsOptions make_diagnostics_options(const ExperimentConfig& c) {
  DiagnosticsOptions o;
  o.t_max = c.t_max;
  o.stride = c.stride;
  o.cone = SupportCone::for_background(GasState{c.rho_l, c.u_l, 0.0}, GasState{c.rho_r, c.u_r, 0.0}, c.t0,
                                       c.far_field_radius);
  o.violation_factor = c.violation_factor;
  o.step.cfl = c.cfl;
  if (c.rho_min > 0.0 || c.rho_max > 0.0)
    o.step.bounds = DensityBounds{c.rho_min, c.rho_max > 0.0 ? c.rho_max : std::numeric_limits<double>::infinity()};
  return o;
}

RunOutcome run_with_diagnostics(const PerturbationSpec& spec, const Grid2D& grid, const DiagnosticsOptions& o) {
  Simulation sim(spec, grid, o.step);
  const BackgroundSolution& bg = sim.background();
  const RiemannFan& fan = bg.fan();
  RunOutcome out;
  out.h = grid.dx();

  const double dt_ref = cfl_dt(sim.field(), o.step.cfl);
  const long k = o.stride > 0 ? o.stride : std::max(1L, std::lround(grid.dx() / dt_ref));
  // Rounded so that the last sample lands on t_max.
  const long n = std::max(1L, static_cast<long>(std::ceil(o.t_max / (k * dt_ref) - 1e-9)));
  out.sample_dt = o.t_max / n;
  const double f = o.violation_factor;

  auto sample = [&]() {
    const ConservedField& field = sim.field();
    const double t = field.time();
    const FrontLocus fronts = detect_fronts(field, fan);
    const double X = compute_X(field, fronts, fan);
    out.x_route_max_diff =
        std::max(out.x_route_max_diff, std::abs(X - compute_X_background(field, bg)) / std::max(1.0, std::abs(X)));
    const double Y = compute_Y(field);
    const double S = compute_S(field);
    const double M = compute_M(field, bg, o.cone.radius(t));
    const double far = far_field_deviation(field, bg, fronts, o.cone.R);
    auto slack = [&](double y, double s) { return M * s > 0.0 ? (M * s - y * y) / (M * s) : 0.0; };
    out.series.push(t, X, Y, S, M, slack(Y, S), far);
    out.manufactured.push(t, X, f * Y, f * f * S, M, slack(f * Y, f * f * S), far);
    const SupportCheck sc = support_radius_check(field, o.cone, o.support_tol, ConeForm::all_time);
    out.support_max_violation = std::max(out.support_max_violation, sc.max_violation);
    if (!sc.ok) ++out.support_failures;
  };

  sample();
  for (long i = 1; i <= n; ++i) {
    try {
      sim.advance_to(i * out.sample_dt);
    } catch (const BlowUpSuspected& e) {
      out.breakdown = e.what();
      break;
    }
    sample();
  }
  out.steps = sim.steps();
  out.boundary_mass_inflow = sim.boundary_mass_inflow();
  for (FunctionalSeries* s : {&out.series, &out.manufactured}) {
    s->horizon = o.t_max;
    s->terminated_early = out.breakdown.has_value();
    if (out.breakdown) s->termination_reason = *out.breakdown;
    *s = compute_W_series(std::move(*s));
  }
  out.final_field = sim.field();
  return out;
}

LadderOutcome run_ladder(const ExperimentConfig& c, int levels) {
  LadderOutcome out;
  const PerturbationSpec spec = make_spec(c);
  const DiagnosticsOptions opts = make_diagnostics_options(c);
  std::vector<ResidualNorms> norms, manufactured;
  for (int level = 0; level < levels; ++level) {
    out.runs.push_back(run_with_diagnostics(spec, make_grid(c, level), opts));
    const RunOutcome& r = out.runs.back();
    norms.push_back(residual_norms(r.series, r.h));
    manufactured.push_back(residual_norms(r.manufactured, r.h));
  }
  out.lemma = verify_lemma31(norms);
  out.manufactured = verify_lemma31(manufactured);
  return out;
}

SeriesDriver simulation_driver(const ExperimentConfig& c) {
  return [c](double eps) {
    DiagnosticsOptions opts = make_diagnostics_options(c);
    if (c.sweep_horizon > 0.0) opts.t_max = c.sweep_horizon;
    RunOutcome r = run_with_diagnostics(make_spec(c, eps), make_grid(c), opts);
    return std::move(r.series);
  };
}

SeriesDriver riccati_driver(const ExperimentConfig& c) {
  return [c](double eps) {
    RiccatiParams p{c.riccati_C, 0.0, c.riccati_k * eps, c.riccati_dimension};
    const double horizon = c.sweep_horizon > 0.0 ? c.sweep_horizon : c.t_max;
    return riccati_series(p, horizon, horizon / 200000.0);
  };
}

Threshold make_threshold(const ExperimentConfig& c) {
  return c.threshold_kind == "absolute" ? Threshold::absolute_level(c.threshold)
                                        : Threshold::relative_factor(c.threshold, c.t0);
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
}

void describe_chain(std::ostream& os, const FunctionalSeries& s, double t0) {
  const ChainReport ch = verify_inequality_chain(s, t0);
  os << "holder: " << ch.holder_failures << " failures in " << ch.samples_checked
     << " samples, worst Y^2/(M S) = " << num(ch.holder_worst_ratio) << "\n";
  os << "weighted mass constant C_M (t >= " << num(t0) << "): " << num(ch.C_M) << "\n";
  os << "riccati lower-bound constant c: " << (ch.c_defined ? num(ch.c_riccati) : "undefined") << "\n";
  os << "Z decreases beyond tolerance: " << ch.z_decreases << "\n";
}

double max_after(const std::vector<double>& t, const std::vector<double>& v, double t0) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t0) m = std::max(m, v[i]);
  return m;
}

void describe_run(std::ostream& os, const RunOutcome& r, double t0) {
  os << "h = " << num(r.h) << ", steps = " << r.steps << ", sample dt = " << num(r.sample_dt)
     << ", samples = " << r.series.size() << "\n";
  os << "X route difference (max, relative): " << num(r.x_route_max_diff) << "\n";
  os << "support cone: max |v| outside = " << num(r.support_max_violation) << ", failures = " << r.support_failures
     << "\n";
  os << "far-field deviation (max, t >= t0): " << num(max_after(r.series.t, r.series.far_field, t0)) << "\n";
  const ResidualNorms n = residual_norms(r.series, r.h);
  os << "residuals: r1 max " << num(n.r1_max) << " L2 " << num(n.r1_l2) << "; r2 max " << num(n.r2_max) << " L2 "
     << num(n.r2_l2) << "\n";
  describe_chain(os, r.series, t0);
  if (r.breakdown) os << "breakdown: " << *r.breakdown << "\n";
}

}  // namespace

std::string riemann_report(const GasState& left, const GasState& right) {
  const RiemannFan fan = solve_middle_state(left, right);
  std::ostringstream os;
  os << std::setprecision(12);
  os << "left   rho = " << left.rho << ", u = " << left.u << "\n";
  os << "right  rho = " << right.rho << ", u = " << right.u << "\n";
  os << "middle rho = " << fan.middle.rho << ", u = " << fan.middle.u << "\n";
  os << "left wave: " << to_string(fan.left_wave) << ", speed " << fan.sigma_minus;
  if (fan.left_wave == WaveKind::rarefaction) os << " (tail " << fan.left_tail << ")";
  os << "\nright wave: " << to_string(fan.right_wave) << ", speed " << fan.sigma_plus;
  if (fan.right_wave == WaveKind::rarefaction) os << " (tail " << fan.right_tail << ")";
  os << "\nnewton iterations: " << fan.iterations << ", residual " << fan.residual << "\n";
  const EntropyReport e = check_entropy(fan);
  if (!e.applicable) {
    os << "entropy check: not applicable\n";
  } else {
    os << "entropy check: " << (e.admissible ? "admissible two-shock fan" : "not admissible") << "\n";
    for (const auto& v : e.violations) os << "  " << v << "\n";
  }
  if (fan.right_wave == WaveKind::shock) {
    const auto [a, b] = rh_residual(fan.right, fan.middle, fan.sigma_plus);
    os << "right shock RH residuals: " << a << ", " << b << "\n";
  }
  if (fan.left_wave == WaveKind::shock) {
    const auto [a, b] = rh_residual(fan.left, fan.middle, fan.sigma_minus);
    os << "left shock RH residuals: " << a << ", " << b << "\n";
  }
  return os.str();
}

std::string testfn_report(const ExperimentConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "F(0) = " << eval_F(0.0) << " (2 pi = " << 2.0 * std::acos(-1.0) << ")\n";
  os << "F(1) = " << eval_F(1.0) << "\n";
  os << "F(2) = " << eval_F(2.0) << "\n";
  const auto g = eval_gradF(1.0, 0.0);
  os << "|grad F(1, 0)| = " << std::hypot(g[0], g[1]) << "\n";
  double worst_q = 0.0, worst_s = 0.0;
  const double r_top = std::min(30.0, c.testfn_r_max);
  for (int k = 0; k <= 300; ++k) {
    const double r = r_top * k / 300;
    const double f = eval_F(r), d = eval_dF(r);
    worst_q = std::max({worst_q, std::abs(eval_F_quadrature(r) - f) / f,
                        d > 0.0 ? std::abs(eval_dF_quadrature(r) - d) / d : std::abs(eval_dF_quadrature(r))});
    worst_s = std::max({worst_s, std::abs(eval_F_series(r) - f) / f,
                        d > 0.0 ? std::abs(eval_dF_series(r) - d) / d : std::abs(eval_dF_series(r))});
  }
  os << "max relative difference on [0, " << r_top << "]: quadrature " << worst_q << ", series " << worst_s << "\n";
  const PdeResidualReport p = verify_pde_identity(c.testfn_r_max, c.testfn_h);
  os << "Laplacian identity: h = " << p.h << ", max relative residual " << p.max_rel_residual
     << ", residual at r = 1 " << p.residual_at_1 << ", origin " << p.origin_residual << "\n";
  os << "  order (interior) " << p.order << ", order (origin) " << p.origin_order << "\n";
  const GrowthReport gr = verify_growth_bound(c.testfn_r_max);
  os << "growth bound: sup F r^1/2 e^-r = " << gr.sup << " at r = " << gr.argsup << ", tail " << gr.tail
     << " (limit " << gr.limit << ")\n";
  const ThreeDFunctionals tf = threeD_initial_functionals(ThreeDInitialData::default_family(c.epsilon, c.a, c.b, c.pi_amplitude));
  os << "3-D initial functionals: X0 = " << tf.X0 << " (" << (tf.x0_nonnegative ? ">= 0" : "< 0") << "), Y0 = " << tf.Y0
     << " (" << (tf.y0_positive ? "> 0" : "<= 0") << ")\n";
  return os.str();
}

int run_experiment(const ExperimentConfig& c, Mode mode, std::ostream& log) {
  c.validate();
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  write_text(dir / "config.ini", serialize_config(c));
  const std::string header = "config hash: " + config_hash(c) + "\n";

  switch (mode) {
    case Mode::simulate: {
      const RunOutcome r = run_with_diagnostics(make_spec(c), make_grid(c), make_diagnostics_options(c));
      r.series.write_csv((dir / "series.csv").string());
      write_field_binary((dir / "final_state.isof").string(), r.final_field);
      std::ostringstream os;
      os << header << "mode: simulate, epsilon = " << num(c.epsilon) << "\n";
      describe_run(os, r, c.t0);
      write_text(dir / "report.txt", os.str());
      log << os.str();
      return r.breakdown ? kExitBreakdown : kExitOk;
    }
    case Mode::verify_identities: {
      const LadderOutcome L = run_ladder(c, c.levels);
      std::ostringstream os;
      os << header << "mode: verify-identities, epsilon = " << num(c.epsilon) << ", levels = " << c.levels << "\n";
      bool broke = false;
      for (std::size_t k = 0; k < L.runs.size(); ++k) {
        L.runs[k].series.write_csv((dir / ("series_level" + std::to_string(k) + ".csv")).string());
        os << "\n[level " << k << "]\n";
        describe_run(os, L.runs[k], c.t0);
        const ResidualNorms m = residual_norms(L.runs[k].manufactured, L.runs[k].h);
        os << "manufactured violation: r2 max " << num(m.r2_max) << " L2 " << num(m.r2_l2) << "\n";
        broke = broke || L.runs[k].breakdown.has_value();
      }
      os << "\nr1 L2 rates:";
      for (double r : L.lemma.r1_rate) os << " " << num(r);
      os << (L.lemma.r1_monotone ? " (monotone)" : " (not monotone)") << "\nr2 L2 rates:";
      for (double r : L.lemma.r2_rate) os << " " << num(r);
      os << (L.lemma.r2_monotone ? " (monotone)" : " (not monotone)") << "\nmanufactured r2 L2 rates:";
      for (double r : L.manufactured.r2_rate) os << " " << num(r);
      os << "\n";
      write_text(dir / "report.txt", os.str());
      log << os.str();
      return broke ? kExitBreakdown : kExitOk;
    }
    case Mode::sweep: {
      const SeriesDriver driver = c.driver == "riccati" ? riccati_driver(c) : simulation_driver(c);
      const std::vector<SweepEntry> entries = lifespan_sweep(c.sweep_epsilons, make_threshold(c), driver);
      write_sweep_csv((dir / "sweep.csv").string(), entries);
      std::ostringstream os;
      os << header << "mode: sweep, driver = " << c.driver << ", threshold = " << c.threshold_kind << " "
         << num(c.threshold) << "\n";
      std::vector<std::pair<double, double>> ok;
      for (const auto& e : entries) {
        os << "epsilon " << num(e.epsilon) << ": T = " << num(e.estimate.blowup_time)
           << (e.estimate.censored ? " (censored)" : "") << ", W level " << num(e.threshold);
        if (e.breakdown_time) os << ", run ended at t = " << num(*e.breakdown_time);
        os << "\n";
        if (!e.estimate.censored) ok.emplace_back(e.epsilon, e.estimate.blowup_time);
      }
      if (ok.size() >= 3) {
        const FitResult fit = fit_power_law(ok);
        os << "power-law fit over " << ok.size() << " uncensored points: exponent " << num(fit.slope)
           << ", prefactor " << num(fit.prefactor) << ", max relative residual " << num(fit.max_rel_residual) << "\n";
      } else {
        os << "power-law fit skipped: " << ok.size() << " uncensored points (need 3)\n";
      }
      write_text(dir / "fit.txt", os.str());
      log << os.str();
      return kExitOk;
    }
    case Mode::testfn: {
      const std::string rep = header + testfn_report(c);
      write_text(dir / "testfn.txt", rep);
      std::ofstream csv(dir / "testfn.csv");
      csv << "r,F,dF,laplacian_residual\n" << std::setprecision(17);
      const double h = c.testfn_h;
      for (int k = 1; k <= 300; ++k) {
        const double r = (c.testfn_r_max - h) * k / 300;
        const double fm = eval_F(std::abs(r - h)), f0 = eval_F(r), fp = eval_F(r + h);
        const double res = (fp - 2.0 * f0 + fm) / (h * h) + (fp - fm) / (2.0 * h * r) - f0;
        csv << r << ',' << f0 << ',' << eval_dF(r) << ',' << res << '\n';
      }
      log << rep;
      return kExitOk;
    }
  }
  return kExitInternal;
}

}  // namespace isoshock
