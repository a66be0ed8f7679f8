#include "isoshock/lifespan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "isoshock/errors.hpp"

namespace isoshock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMachEps = std::numeric_limits<double>::epsilon();

// Integral of (1+tau)^{-q} from a to b.
double growth(int dimension, double a, double b) {
  if (dimension == 2) return 2.0 * (std::sqrt(1.0 + b) - std::sqrt(1.0 + a));
  return std::log((1.0 + b) / (1.0 + a));
}

// Inverse of growth(dimension, a, .) evaluated at g.
double growth_inverse(int dimension, double a, double g) {
  if (dimension == 2) {
    const double r = std::sqrt(1.0 + a) + 0.5 * g;
    return r * r - 1.0;
  }
  return (1.0 + a) * std::exp(g) - 1.0;
}

}  // namespace

double RiccatiParams::exponent() const { return dimension == 2 ? 0.5 : 1.0; }

void RiccatiParams::validate() const {
  if (dimension != 2 && dimension != 3) throw ValidationError("riccati: dimension must be 2 or 3");
  if (!(C > 0.0) || !std::isfinite(C)) throw ValidationError("riccati: C must be positive");
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw ValidationError("riccati: t0 must be non-negative");
  if (!std::isfinite(W0)) throw ValidationError("riccati: W0 must be finite");
}

const char* to_string(LifespanMethod m) {
  switch (m) {
    case LifespanMethod::closed_form: return "closed-form";
    case LifespanMethod::numeric: return "numeric";
    case LifespanMethod::simulation_proxy: return "simulation-proxy";
  }
  return "?";
}

LifespanEstimate riccati_blowup_time(const RiccatiParams& p) {
  p.validate();
  LifespanEstimate est;
  est.method = LifespanMethod::closed_form;
  if (p.W0 <= 0.0) {
    est.censored = true;
    est.blowup_time = kInf;
    return est;
  }
  est.blowup_time = growth_inverse(p.dimension, p.t0, 1.0 / (p.C * p.W0));
  est.censored = !std::isfinite(est.blowup_time);
  return est;
}

double riccati_solution(const RiccatiParams& p, double t) {
  if (t <= p.t0 || p.W0 == 0.0) return p.W0;
  const double denom = 1.0 / p.W0 - p.C * growth(p.dimension, p.t0, t);
  return denom > 0.0 ? 1.0 / denom : kInf;
}

double riccati_threshold_time(const RiccatiParams& p, double level) {
  p.validate();
  if (p.W0 >= level) return p.t0;
  if (p.W0 <= 0.0) return kInf;
  return growth_inverse(p.dimension, p.t0, (1.0 / p.W0 - 1.0 / level) / p.C);
}

RiccatiTrajectory integrate_riccati(const RiccatiParams& p, double horizon, double dt) {
  p.validate();
  if (!(dt > 0.0)) throw ValidationError("integrate_riccati: dt must be positive");
  RiccatiTrajectory tr;
  tr.estimate.method = LifespanMethod::numeric;
  tr.t.push_back(p.t0);
  tr.W.push_back(p.W0);
  if (p.W0 <= 0.0) {
    // W = 0 is a fixed point and negative data decay towards it.
    tr.t.push_back(horizon);
    tr.W.push_back(riccati_solution(p, horizon));
    tr.estimate.censored = true;
    tr.estimate.blowup_time = horizon;
    return tr;
  }

  const double q = p.exponent();
  const double C = p.C;
  // dt/ds with s = ln W.
  auto rhs = [&](double s, double t) { return std::exp(-s) * std::pow(1.0 + t, q) / C; };
  auto rk4 = [&](double s, double t, double h) {
    const double k1 = rhs(s, t);
    const double k2 = rhs(s + 0.5 * h, t + 0.5 * h * k1);
    const double k3 = rhs(s + 0.5 * h, t + 0.5 * h * k2);
    const double k4 = rhs(s + h, t + h * k3);
    return t + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  };

  constexpr double tol = 1e-10;
  const double s_end = -std::log(kMachEps * p.W0);
  double s = std::log(p.W0), t = p.t0;
  double h = std::min(0.1, dt / rhs(s, t));
  while (s < s_end) {
    h = std::min({h, s_end - s, dt / rhs(s, t)});
    const double full = rk4(s, t, h);
    const double half = rk4(s + 0.5 * h, rk4(s, t, 0.5 * h), 0.5 * h);
    const double err = std::abs(half - full) / 15.0;
    const double scale = tol * (1.0 + std::abs(t));
    if (err > scale && h > 1e-14) {
      h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.2));
      continue;
    }
    const double t_new = half + (half - full) / 15.0;
    s += h;
    if (t_new > horizon) {
      tr.t.push_back(horizon);
      tr.W.push_back(std::exp(s));
      tr.estimate.censored = true;
      tr.estimate.blowup_time = horizon;
      return tr;
    }
    t = t_new;
    tr.t.push_back(t);
    tr.W.push_back(std::exp(s));
    h *= err > 0.0 ? std::min(2.0, 0.9 * std::pow(scale / err, 0.2)) : 2.0;
  }
  // Remaining time to W = inf, to leading order in 1/W.
  tr.estimate.blowup_time = t + std::exp(-s) * std::pow(1.0 + t, q) / C;
  return tr;
}

namespace {

FitResult least_squares(const std::vector<std::pair<double, double>>& samples, bool exponential) {
  if (samples.size() < 3) throw ValidationError("fit needs at least 3 samples");
  std::vector<double> xs, ys;
  for (const auto& [eps, T] : samples) {
    if (!(eps > 0.0) || !(T > 0.0) || !std::isfinite(T) || !std::isfinite(eps))
      throw ValidationError("fit samples must be finite and positive");
    xs.push_back(exponential ? 1.0 / eps : std::log(eps));
    ys.push_back(std::log(T));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit samples need distinct epsilon values");
  FitResult fit;
  fit.slope = sxy / sxx;
  const double log_a = my - fit.slope * mx;
  fit.prefactor = std::exp(log_a);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double model = std::exp(log_a + fit.slope * xs[i]);
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(model / std::exp(ys[i]) - 1.0));
  }
  return fit;
}

std::vector<std::pair<double, double>> uncensored(const std::vector<SweepEntry>& entries) {
  std::vector<std::pair<double, double>> out;
  for (const auto& e : entries) {
    if (e.estimate.censored) {
      std::ostringstream msg;
      msg << "censored sample at epsilon = " << e.epsilon << "; exclude it before fitting";
      throw ValidationError(msg.str());
    }
    out.emplace_back(e.epsilon, e.estimate.blowup_time);
  }
  return out;
}

}  // namespace

FitResult fit_power_law(const std::vector<std::pair<double, double>>& samples) {
  return least_squares(samples, false);
}

FitResult fit_exp_law(const std::vector<std::pair<double, double>>& samples) {
  return least_squares(samples, true);
}

FitResult fit_power_law(const std::vector<SweepEntry>& entries) { return fit_power_law(uncensored(entries)); }
FitResult fit_exp_law(const std::vector<SweepEntry>& entries) { return fit_exp_law(uncensored(entries)); }

double Threshold::level_for(const FunctionalSeries& s) const {
  if (kind == Kind::absolute) return value;
  for (std::size_t i = 0; i < s.t.size() && i < s.W.size(); ++i)
    if (s.t[i] >= t_ref - 1e-12) return value * s.W[i];
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<SweepEntry> lifespan_sweep(std::vector<double> plan, const Threshold& threshold,
                                       const SeriesDriver& driver) {
  std::sort(plan.begin(), plan.end());
  std::vector<SweepEntry> out;
  for (double eps : plan) {
    FunctionalSeries s;
    try {
      s = driver(eps);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "sweep driver failed at epsilon = " << eps << ": " << e.what();
      throw SweepError(msg.str(), eps);
    }
    SweepEntry entry;
    entry.epsilon = eps;
    entry.threshold = threshold.level_for(s);
    entry.estimate.method = LifespanMethod::simulation_proxy;
    entry.estimate.censored = true;
    entry.estimate.blowup_time = s.horizon > 0.0 ? s.horizon : (s.t.empty() ? 0.0 : s.t.back());
    if (entry.threshold > 0.0) {
      for (std::size_t i = 0; i < s.W.size(); ++i) {
        if (s.W[i] >= entry.threshold) {
          entry.estimate.censored = false;
          entry.estimate.blowup_time = s.t[i];
          break;
        }
      }
    }
    if (s.terminated_early) {
      entry.breakdown_time = s.t.empty() ? 0.0 : s.t.back();
      entry.breakdown_reason = s.termination_reason;
    }
    out.push_back(entry);
  }
  return out;
}

FunctionalSeries riccati_series(const RiccatiParams& p, double horizon, double h) {
  p.validate();
  if (!(h > 0.0)) throw ValidationError("riccati_series: sample spacing must be positive");
  FunctionalSeries s;
  s.horizon = horizon;
  for (long i = 0;; ++i) {
    const double t = i * h;
    if (t > horizon + 1e-12 * h) break;
    const double w = riccati_solution(p, t);
    if (!std::isfinite(w)) break;
    s.push(t, 0.0, 0.0, 0.0);
    s.W.push_back(w);
    s.Z.push_back(0.0);
  }
  return s;
}

double comparison_violation(const FunctionalSeries& s, double C, int dimension) {
  double worst = -kInf;
  for (std::size_t i = 0; i < s.W.size(); ++i) {
    if (!(s.W[i] > 0.0) || !std::isfinite(s.W[i])) continue;
    for (std::size_t k = i + 1; k < s.W.size(); ++k) {
      const double denom = 1.0 / s.W[i] - C * growth(dimension, s.t[i], s.t[k]);
      if (denom <= 0.0) break;
      worst = std::max(worst, (1.0 / denom - s.W[k]) / s.W[k]);
    }
  }
  return std::isfinite(worst) ? worst : 0.0;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepEntry>& entries) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "epsilon,T_proxy,censored,threshold,method,breakdown_time\n";
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%s,%.17g\n", e.epsilon, e.estimate.blowup_time,
                  e.estimate.censored ? 1 : 0, e.threshold, to_string(e.estimate.method),
                  e.breakdown_time ? *e.breakdown_time : std::numeric_limits<double>::quiet_NaN());
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace isoshock
