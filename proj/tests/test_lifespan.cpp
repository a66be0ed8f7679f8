#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "isoshock/errors.hpp"
#include "isoshock/lifespan.hpp"

using namespace isoshock;

TEST_SUITE("lifespan") {

TEST_CASE("closed-form blow-up times") {
  const LifespanEstimate two = riccati_blowup_time({1.0, 0.0, 0.1, 2});
  CHECK(two.blowup_time == doctest::Approx(35.0).epsilon(1e-13));
  CHECK_FALSE(two.censored);
  CHECK(two.method == LifespanMethod::closed_form);

  const LifespanEstimate three = riccati_blowup_time({1.0, 0.0, 0.1, 3});
  CHECK(three.blowup_time == doctest::Approx(22025.4657948067165).epsilon(1e-12));

  const RiccatiParams shifted{2.0, 1.0, 0.25, 2};
  const double s = std::sqrt(2.0) + 1.0 / (2.0 * 2.0 * 0.25);
  CHECK(riccati_blowup_time(shifted).blowup_time == doctest::Approx(s * s - 1.0).epsilon(1e-13));
  const RiccatiParams shifted3{2.0, 1.0, 0.25, 3};
  CHECK(riccati_blowup_time(shifted3).blowup_time == doctest::Approx(2.0 * std::exp(2.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("non-positive data never blows up") {
  for (double w0 : {0.0, -0.3}) {
    const LifespanEstimate e = riccati_blowup_time({1.0, 0.0, w0, 2});
    CHECK(e.censored);
    CHECK(std::isinf(e.blowup_time));
  }
  const RiccatiTrajectory tr = integrate_riccati({1.0, 0.0, 0.0, 2}, 5.0, 0.1);
  CHECK(tr.estimate.censored);
  CHECK(tr.W.back() == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(riccati_blowup_time({0.0, 0.0, 0.1, 2}), ValidationError);
  CHECK_THROWS_AS(riccati_blowup_time({1.0, -2.0, 0.1, 2}), ValidationError);
  CHECK_THROWS_AS(riccati_blowup_time({1.0, 0.0, 0.1, 4}), ValidationError);
  CHECK(RiccatiParams{1.0, 0.0, 0.1, 2}.exponent() == 0.5);
  CHECK(RiccatiParams{1.0, 0.0, 0.1, 3}.exponent() == 1.0);
}

TEST_CASE("closed-form solution and threshold time") {
  const RiccatiParams p{1.0, 0.0, 0.1, 2};
  CHECK(riccati_solution(p, 0.0) == 0.1);
  const double t = riccati_threshold_time(p, 1.0);
  CHECK(riccati_solution(p, t) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t < riccati_blowup_time(p).blowup_time);
  CHECK(std::isinf(riccati_solution(p, 40.0)));
  CHECK(riccati_threshold_time(p, 0.05) == 0.0);
}

TEST_CASE("numeric integration matches the closed form") {
  for (int dim : {2, 3}) {
    const RiccatiParams p{1.5, 0.5, 0.4, dim};
    const RiccatiTrajectory tr = integrate_riccati(p, 1e6, 0.5);
    const double exact = riccati_blowup_time(p).blowup_time;
    CHECK_FALSE(tr.estimate.censored);
    CHECK(tr.estimate.method == LifespanMethod::numeric);
    CHECK(tr.estimate.blowup_time == doctest::Approx(exact).epsilon(1e-6));
    for (std::size_t i = 0; i < tr.t.size(); i += 7) {
      const double w = riccati_solution(p, tr.t[i]);
      if (w < 1e2) CHECK(tr.W[i] == doctest::Approx(w).epsilon(1e-7));
    }
  }
  const RiccatiTrajectory cut = integrate_riccati({1.0, 0.0, 0.01, 2}, 10.0, 0.5);
  CHECK(cut.estimate.censored);
  CHECK(cut.estimate.blowup_time == 10.0);
}

TEST_CASE("blow-up time decreases with the initial size") {
  for (int dim : {2, 3}) {
    double prev = INFINITY;
    for (double w0 = 0.01; w0 < 10.0; w0 *= 1.3) {
      const double T = riccati_blowup_time({1.0, 0.0, w0, dim}).blowup_time;
      CHECK(T < prev);
      prev = T;
    }
  }
}

TEST_CASE("power and exponential fits") {
  std::vector<std::pair<double, double>> pw, ex;
  for (double eps : {0.01, 0.02, 0.05, 0.1}) {
    pw.emplace_back(eps, 3.0 * std::pow(eps, -2.0));
    ex.emplace_back(eps, 0.5 * std::exp(1.0 / eps));
  }
  const FitResult a = fit_power_law(pw);
  CHECK(a.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(a.prefactor == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(a.max_rel_residual < 1e-10);
  const FitResult b = fit_exp_law(ex);
  CHECK(b.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.prefactor == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(fit_power_law(std::vector<std::pair<double, double>>{{0.1, 1.0}}), ValidationError);

  // The closed-form lifespans follow eps^-2 and e^{1/eps} asymptotically.
  std::vector<std::pair<double, double>> t2, t3;
  for (double eps : {1e-4, 2e-4, 5e-4, 1e-3}) t2.emplace_back(eps, riccati_blowup_time({1.0, 0.0, eps, 2}).blowup_time);
  for (double eps : {0.02, 0.025, 0.03, 0.04}) t3.emplace_back(eps, riccati_blowup_time({1.0, 0.0, eps, 3}).blowup_time);
  CHECK(fit_power_law(t2).slope == doctest::Approx(-2.0).epsilon(1e-2));
  CHECK(fit_exp_law(t3).slope == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fits reject censored entries") {
  std::vector<SweepEntry> entries(3);
  for (int k = 0; k < 3; ++k) {
    entries[k].epsilon = 0.1 * (k + 1);
    entries[k].estimate.blowup_time = 10.0 / (k + 1);
  }
  CHECK_NOTHROW(fit_power_law(entries));
  entries[1].estimate.censored = true;
  CHECK_THROWS_AS(fit_power_law(entries), ValidationError);
  CHECK_THROWS_AS(fit_exp_law(entries), ValidationError);
}

TEST_CASE("thresholds") {
  FunctionalSeries s;
  for (int k = 0; k <= 4; ++k) {
    s.push(0.5 * k, 0, 0, 0);
    s.W.push_back(1.0 + k);
  }
  CHECK(Threshold::absolute_level(7.0).level_for(s) == 7.0);
  CHECK(Threshold::relative_factor(10.0).level_for(s) == 30.0);
  CHECK(std::isnan(Threshold::relative_factor(10.0, 5.0).level_for(s)));
}

TEST_CASE("sweep over Riccati series") {
  auto driver = [](double eps) { return riccati_series({1.0, 0.0, eps, 2}, 200.0, 0.01); };
  const std::vector<SweepEntry> out =
      lifespan_sweep({0.3, 0.1, 0.2, 0.01}, Threshold::absolute_level(50.0), driver);
  REQUIRE(out.size() == 4);
  CHECK(out[0].epsilon == 0.01);
  CHECK(out[0].estimate.censored);
  CHECK(out[0].estimate.blowup_time == 200.0);
  for (int k = 1; k < 4; ++k) {
    CHECK_FALSE(out[k].estimate.censored);
    const double exact = riccati_threshold_time({1.0, 0.0, out[k].epsilon, 2}, 50.0);
    CHECK(out[k].estimate.blowup_time >= exact);
    CHECK(out[k].estimate.blowup_time < exact + 0.01 + 1e-12);
    CHECK(out[k].estimate.method == LifespanMethod::simulation_proxy);
  }
  CHECK(out[1].estimate.blowup_time > out[2].estimate.blowup_time);
  CHECK(out[2].estimate.blowup_time > out[3].estimate.blowup_time);
}

TEST_CASE("sweep names the failing epsilon") {
  auto driver = [](double eps) -> FunctionalSeries {
    if (eps > 0.15) throw std::runtime_error("boom");
    return riccati_series({1.0, 0.0, eps, 2}, 1.0, 0.1);
  };
  try {
    lifespan_sweep({0.1, 0.2}, Threshold::absolute_level(1.0), driver);
    FAIL("expected SweepError");
  } catch (const SweepError& e) {
    CHECK(e.epsilon == 0.2);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("early termination is reported as breakdown") {
  auto driver = [](double eps) {
    FunctionalSeries s = riccati_series({1.0, 0.0, eps, 2}, 1.0, 0.1);
    s.terminated_early = true;
    s.termination_reason = "density bound";
    return s;
  };
  const auto out = lifespan_sweep({0.1}, Threshold::absolute_level(100.0), driver);
  REQUIRE(out[0].breakdown_time.has_value());
  CHECK(*out[0].breakdown_time == doctest::Approx(1.0));
  CHECK(out[0].breakdown_reason == "density bound");
}

TEST_CASE("comparison principle") {
  const RiccatiParams p{1.0, 0.0, 0.2, 2};
  const FunctionalSeries exact = riccati_series(p, 20.0, 0.05);
  CHECK(comparison_violation(exact, 1.0, 2) < 1e-12);
  // Faster growth still satisfies the inequality; slower growth violates it.
  FunctionalSeries fast = riccati_series({2.0, 0.0, 0.2, 2}, 5.0, 0.05);
  CHECK(comparison_violation(fast, 1.0, 2) <= 1e-12);
  FunctionalSeries slow = riccati_series({0.5, 0.0, 0.2, 2}, 5.0, 0.05);
  CHECK(comparison_violation(slow, 1.0, 2) > 1e-3);
}

TEST_CASE("sweep csv") {
  std::vector<SweepEntry> entries(2);
  entries[0].epsilon = 0.1;
  entries[0].estimate.blowup_time = 3.0;
  entries[1].epsilon = 0.2;
  entries[1].estimate.censored = true;
  entries[1].breakdown_time = 1.5;
  const std::string path = "lifespan_sweep_test.csv";
  write_sweep_csv(path, entries);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "epsilon,T_proxy,censored,threshold,method,breakdown_time");
  std::getline(is, line);
  CHECK(line.rfind("0.10000000000000001,3,0,", 0) == 0);
  std::getline(is, line);
  CHECK(line.find(",1,") != std::string::npos);
  std::remove(path.c_str());
}

}  // TEST_SUITE
