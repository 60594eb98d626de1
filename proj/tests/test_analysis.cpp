#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsilab/analysis.hpp"
#include "fsilab/errors.hpp"
#include "fsilab/sdof.hpp"

using namespace fsilab;

namespace {

TimeSeries sampled(double t0, double dt, int n, const std::function<double(double)>& f) {
  TimeSeries s;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * dt;
    s.push(t, f(t));
  }
  return s;
}

}  // namespace

TEST_CASE("settling: constant series settles immediately") {
  const TimeSeries s = sampled(1.5, 0.1, 50, [](double) { return 3.0; });
  CHECK(settling_time(s, 3.0, 0.02) == doctest::Approx(1.5));
  CHECK(settling_time(s, std::nullopt, 0.02) == doctest::Approx(1.5));
}

TEST_CASE("settling of the analytic damped step response") {
  SdofParams p;
  p.m_ss = 1.0;
  p.c = 2.5;
  p.k = 10.0;

  // Independent oracle: last time the closed-form deviation touches the 2%
  // band, located by dense scanning of the analytic solution itself.
  const double d_inf = 1.282 / 10.0;
  double exact_exit = 0.0;
  for (double t = 0.0; t < 12.0; t += 1e-6)
    if (std::abs(analytic_reference(p, 1.282, t) - d_inf) > 0.02 * d_inf) exact_exit = t;
  CHECK(exact_exit == doctest::Approx(2.65938).epsilon(1e-4));

  const double dt = 0.001;
  const TimeSeries s =
      sampled(dt, dt, 12000, [&](double t) { return analytic_reference(p, 1.282, t); });
  const double t_settle = settling_time(s, d_inf, 0.02);
  CHECK(std::abs(t_settle - exact_exit) <= dt);
}

TEST_CASE("settling errors") {
  const TimeSeries ramp = sampled(0.0, 0.1, 100, [](double t) { return t; });
  CHECK_THROWS_AS(settling_time(ramp, 100.0, 0.02), NotSettledError);
  CHECK_THROWS_AS(settling_time(ramp, 5.0, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(settling_time(TimeSeries{}, 1.0, 0.02), std::invalid_argument);
}

TEST_CASE("settling is shift invariant and scale equivariant") {
  SdofParams p;
  p.m_ss = 1.0;
  p.c = 2.5;
  p.k = 10.0;
  const double d_inf = 0.1282;
  const TimeSeries base =
      sampled(0.001, 0.001, 9000, [&](double t) { return analytic_reference(p, 1.282, t); });
  const double t0 = settling_time(base, d_inf, 0.02);

  TimeSeries shifted = base;
  for (double& t : shifted.t) t += 17.0;
  CHECK(settling_time(shifted, d_inf, 0.02) == doctest::Approx(t0 + 17.0).epsilon(1e-12));

  TimeSeries scaled = base;
  for (double& t : scaled.t) t *= 3.0;
  CHECK(settling_time(scaled, d_inf, 0.02) == doctest::Approx(3.0 * t0).epsilon(1e-12));
}

TEST_CASE("phase lag of identical series is zero") {
  const TimeSeries a =
      sampled(0.0, 0.001, 4000, [](double t) { return std::sin(2 * M_PI * t); });
  CHECK(phase_lag(a, a, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("phase lag recovers a constructed shift") {
  const double shift = 0.1;
  const TimeSeries a =
      sampled(0.0, 0.001, 4000, [](double t) { return std::sin(2 * M_PI * t); });
  const TimeSeries b = sampled(0.0, 0.001, 4000,
                               [&](double t) { return std::sin(2 * M_PI * (t - shift)); });
  CHECK(phase_lag(a, b, 1.0) == doctest::Approx(shift).epsilon(0.01));

  for (double s : {0.033, 0.25, 0.4}) {
    const TimeSeries c =
        sampled(0.0, 0.001, 4000, [&](double t) { return std::sin(2 * M_PI * (t - s)); });
    CHECK(std::abs(phase_lag(a, c, 1.0) - s) < 0.0015);
  }
}

TEST_CASE("phase lag span precondition") {
  const TimeSeries a =
      sampled(0.0, 0.001, 1500, [](double t) { return std::sin(2 * M_PI * t); });
  CHECK_THROWS_AS(phase_lag(a, a, 1.0), std::invalid_argument);
}

TEST_CASE("dominant frequency of a pure tone") {
  const TimeSeries s =
      sampled(0.0, 0.001, 3000, [](double t) { return std::sin(2 * M_PI * 3.0 * t); });
  CHECK(dominant_frequency(s) == doctest::Approx(3.0).epsilon(0.005));
}

TEST_CASE("dominant frequency of the free SDOF response") {
  SdofParams p;
  p.m_ss = 1.0;
  p.c = 2.5;
  p.k = 10.0;
  const TimeSeries s =
      sampled(0.001, 0.001, 8000, [&](double t) { return analytic_reference(p, 1.282, t); });
  // omega_d / 2 pi from the model constants.
  CHECK(dominant_frequency(s) == doctest::Approx(0.46228).epsilon(0.01));
}

TEST_CASE("dominant frequency preconditions") {
  const TimeSeries flat = sampled(0.0, 0.1, 100, [](double) { return 2.0; });
  CHECK_THROWS_AS(dominant_frequency(flat), std::invalid_argument);
  const TimeSeries half =
      sampled(0.0, 0.01, 40, [](double t) { return std::sin(2 * M_PI * t); });
  CHECK_THROWS_AS(dominant_frequency(half), std::invalid_argument);
}

TEST_CASE("time series validation") {
  TimeSeries bad;
  bad.t = {0.0, 0.1, 0.1};
  bad.y = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.t = {0.0, 0.1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("beta bisection against a known threshold") {
  const double threshold = 0.437;
  auto probe = [&](double beta) {
    ProbeOutcome out;
    out.diverged = beta > threshold;
    out.steps_survived = out.diverged ? 10 : 100;
    return out;
  };
  const StabilityProbeResult result = max_stable_beta(probe, 0.01);
  CHECK(!result.all_unstable);
  CHECK(std::abs(result.beta_max - threshold) <= 0.01);
  // History starts with the full-relaxation probe and then brackets.
  CHECK(result.history.front().beta == doctest::Approx(1.0));
  for (const auto& h : result.history) CHECK(h.diverged == (h.beta > threshold));
}

TEST_CASE("beta bisection edge cases") {
  auto always_stable = [](double) { return ProbeOutcome{false, 100}; };
  CHECK(max_stable_beta(always_stable, 0.01).beta_max == doctest::Approx(1.0));

  auto never_stable = [](double) { return ProbeOutcome{true, 1}; };
  const StabilityProbeResult result = max_stable_beta(never_stable, 0.01);
  CHECK(result.all_unstable);

  CHECK_THROWS_AS(max_stable_beta(always_stable, 0.0), std::invalid_argument);
}

TEST_CASE("beta bisection is reproducible") {
  auto probe = [](double beta) { return ProbeOutcome{beta > 0.2345, 5}; };
  const StabilityProbeResult a = max_stable_beta(probe, 0.005);
  const StabilityProbeResult b = max_stable_beta(probe, 0.005);
  CHECK(a.beta_max == b.beta_max);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i)
    CHECK(a.history[i].beta == b.history[i].beta);
}
