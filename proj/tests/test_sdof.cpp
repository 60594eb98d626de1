#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsilab/analysis.hpp"
#include "fsilab/errors.hpp"
#include "fsilab/sdof.hpp"

using namespace fsilab;

namespace {

SdofParams appendix_params(double m_fs) {
  SdofParams p;
  p.m_ss = 1.0;
  p.c = 2.5;
  p.k = 10.0;
  p.m_fs = m_fs;
  p.f_ext = [](double) { return 1.282; };
  return p;
}

TimeSeries run_series(const SdofParams& p, double dt, double t_end) {
  TimeSeries series;
  double d = 0.0, v = 0.0;
  const int steps = static_cast<int>(std::round(t_end / dt));
  for (int n = 0; n < steps; ++n) {
    const SdofStep s = step_sdof(p, d, v, n * dt, dt);
    d = s.d;
    v = s.v;
    series.push((n + 1) * dt, d);
  }
  return series;
}

// Log-decrement damping estimate from successive peak deviations.
double log_decrement_zeta(const TimeSeries& series, double d_inf) {
  std::vector<double> peaks;
  for (int i = 1; i + 1 < series.size(); ++i) {
    const double prev = std::abs(series.y[i - 1] - d_inf);
    const double cur = std::abs(series.y[i] - d_inf);
    const double next = std::abs(series.y[i + 1] - d_inf);
    if (cur > prev && cur >= next && cur > 1e-8) peaks.push_back(cur);
  }
  REQUIRE(peaks.size() >= 3);
  // Peaks alternate sides of d_inf, so one full period spans two of them.
  const double delta = std::log(peaks[0] / peaks[2]);
  return delta / std::sqrt(4.0 * M_PI * M_PI + delta * delta);
}

}  // namespace

TEST_CASE("equilibrium is a fixed point for every m_fs and dt") {
  for (double m_fs : {0.0, 10.0, 1000.0})
    for (double dt : {0.001, 0.02, 1.0}) {
      const SdofParams p = appendix_params(m_fs);
      const double d_eq = 1.282 / p.k;
      const SdofStep s = step_sdof(p, d_eq, 0.0, 0.0, dt);
      CHECK(s.d == doctest::Approx(d_eq).epsilon(1e-14));
      CHECK(s.v == doctest::Approx(0.0));
      CHECK(s.a == doctest::Approx(0.0));
    }
}

TEST_CASE("analytic reference basics") {
  const SdofParams p = appendix_params(0.0);
  CHECK(analytic_reference(p, 1.282, 0.0) == doctest::Approx(0.0));
  CHECK(analytic_reference(p, 1.282, 1000.0) == doctest::Approx(0.1282).epsilon(1e-10));

  // Initial velocity is zero.
  const double h = 1e-7;
  CHECK(analytic_reference(p, 1.282, h) / h == doctest::Approx(0.0).epsilon(1e-4));

  SdofParams overdamped = p;
  overdamped.c = 10.0;
  CHECK_THROWS_AS(analytic_reference(overdamped, 1.0, 1.0), UnsupportedRegimeError);
}

TEST_CASE("one damped period between successive response peaks") {
  // Oracle: T_d = 2 pi / (omega_n sqrt(1 - zeta^2)) with the model constants.
  const SdofParams p = appendix_params(0.0);
  const double omega_n = std::sqrt(10.0);
  const double zeta = 2.5 / (2.0 * std::sqrt(10.0));
  const double period = 2.0 * M_PI / (omega_n * std::sqrt(1.0 - zeta * zeta));
  CHECK(period == doctest::Approx(2.1632).epsilon(1e-4));

  const double dt = 1e-4;
  std::vector<double> peak_times;
  double prev2 = 0.0, prev1 = 0.0;
  for (int n = 1; n < 60000; ++n) {
    const double d = analytic_reference(p, 1.282, n * dt);
    if (n > 2 && prev1 > prev2 && prev1 >= d) peak_times.push_back((n - 1) * dt);
    prev2 = prev1;
    prev1 = d;
  }
  REQUIRE(peak_times.size() >= 2);
  CHECK(peak_times[1] - peak_times[0] == doctest::Approx(period).epsilon(1e-3));
}

TEST_CASE("discrete trajectory converges to the analytic solution at first order") {
  const SdofParams p = appendix_params(0.0);
  std::vector<double> errors;
  for (double dt : {0.04, 0.02, 0.01, 0.005}) {
    double d = 0.0, v = 0.0, max_err = 0.0;
    const int steps = static_cast<int>(std::round(10.0 / dt));
    for (int n = 0; n < steps; ++n) {
      const SdofStep s = step_sdof(p, d, v, n * dt, dt);
      d = s.d;
      v = s.v;
      max_err = std::max(max_err, std::abs(d - analytic_reference(p, 1.282, (n + 1) * dt)));
    }
    errors.push_back(max_err);
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
  }
}

TEST_CASE("settling time strictly increases with m_fs") {
  double previous = -1.0;
  for (double m_fs : {0.0, 10.0, 100.0, 1000.0}) {
    const TimeSeries series = run_series(appendix_params(m_fs), 0.02, 200.0);
    const double t_settle = settling_time(series, 0.1282, 0.02);
    CHECK(t_settle > previous);
    previous = t_settle;
  }
}

TEST_CASE("trajectories stay bounded for any dt and m_fs") {
  for (double dt : {0.001, 0.01, 0.1, 1.0})
    for (double m_fs : {0.0, 1.0, 100.0, 1e4}) {
      const SdofParams p = appendix_params(m_fs);
      double d = 0.0, v = 0.0;
      const int steps = static_cast<int>(std::min(std::round(50.0 / dt), 5e4));
      double max_abs = 0.0;
      for (int n = 0; n < steps; ++n) {
        const SdofStep s = step_sdof(p, d, v, n * dt, dt);
        d = s.d;
        v = s.v;
        max_abs = std::max(max_abs, std::abs(d));
      }
      CHECK(max_abs <= 2.0 * 1.282 / p.k);
    }
}

TEST_CASE("added interface damping slows the oscillator") {
  // The m_fs terms act through m_fs (v_{n+1} - v_n) = m_fs dt a_{n+1}: an
  // added mass proportional to dt. The response therefore decays more
  // slowly and the extracted modal damping ratio falls while the settling
  // time grows.
  std::vector<double> zetas;
  for (double m_fs : {0.0, 10.0, 100.0, 1000.0})
    zetas.push_back(log_decrement_zeta(run_series(appendix_params(m_fs), 0.02, 120.0), 0.1282));
  for (std::size_t i = 0; i + 1 < zetas.size(); ++i) CHECK(zetas[i] > zetas[i + 1]);
  CHECK(zetas.front() == doctest::Approx(2.5 / (2.0 * std::sqrt(10.0))).epsilon(0.15));
}

TEST_CASE("input validation") {
  SdofParams p = appendix_params(0.0);
  CHECK_THROWS_AS(step_sdof(p, 0.0, 0.0, 0.0, 0.0), std::invalid_argument);
  p.m_ss = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = appendix_params(-1.0);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
