#include "fsilab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fsilab/errors.hpp"

namespace fsilab {

void TimeSeries::validate() const {
  if (t.size() != y.size()) throw std::invalid_argument("time series: length mismatch");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("time series: sample times must be strictly increasing");
}

double settling_time(const TimeSeries& series, std::optional<double> final_value,
                     double band_fraction) {
  series.validate();
  if (series.size() == 0) throw std::invalid_argument("settling_time: empty series");
  if (!(band_fraction > 0.0 && band_fraction < 0.5))
    throw std::invalid_argument("settling_time: band fraction must lie in (0, 0.5)");

  double target;
  if (final_value) {
    target = *final_value;
  } else {
    const int n = series.size();
    const int tail = std::max(1, n / 10);
    target = std::accumulate(series.y.end() - tail, series.y.end(), 0.0) / tail;
  }
  const double band = band_fraction * std::abs(target);

  int last_outside = -1;
  for (int i = series.size() - 1; i >= 0; --i) {
    if (std::abs(series.y[i] - target) > band) {
      last_outside = i;
      break;
    }
  }
  if (last_outside < 0) return series.t.front();
  if (last_outside == series.size() - 1)
    throw NotSettledError("settling_time: series never settles within its span");
  return series.t[last_outside + 1];
}

double phase_lag(const TimeSeries& a, const TimeSeries& b, double period) {
  a.validate();
  b.validate();
  if (!(period > 0.0)) throw std::invalid_argument("phase_lag: period must be positive");
  const double span_a = a.t.back() - a.t.front();
  const double span_b = b.t.back() - b.t.front();
  if (span_a < 2.0 * period || span_b < 2.0 * period)
    throw std::invalid_argument("phase_lag: series must span at least two periods");

  const double mean_a = std::accumulate(a.y.begin(), a.y.end(), 0.0) / a.size();
  const double mean_b = std::accumulate(b.y.begin(), b.y.end(), 0.0) / b.size();

  // Linear interpolation of the (detrended) reference series.
  auto eval_a = [&](double time) {
    const auto it = std::upper_bound(a.t.begin(), a.t.end(), time);
    if (it == a.t.begin()) return a.y.front() - mean_a;
    if (it == a.t.end()) return a.y.back() - mean_a;
    const std::size_t i = static_cast<std::size_t>(it - a.t.begin());
    const double w = (time - a.t[i - 1]) / (a.t[i] - a.t[i - 1]);
    return (1.0 - w) * (a.y[i - 1] - mean_a) + w * (a.y[i] - mean_a);
  };

  // Correlation window: keep t - s inside the reference span for all
  // probed shifts s in [0, period].
  const double window_start = std::max(b.t.front(), a.t.front() + period);
  const double dt = span_b / (b.size() - 1);
  const int n_shift = static_cast<int>(std::floor(period / dt));

  std::vector<double> corr(n_shift + 1, 0.0);
  for (int j = 0; j <= n_shift; ++j) {
    const double s = j * dt;
    double c = 0.0;
    for (int i = 0; i < b.size(); ++i) {
      if (b.t[i] < window_start) continue;
      c += eval_a(b.t[i] - s) * (b.y[i] - mean_b);
    }
    corr[j] = c;
  }

  int best = 0;
  for (int j = 1; j <= n_shift; ++j)
    if (corr[j] > corr[best]) best = j;

  double shift = best * dt;
  if (best > 0 && best < n_shift) {
    // Quadratic refinement of the correlation peak.
    const double c0 = corr[best - 1], c1 = corr[best], c2 = corr[best + 1];
    const double denom = c0 - 2.0 * c1 + c2;
    if (std::abs(denom) > 0.0) {
      const double offset = 0.5 * (c0 - c2) / denom;
      if (std::abs(offset) <= 1.0) shift += offset * dt;
    }
  }
  return shift;
}

double dominant_frequency(const TimeSeries& series) {
  series.validate();
  if (series.size() < 2) throw std::invalid_argument("dominant_frequency: series too short");
  const double mean = std::accumulate(series.y.begin(), series.y.end(), 0.0) / series.size();

  std::vector<double> crossings;
  for (int i = 0; i + 1 < series.size(); ++i) {
    const double y0 = series.y[i] - mean;
    const double y1 = series.y[i + 1] - mean;
    if (y0 == 0.0) {
      crossings.push_back(series.t[i]);
    } else if (y0 * y1 < 0.0) {
      const double w = y0 / (y0 - y1);
      crossings.push_back(series.t[i] + w * (series.t[i + 1] - series.t[i]));
    }
  }
  if (crossings.size() < 4)
    throw std::invalid_argument("dominant_frequency: fewer than 4 zero crossings");
  const double spacing = (crossings.back() - crossings.front()) / (crossings.size() - 1);
  return 1.0 / (2.0 * spacing);
}

StabilityProbeResult max_stable_beta(const std::function<ProbeOutcome(double)>& probe,
                                     double tol_beta) {
  if (!(tol_beta > 0.0)) throw std::invalid_argument("max_stable_beta: tol_beta must be positive");

  StabilityProbeResult result;
  auto run = [&](double beta) {
    const ProbeOutcome out = probe(beta);
    result.history.push_back({beta, out.diverged, out.steps_survived});
    return !out.diverged;
  };

  if (run(1.0)) {
    result.beta_max = 1.0;
    return result;
  }
  double lo = 0.0, hi = 1.0;  // lo: largest known stable (0 = untested limit)
  while (hi - lo > tol_beta) {
    const double mid = 0.5 * (lo + hi);
    if (run(mid))
      lo = mid;
    else
      hi = mid;
  }
  if (lo == 0.0) {
    result.all_unstable = true;
    result.beta_max = 0.0;
    return result;
  }
  result.beta_max = 0.5 * (lo + hi);
  return result;
}

}  // namespace fsilab
