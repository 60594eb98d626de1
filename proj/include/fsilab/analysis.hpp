#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fsilab {

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> y;
  std::string label;

  int size() const { return static_cast<int>(t.size()); }
  void push(double time, double value) {
    t.push_back(time);
    y.push_back(value);
  }
  void validate() const;
};

// Earliest time after which every sample stays inside
// final_value +- band_fraction * |final_value|. When final_value is not
// supplied, the mean of the trailing 10% of samples is used.
double settling_time(const TimeSeries& series, std::optional<double> final_value,
                     double band_fraction);

// Time shift of b relative to a (positive: b lags a) maximizing the
// cross-correlation over one forcing period, refined by quadratic
// interpolation of the correlation peak.
double phase_lag(const TimeSeries& a, const TimeSeries& b, double period);

// Frequency from the mean zero-crossing spacing of the detrended signal.
double dominant_frequency(const TimeSeries& series);

struct StabilityProbe {
  double beta = 0.0;
  bool diverged = false;
  int steps_survived = 0;
};

struct ProbeOutcome {
  bool diverged = false;
  int steps_survived = 0;
};

struct StabilityProbeResult {
  double beta_max = 0.0;
  bool all_unstable = false;
  std::vector<StabilityProbe> history;
};

// Bisection for the largest relaxation factor in (0, 1] for which the
// probe completes its horizon. The probe must be deterministic.
StabilityProbeResult max_stable_beta(const std::function<ProbeOutcome(double)>& probe,
                                     double tol_beta);

}  // namespace fsilab
