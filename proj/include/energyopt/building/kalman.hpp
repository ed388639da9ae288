#pragma once

#include <vector>

#include "energyopt/building/model.hpp"

namespace energyopt::building {

struct GaussianEstimate {
  double mean = 0.0;
  double var = 1.0;
};

/// Scalar Bayes update. A zero measurement variance returns the measurement
/// with zero variance (the limit of the update).
GaussianEstimate kalman_update(const GaussianEstimate& prior, double measurement, double measurement_var);

/// Propagates the estimate through one rc_step; variance grows by the decay
/// factor squared plus the process variance.
GaussianEstimate kalman_predict(const GaussianEstimate& est, double t_ext, double q, double irradiance,
                                const RcModelParams& params, double dt_hours, double process_var);

struct KalmanOptions {
  GaussianEstimate initial{20.0, 1.0};
  double process_var = 0.01;
  double measurement_var = 0.01;
};

struct KalmanResult {
  TimeSeries mean;  // filtered estimate of the temperature at the start of each step
  std::vector<double> variance;
};

/// Filters measurements of the start-of-step temperature (NaN = missing,
/// which gives a predict-only step). `q_hvac` is the net heat applied in each
/// step. Throws ValidationError unless both noise variances are positive.
KalmanResult kalman_estimate(const RcModelParams& params, const TimeSeries& measurements, const TimeSeries& q_hvac,
                             const ScenarioInputs& inputs, const KalmanOptions& opts);

}  // namespace energyopt::building
