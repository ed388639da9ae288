#include "energyopt/building/kalman.hpp"

#include <cmath>

#include "energyopt/error.hpp"

namespace energyopt::building {

GaussianEstimate kalman_update(const GaussianEstimate& prior, double measurement, double measurement_var) {
  if (!(prior.var >= 0.0) || !(measurement_var >= 0.0)) throw ValidationError("kalman: variances must be >= 0");
  if (!std::isfinite(measurement)) throw ValidationError("kalman: measurement must be finite");
  const double total = prior.var + measurement_var;
  if (total == 0.0) return {measurement, 0.0};
  const double gain = prior.var / total;
  return {prior.mean + gain * (measurement - prior.mean), (1.0 - gain) * prior.var};
}

GaussianEstimate kalman_predict(const GaussianEstimate& est, double t_ext, double q, double irradiance,
                                const RcModelParams& params, double dt_hours, double process_var) {
  const double a = 1.0 - dt_hours / (params.R * params.C);
  return {rc_step(est.mean, t_ext, q, irradiance, params, dt_hours), a * a * est.var + process_var};
}

KalmanResult kalman_estimate(const RcModelParams& params, const TimeSeries& measurements, const TimeSeries& q_hvac,
                             const ScenarioInputs& inputs, const KalmanOptions& opts) {
  params.validate();
  if (!(opts.process_var > 0.0) || !(opts.measurement_var > 0.0)) {
    throw ValidationError("kalman: process and measurement variances must be positive");
  }
  if (!(opts.initial.var > 0.0)) throw ValidationError("kalman: initial variance must be positive");
  ts::require_aligned(measurements, q_hvac, "kalman Q_HVAC");
  if (inputs.size() < measurements.size()) throw ValidationError("kalman: inputs shorter than measurements");

  const double dt = measurements.step_hours();
  KalmanResult out;
  out.mean = TimeSeries(measurements.start, measurements.resolution, std::vector<double>(measurements.size()), "degC");
  out.variance.resize(measurements.size());
  GaussianEstimate est = opts.initial;
  for (std::size_t t = 0; t < measurements.size(); ++t) {
    if (!ts::is_missing(measurements[t])) est = kalman_update(est, measurements[t], opts.measurement_var);
    out.mean[t] = est.mean;
    out.variance[t] = est.var;
    est = kalman_predict(est, inputs.t_ext[t], q_hvac[t], inputs.irradiance[t], params, dt, opts.process_var);
  }
  return out;
}

}  // namespace energyopt::building
