#include "energyopt/building/model.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "energyopt/error.hpp"

namespace energyopt::building {

void RcModelParams::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("RC model: R must be positive");
  if (!(C > 0.0) || !std::isfinite(C)) throw ValidationError("RC model: C must be positive");
  if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("RC model: p must be non-negative");
  if (order != 1) throw ValidationError("RC model: only first-order models are supported");
}

void HvacSpec::validate() const {
  if (!(q_max >= 0.0) || !std::isfinite(q_max)) throw ValidationError("HVAC: q_max must be >= 0");
  if (!(cop_heat > 0.0)) throw ValidationError("HVAC: cop_heat must be positive");
  if (!(q_cool_max >= 0.0) || !std::isfinite(q_cool_max)) throw ValidationError("HVAC: q_cool_max must be >= 0");
  if (!(cop_cool > 0.0)) throw ValidationError("HVAC: cop_cool must be positive");
}

void ComfortSpec::validate() const {
  if (!(band > 0.0)) throw ValidationError("comfort: band must be positive");
  if (occupied.size() != target.size()) {
    throw ValidationError("comfort: occupancy mask has " + std::to_string(occupied.size()) + " steps, target has " +
                          std::to_string(target.size()));
  }
  for (double v : target.values) {
    if (!std::isfinite(v)) throw ValidationError("comfort: target temperature must be finite");
  }
}

void ObjectiveWeights::validate() const {
  for (double w : {cost, carbon, comfort}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("objective weights must be finite and >= 0");
  }
  if (cost == 0.0 && carbon == 0.0 && comfort == 0.0) {
    throw ValidationError("objective weights: at least one must be positive");
  }
}

void ScenarioInputs::validate() const {
  if (t_ext.empty()) throw ValidationError("scenario: no input steps");
  ts::require_aligned(t_ext, irradiance, "scenario irradiance");
  ts::require_aligned(t_ext, price, "scenario price");
  ts::require_aligned(t_ext, carbon, "scenario carbon");
  for (const auto* s : {&t_ext, &irradiance, &price, &carbon}) {
    for (double v : s->values) {
      if (!std::isfinite(v)) throw ValidationError("scenario: input series must be complete and finite");
    }
  }
}

ScenarioInputs ScenarioInputs::slice(std::size_t from, std::size_t to) const {
  return {t_ext.slice(from, to), irradiance.slice(from, to), price.slice(from, to), carbon.slice(from, to)};
}

double rc_step(double t_int, double t_ext, double q, double irradiance, const RcModelParams& params, double dt_hours) {
  if (!std::isfinite(t_int) || !std::isfinite(t_ext) || !std::isfinite(q) || !std::isfinite(irradiance) ||
      !std::isfinite(dt_hours)) {
    throw ValidationError("rc_step: non-finite input");
  }
  return t_int + (dt_hours / params.C) * ((t_ext - t_int) / params.R + q + params.p * irradiance);
}

double comfort_criterion(const TimeSeries& t_int, const ComfortSpec& comfort) {
  std::size_t occupied = 0;
  std::size_t ok = 0;
  for (std::size_t t = 0; t < t_int.size(); ++t) {
    if (!comfort.occupied.at(t)) continue;
    ++occupied;
    if (std::abs(t_int[t] - comfort.target[t]) <= comfort.band) ++ok;
  }
  return occupied == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(occupied);
}

void evaluate(BuildingSchedule& s, const HvacSpec& hvac, const ComfortSpec& comfort, const ScenarioInputs& inputs) {
  const double dt = inputs.step_hours();
  s.cost = 0.0;
  s.carbon = 0.0;
  for (std::size_t t = 0; t < s.q_hvac.size(); ++t) {
    const double cool = s.q_cool.empty() ? 0.0 : s.q_cool[t];
    const double energy = (s.q_hvac[t] / hvac.cop_heat + cool / hvac.cop_cool) * dt;
    s.cost += inputs.price[t] * energy;
    s.carbon += inputs.carbon[t] * energy;
  }
  s.comfort_criterion = comfort_criterion(s.t_int, comfort);
}

BuildingSchedule simulate(const RcModelParams& params, const HvacPolicy& policy, const HvacSpec& hvac,
                          const ComfortSpec& comfort, const ScenarioInputs& inputs, double t_int0,
                          std::size_t steps) {
  params.validate();
  hvac.validate();
  comfort.validate();
  inputs.validate();
  if (steps > inputs.size() || steps > comfort.target.size()) {
    throw ValidationError("simulate: " + std::to_string(steps) + " steps requested, inputs cover " +
                          std::to_string(std::min(inputs.size(), comfort.target.size())));
  }
  const double dt = inputs.step_hours();
  std::vector<double> heat(steps), cool(steps), temp(steps);
  double x = t_int0;
  for (std::size_t t = 0; t < steps; ++t) {
    const double q = policy(t, x);
    if (!std::isfinite(q) || q > hvac.heat_limit(t) + 1e-9 || -q > hvac.cool_limit(t) + 1e-9) {
      throw ValidationError("simulate: policy output " + std::to_string(q) + " kW at step " + std::to_string(t) +
                            " is outside the HVAC limits");
    }
    heat[t] = std::max(q, 0.0);
    cool[t] = std::max(-q, 0.0);
    x = rc_step(x, inputs.t_ext[t], q, inputs.irradiance[t], params, dt);
    temp[t] = x;
  }
  BuildingSchedule s;
  const auto start = inputs.t_ext.start;
  const auto res = inputs.t_ext.resolution;
  s.q_hvac = TimeSeries(start, res, std::move(heat), "kW");
  s.q_cool = TimeSeries(start, res, std::move(cool), "kW");
  s.t_int = TimeSeries(start, res, std::move(temp), "degC");
  evaluate(s, hvac, comfort, inputs);
  return s;
}

HvacPolicy thermostat_policy(const HvacSpec& hvac, const ComfortSpec& comfort, const ThermostatSpec& spec) {
  auto on = std::make_shared<bool>(false);
  return [hvac, comfort, spec, on](std::size_t t, double t_int) {
    // Target of the first occupied step within the preheat lead time.
    const std::size_t last = std::min(t + spec.preheat_steps, comfort.occupied.size() - 1);
    std::size_t active = comfort.occupied.size();
    for (std::size_t k = t; k <= last; ++k) {
      if (comfort.occupied[k]) {
        active = k;
        break;
      }
    }
    if (active < comfort.occupied.size()) {
      const double target = comfort.target[active];
      if (t_int < target - spec.deadband) *on = true;
      if (t_int > target + spec.deadband) *on = false;
    } else {
      *on = t_int < spec.setback;
    }
    return *on ? hvac.heat_limit(t) : 0.0;
  };
}

namespace {

struct Transition {
  double t0;  // T[k]
  double y;   // T[k+1] - T[k]
  double x1;  // T_e[k] - T[k]
  double x2;  // Q[k]
  double x3;  // I_s[k]
};

// Sum of squared one-step residuals at (R, C) with p >= 0 solved in closed form.
struct FitObjective {
  const std::vector<Transition>& data;
  double dt;
  bool use_solar;

  double solar_for(double R, double C) const {
    if (!use_solar) return 0.0;
    const double k = dt / C;
    double num = 0.0, den = 0.0;
    for (const auto& d : data) {
      const double r = d.y - k * (d.x1 / R + d.x2);
      num += r * d.x3;
      den += d.x3 * d.x3;
    }
    return std::max(0.0, num / (k * den));
  }

  double operator()(double R, double C) const {
    const double k = dt / C;
    const double p = solar_for(R, C);
    double sse = 0.0;
    for (const auto& d : data) {
      const double r = d.y - k * (d.x1 / R + d.x2 + p * d.x3);
      sse += r * r;
    }
    return sse;
  }
};

template <class F>
double golden_section(F f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

double variance(const std::vector<double>& v) {
  double mean = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (ts::is_missing(x)) continue;
    mean += x;
    ++n;
  }
  if (n < 2) return 0.0;
  mean /= static_cast<double>(n);
  double s = 0.0;
  for (double x : v) {
    if (!ts::is_missing(x)) s += (x - mean) * (x - mean);
  }
  return s / static_cast<double>(n - 1);
}

}  // namespace

FitResult fit_parameters(const FitData& data) {
  const auto& T = data.t_int;
  ts::require_aligned(T, data.t_ext, "fit_parameters T_e");
  ts::require_aligned(T, data.irradiance, "fit_parameters I_s");
  ts::require_aligned(T, data.q_hvac, "fit_parameters Q_HVAC");
  if (T.size() < 48) {
    throw ValidationError("fit_parameters: need at least 48 steps, got " + std::to_string(T.size()));
  }
  if (variance(T.values) == 0.0) {
    throw UnidentifiableError("fit_parameters: indoor temperature is constant, RC parameters are not identifiable");
  }

  const double dt = T.step_hours();
  std::vector<Transition> tr;
  for (std::size_t k = 0; k + 1 < T.size(); ++k) {
    const Transition d{T[k], T[k + 1] - T[k], data.t_ext[k] - T[k], data.q_hvac[k], data.irradiance[k]};
    if (std::isfinite(d.y) && std::isfinite(d.x1) && std::isfinite(d.x2) && std::isfinite(d.x3)) tr.push_back(d);
  }
  if (tr.size() < 3) throw ValidationError("fit_parameters: too few complete transitions");

  bool use_solar = false;
  for (const auto& d : tr) use_solar = use_solar || d.x3 != 0.0;

  // Linear seed: y = th1*x1 + th2*x2 + th3*x3 with th1 = dt/(RC), th2 = dt/C, th3 = dt*p/C.
  const Eigen::Index cols = use_solar ? 3 : 2;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(tr.size()), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(tr.size()));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = tr[i].x1;
    X(r, 1) = tr[i].x2;
    if (use_solar) X(r, 2) = tr[i].x3;
    y(r) = tr[i].y;
  }
  Eigen::VectorXd scale = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (scale(j) == 0.0) {
      throw UnidentifiableError(j == 0 ? "fit_parameters: indoor and outdoor temperatures never differ"
                                       : "fit_parameters: HVAC input is always zero, C is not identifiable");
    }
  }
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) throw UnidentifiableError("fit_parameters: inputs are collinear, parameters not identifiable");
  const Eigen::VectorXd theta = qr.solve(y).cwiseQuotient(scale);
  if (!(theta(0) > 0.0) || !(theta(1) > 0.0)) {
    throw UnidentifiableError("fit_parameters: data imply a non-physical model (R or C not positive)");
  }

  const FitObjective sse{tr, dt, use_solar};
  double R = theta(1) / theta(0);
  double C = dt / theta(1);
  for (int round = 0; round < 30; ++round) {
    const double r0 = R, c0 = C;
    const double lr = golden_section([&](double v) { return sse(std::exp(v), C); }, std::log(R) - 0.7,
                                     std::log(R) + 0.7, 1e-10);
    R = std::exp(lr);
    const double lc = golden_section([&](double v) { return sse(R, std::exp(v)); }, std::log(C) - 0.7,
                                     std::log(C) + 0.7, 1e-10);
    C = std::exp(lc);
    if (std::abs(R - r0) <= 1e-9 * R && std::abs(C - c0) <= 1e-9 * C) break;
  }

  FitResult out;
  out.params = RcModelParams{R, C, sse.solar_for(R, C), 1};
  std::vector<double> actual, predicted;
  for (const auto& d : tr) {
    actual.push_back(d.t0 + d.y);
    predicted.push_back(rc_step(d.t0, d.t0 + d.x1, d.x2, d.x3, out.params, dt));
  }
  out.report = ts::score(actual, predicted);
  return out;
}

}  // namespace energyopt::building
