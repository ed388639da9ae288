#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "energyopt/building/kalman.hpp"
#include "energyopt/building/model.hpp"
#include "energyopt/milp/solver.hpp"

namespace energyopt::building {

/// Builds the horizon LP. Variables, in order: Q_HVAC(t), Q_cool(t) when
/// cooling is configured, T_i(t) (end of step t), then one deviation d(t)
/// per occupied step with d(t) >= |T_i(t) - T_target(t)|.
milp::LpProblem build_horizon_lp(const RcModelParams& params, const HvacSpec& hvac, const ComfortSpec& comfort,
                                 const ObjectiveWeights& weights, const ScenarioInputs& inputs, double t_int0);

/// Optimal schedule over the whole of `inputs`. Throws InfeasibleError or
/// SolverLimitError when the LP solver returns no usable point.
BuildingSchedule optimise_horizon(const RcModelParams& params, const HvacSpec& hvac, const ComfortSpec& comfort,
                                  const ObjectiveWeights& weights, const ScenarioInputs& inputs, double t_int0,
                                  const milp::SolveOptions& opts = {});

enum class Feedback {
  kalman,  // controller state corrected by noisy measurements
  none,    // controller state propagated by its own model only
};

struct RollingOptions {
  std::size_t horizon = 48;
  std::size_t total_steps = 48;
  Feedback feedback = Feedback::kalman;
  double measurement_sd = 0.0;  // degC, added to plant readings
  double process_sd = 0.0;      // degC per step, added to the plant state
  std::uint64_t seed = 0;
  // Kalman variances; zero picks small defaults consistent with the noise levels.
  double kalman_process_var = 0.0;
  double kalman_measurement_var = 0.0;
};

/// Receding-horizon loop: optimise over the next `horizon` steps from the
/// estimated state, apply the first action to the plant, repeat. Near the
/// end of the inputs the horizon shrinks to what remains.
BuildingSchedule rolling_mpc(const RcModelParams& plant, const RcModelParams& controller, const HvacSpec& hvac,
                             const ComfortSpec& comfort, const ObjectiveWeights& weights, const ScenarioInputs& inputs,
                             double t_int0, const RollingOptions& opts, const milp::SolveOptions& solver = {});

struct ParetoPoint {
  ObjectiveWeights weights;
  double cost = 0.0;
  double carbon = 0.0;
  double comfort = 0.0;
};

struct ParetoResult {
  std::vector<ParetoPoint> points;
  std::vector<std::size_t> front;  // indices into points
};

/// Indices of points not dominated by any other (lower cost and carbon,
/// higher comfort). Identical points are reported once, at the first index.
std::vector<std::size_t> non_dominated(const std::vector<ParetoPoint>& points);

/// Weight triples swept by default: cost weight 1, two carbon weights and a
/// logarithmic comfort ladder ending in a very large comfort weight.
std::vector<ObjectiveWeights> default_weight_grid();

ParetoResult pareto_sweep(const std::vector<ObjectiveWeights>& grid, const RcModelParams& params,
                          const HvacSpec& hvac, const ComfortSpec& comfort, const ScenarioInputs& inputs,
                          double t_int0, const milp::SolveOptions& opts = {});

nlohmann::json to_json(const ObjectiveWeights& w);
nlohmann::json to_json(const ParetoPoint& p);

}  // namespace energyopt::building
