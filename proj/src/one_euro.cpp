#include "gazescale/one_euro.hpp"

#include <cmath>

#include "gazescale/errors.hpp"

namespace gazescale {

double smoothing_alpha(double cutoff_hz, double dt) {
  const double tau = 1.0 / (2.0 * kPi * cutoff_hz);
  return 1.0 / (1.0 + tau / dt);
}

double filter_scalar(FilterState& state, double value, double t, const FilterParams& params) {
  if (!state.initialized) {
    state.last_value = value;
    state.last_derivative = 0.0;
    state.last_timestamp = t;
    state.initialized = true;
    return value;
  }
  if (!(t > state.last_timestamp)) {
    throw NonMonotonicTimestamp(state.last_timestamp, t);
  }
  const double dt = t - state.last_timestamp;

  const double raw_derivative = (value - state.last_value) / dt;
  const double a_d = smoothing_alpha(params.d_cutoff, dt);
  const double derivative = state.last_derivative + a_d * (raw_derivative - state.last_derivative);

  const double cutoff = params.min_cutoff + params.beta * std::abs(derivative);
  const double a = smoothing_alpha(cutoff, dt);
  // Increment form, so a constant input is an exact fixed point.
  const double filtered = state.last_value + a * (value - state.last_value);

  state.last_value = filtered;
  state.last_derivative = derivative;
  state.last_timestamp = t;
  return filtered;
}

Vec3 filter_vec3(Vec3FilterState& state, const Vec3& value, double t, const FilterParams& params) {
  return {filter_scalar(state[0], value.x, t, params), filter_scalar(state[1], value.y, t, params),
          filter_scalar(state[2], value.z, t, params)};
}

}  // namespace gazescale
