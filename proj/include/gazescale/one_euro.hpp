#pragma once

#include <array>

#include "gazescale/vec3.hpp"

namespace gazescale {

struct FilterParams {
  double min_cutoff = 1.0;  // Hz
  double beta = 90.0;
  double d_cutoff = 1.0;  // Hz

  bool valid() const { return min_cutoff > 0.0 && beta >= 0.0 && d_cutoff > 0.0; }
};

struct FilterState {
  double last_value = 0.0;
  double last_derivative = 0.0;
  double last_timestamp = 0.0;
  bool initialized = false;
};

// Smoothing factor of a first-order low-pass with the given cutoff over dt.
double smoothing_alpha(double cutoff_hz, double dt);

/// One 1-euro update. The first sample passes through and initializes the state.
/// Throws NonMonotonicTimestamp if t does not advance.
double filter_scalar(FilterState& state, double value, double t, const FilterParams& params);

using Vec3FilterState = std::array<FilterState, 3>;

Vec3 filter_vec3(Vec3FilterState& state, const Vec3& value, double t, const FilterParams& params);

/// Owning wrapper for a single filtered point.
class OneEuroFilter3 {
 public:
  explicit OneEuroFilter3(FilterParams params = {}) : params_(params) {}

  Vec3 operator()(const Vec3& value, double t) { return filter_vec3(state_, value, t, params_); }

  void reset() { state_ = {}; }
  void set_params(const FilterParams& p) { params_ = p; }
  const Vec3FilterState& state() const { return state_; }

 private:
  FilterParams params_;
  Vec3FilterState state_{};
};

}  // namespace gazescale
