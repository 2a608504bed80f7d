#pragma once

#include <utility>

namespace gazescale {

struct AlignmentConfig {
  double overlap_view_threshold = 0.25;
  double overlap_object_threshold = 0.15;
  // Overlap mode-out thresholds are the mode-in thresholds times this factor.
  double overlap_exit_factor = 0.9;
  double dispersion_mode_in = 15.0;   // degrees
  double dispersion_mode_out = 17.0;  // degrees

  bool valid() const;
};

struct AlignmentState {
  bool aligned = false;
};

/// Stateless mode-in test for the overlap strategy: gazed and either ratio at
/// or above its threshold.
bool eval_overlap(double view_covered, double object_covered, bool gazed,
                  const AlignmentConfig& cfg);

/// Overlap test with exit hysteresis. Once aligned, alignment holds until gaze
/// is lost or both ratios fall below the scaled-down exit thresholds.
std::pair<bool, AlignmentState> eval_overlap_hysteretic(double view_covered, double object_covered,
                                                        bool gazed, AlignmentState state,
                                                        const AlignmentConfig& cfg);

/// Angular-dispersion test: enter strictly below the mode-in angle, stay
/// aligned up to and including the mode-out angle.
std::pair<bool, AlignmentState> eval_dispersion(double dispersion_deg, AlignmentState state,
                                                const AlignmentConfig& cfg);

}  // namespace gazescale
