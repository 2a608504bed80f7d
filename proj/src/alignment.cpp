#include "gazescale/alignment.hpp"

namespace gazescale {

bool AlignmentConfig::valid() const {
  return overlap_view_threshold > 0.0 && overlap_view_threshold <= 1.0 &&
         overlap_object_threshold > 0.0 && overlap_object_threshold <= 1.0 &&
         overlap_exit_factor > 0.0 && overlap_exit_factor <= 1.0 && dispersion_mode_in > 0.0 &&
         dispersion_mode_out < 180.0 && dispersion_mode_out > dispersion_mode_in;
}

bool eval_overlap(double view_covered, double object_covered, bool gazed,
                  const AlignmentConfig& cfg) {
  return gazed && (view_covered >= cfg.overlap_view_threshold ||
                   object_covered >= cfg.overlap_object_threshold);
}

std::pair<bool, AlignmentState> eval_overlap_hysteretic(double view_covered, double object_covered,
                                                        bool gazed, AlignmentState state,
                                                        const AlignmentConfig& cfg) {
  bool aligned = false;
  if (!state.aligned) {
    aligned = eval_overlap(view_covered, object_covered, gazed, cfg);
  } else {
    const double view_exit = cfg.overlap_view_threshold * cfg.overlap_exit_factor;
    const double object_exit = cfg.overlap_object_threshold * cfg.overlap_exit_factor;
    aligned = gazed && !(view_covered < view_exit && object_covered < object_exit);
  }
  return {aligned, AlignmentState{aligned}};
}

std::pair<bool, AlignmentState> eval_dispersion(double dispersion_deg, AlignmentState state,
                                                const AlignmentConfig& cfg) {
  const bool aligned = state.aligned ? dispersion_deg <= cfg.dispersion_mode_out
                                     : dispersion_deg < cfg.dispersion_mode_in;
  return {aligned, AlignmentState{aligned}};
}

}  // namespace gazescale
