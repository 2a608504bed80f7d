#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gazescale/config.hpp"
#include "gazescale/interaction.hpp"
#include "gazescale/trace.hpp"

namespace gazescale {

struct TrialResult {
  bool mode_in_error_translation = false;
  bool mode_in_error_scaling = false;
  bool overall_mode_switch_error = false;
  bool scaling_error = false;
  // Absent when the trial did not complete.
  std::optional<double> mode_in_time_translation_ms;
  std::optional<double> mode_in_time_scaling_ms;
  std::optional<double> mode_out_time_scaling_ms;
  std::optional<double> scale_difference;
  bool completed = false;
};

enum class TrialPhase { Translation, Scaling, Done };

/// Drives an Interaction through the two-phase trial protocol.
///
/// Translation ends when the object center comes within the snap radius of
/// the target; the object is then snapped and pinned. Scaling starts on the
/// following frame and ends at the first mode-out from scaling. Anything after
/// that is ignored (single attempt, no clutching).
class TrialRunner {
 public:
  TrialRunner(Technique technique, const TrialSpec& spec, const EngineConfig& cfg,
              const Vec3& head_origin = {});

  const StepResult& step(const Frame& frame);

  TrialPhase phase() const { return phase_; }
  bool snapped() const { return snap_t_.has_value(); }
  const Interaction& interaction() const { return interaction_; }
  const TrialSpec& spec() const { return spec_; }
  Vec3 target_center() const { return target_; }
  const StepResult& last_step() const { return last_; }

  TrialResult result() const;

 private:
  void on_event(const ModeEvent& e);

  Technique technique_;
  TrialSpec spec_;
  Vec3 target_;
  Interaction interaction_;
  StepResult last_;

  TrialPhase phase_ = TrialPhase::Translation;
  std::optional<double> start_t_;
  std::optional<double> snap_t_;
  bool scaling_start_pending_ = false;
  std::optional<double> scaling_start_t_;
  std::optional<double> last_mode_out_t_;

  bool error_translation_ = false;
  bool error_scaling_ = false;
  std::optional<double> t_in_translation_;
  std::optional<double> ref_in_translation_;
  std::optional<double> t_in_scaling_;
  std::optional<double> ref_in_scaling_;
  std::optional<double> t_reached_;
  std::optional<double> t_out_;
  std::optional<double> final_scale_;
};

/// Replays a trace through the trial protocol.
TrialResult evaluate_trial(const Trace& trace, Technique technique, const TrialSpec& spec,
                           const EngineConfig& cfg);

struct TrialLabels {
  Technique technique = Technique::PTZArea;
  double target_scale = 1.0;
  Direction direction = Direction::Up;
};

struct LabeledResult {
  TrialLabels labels;
  TrialResult result;
};

struct GroupStats {
  TrialLabels labels;
  bool technique_only = false;  // aggregated over all scales and directions
  int trials = 0;
  int completed = 0;
  double mode_in_error_translation_pct = 0.0;
  double mode_in_error_scaling_pct = 0.0;
  double overall_mode_switch_error_pct = 0.0;
  double scaling_error_pct = 0.0;
  std::optional<double> mode_in_time_translation_ms;
  std::optional<double> mode_in_time_scaling_ms;
  std::optional<double> mode_out_time_scaling_ms;
  std::optional<double> scale_difference;
};

struct AggregateReport {
  std::vector<GroupStats> groups;      // per technique, scale and direction
  std::vector<GroupStats> techniques;  // per technique
  std::vector<TrialLabels> infeasible;
};

/// Means per group, error rates as percentages. Throws EmptyInput.
AggregateReport aggregate(const std::vector<LabeledResult>& results,
                          const std::vector<TrialLabels>& infeasible = {});

nlohmann::json trial_result_to_json(const TrialResult& r);
nlohmann::json labels_to_json(const TrialLabels& l);

/// Header record plus one record per group, line-delimited.
std::string report_to_jsonl(const AggregateReport& report, const nlohmann::json& header_extra = {});
std::string report_to_table(const AggregateReport& report);

}  // namespace gazescale
