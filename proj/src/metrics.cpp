#include "gazescale/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "gazescale/errors.hpp"

namespace gazescale {

using nlohmann::json;

namespace {

SceneObject initial_object(const TrialSpec& spec, const Vec3& head_origin) {
  SceneObject obj;
  obj.center = spec.object_start(head_origin);
  obj.scale = 1.0;
  obj.base_diameter = spec.base_diameter();
  return obj;
}

}  // namespace

TrialRunner::TrialRunner(Technique technique, const TrialSpec& spec, const EngineConfig& cfg,
                         const Vec3& head_origin)
    : technique_(technique),
      spec_(spec),
      target_(spec.target_center(head_origin)),
      interaction_(technique, cfg, initial_object(spec, head_origin)) {
  if (!spec.valid()) throw Error("invalid trial spec");
}

const StepResult& TrialRunner::step(const Frame& frame) {
  if (!start_t_) start_t_ = frame.t;
  if (scaling_start_pending_) {
    scaling_start_t_ = frame.t;
    scaling_start_pending_ = false;
  }
  last_ = interaction_.step(frame);
  if (phase_ != TrialPhase::Done) {
    for (const ModeEvent& e : last_.events) {
      on_event(e);
      if (phase_ == TrialPhase::Done) break;
    }
  }

  if (phase_ == TrialPhase::Scaling && t_in_scaling_ && !t_reached_ &&
      interaction_.mode() == Mode::Scaling) {
    const double diff = std::abs(interaction_.object().scale - spec_.target_scale) *
                        interaction_.object().base_diameter;
    if (diff < spec_.scale_tolerance) t_reached_ = frame.t;
  }

  if (phase_ == TrialPhase::Translation &&
      distance(interaction_.object().center, target_) <= spec_.snap_radius) {
    interaction_.snap_object(target_);
    snap_t_ = frame.t;
    phase_ = TrialPhase::Scaling;
    scaling_start_pending_ = true;
  }
  return last_;
}

void TrialRunner::on_event(const ModeEvent& e) {
  switch (phase_) {
    case TrialPhase::Translation:
      if (e.kind == EventKind::ModeOut) {
        last_mode_out_t_ = e.t;
      } else if (e.kind == EventKind::ModeInScaling) {
        error_translation_ = true;
      } else if (e.kind == EventKind::ModeInTranslation && !t_in_translation_) {
        t_in_translation_ = e.t;
        ref_in_translation_ = std::max(*start_t_, last_mode_out_t_.value_or(*start_t_));
      }
      break;
    case TrialPhase::Scaling: {
      const double phase_start = scaling_start_t_.value_or(e.t);
      if (e.kind == EventKind::ModeOut) {
        if (e.from == Mode::Scaling && t_in_scaling_) {
          t_out_ = e.t;
          final_scale_ = e.scale;
          phase_ = TrialPhase::Done;
        }
        last_mode_out_t_ = e.t;
      } else if (e.kind == EventKind::ModeInTranslation) {
        error_scaling_ = true;
      } else if (e.kind == EventKind::ModeInScaling && !t_in_scaling_) {
        t_in_scaling_ = e.t;
        ref_in_scaling_ = std::max(phase_start, last_mode_out_t_.value_or(phase_start));
      }
      break;
    }
    case TrialPhase::Done:
      break;
  }
}

TrialResult TrialRunner::result() const {
  TrialResult r;
  r.mode_in_error_translation = error_translation_;
  r.mode_in_error_scaling = error_scaling_;
  r.overall_mode_switch_error = error_translation_ || error_scaling_;
  r.scaling_error = !t_reached_.has_value();
  r.completed = phase_ == TrialPhase::Done;
  if (!r.completed) return r;

  r.mode_in_time_translation_ms = (*t_in_translation_ - *ref_in_translation_) * 1000.0;
  r.mode_in_time_scaling_ms = (*t_in_scaling_ - *ref_in_scaling_) * 1000.0;
  r.mode_out_time_scaling_ms = (*t_out_ - t_reached_.value_or(*t_in_scaling_)) * 1000.0;
  r.scale_difference = std::abs(*final_scale_ - spec_.target_scale);
  return r;
}

TrialResult evaluate_trial(const Trace& trace, Technique technique, const TrialSpec& spec,
                           const EngineConfig& cfg) {
  if (trace.frames.empty()) throw EmptyInput();
  TrialRunner runner(technique, spec, cfg, trace.frames.front().head.head_origin);
  for (const Frame& f : trace.frames) {
    runner.step(f);
    if (runner.phase() == TrialPhase::Done) break;
  }
  return runner.result();
}

namespace {

struct Accumulator {
  int trials = 0;
  int completed = 0;
  double err_t = 0, err_s = 0, err_o = 0, err_scale = 0;
  double sum_tt = 0, sum_ts = 0, sum_to = 0, sum_sd = 0;
  int n_tt = 0, n_ts = 0, n_to = 0, n_sd = 0;

  void add(const TrialResult& r) {
    ++trials;
    completed += r.completed ? 1 : 0;
    err_t += r.mode_in_error_translation ? 1 : 0;
    err_s += r.mode_in_error_scaling ? 1 : 0;
    err_o += r.overall_mode_switch_error ? 1 : 0;
    err_scale += r.scaling_error ? 1 : 0;
    if (r.mode_in_time_translation_ms) sum_tt += *r.mode_in_time_translation_ms, ++n_tt;
    if (r.mode_in_time_scaling_ms) sum_ts += *r.mode_in_time_scaling_ms, ++n_ts;
    if (r.mode_out_time_scaling_ms) sum_to += *r.mode_out_time_scaling_ms, ++n_to;
    if (r.scale_difference) sum_sd += *r.scale_difference, ++n_sd;
  }

  GroupStats finish(const TrialLabels& labels, bool technique_only) const {
    GroupStats g;
    g.labels = labels;
    g.technique_only = technique_only;
    g.trials = trials;
    g.completed = completed;
    const double n = trials;
    g.mode_in_error_translation_pct = 100.0 * err_t / n;
    g.mode_in_error_scaling_pct = 100.0 * err_s / n;
    g.overall_mode_switch_error_pct = 100.0 * err_o / n;
    g.scaling_error_pct = 100.0 * err_scale / n;
    if (n_tt) g.mode_in_time_translation_ms = sum_tt / n_tt;
    if (n_ts) g.mode_in_time_scaling_ms = sum_ts / n_ts;
    if (n_to) g.mode_out_time_scaling_ms = sum_to / n_to;
    if (n_sd) g.scale_difference = sum_sd / n_sd;
    return g;
  }
};

using GroupKey = std::tuple<int, double, int>;

GroupKey key_of(const TrialLabels& l) {
  return {static_cast<int>(l.technique), l.target_scale, static_cast<int>(l.direction)};
}

}  // namespace

AggregateReport aggregate(const std::vector<LabeledResult>& results,
                          const std::vector<TrialLabels>& infeasible) {
  if (results.empty() && infeasible.empty()) throw EmptyInput();
  // Sums are order-dependent in floating point; accumulate in a canonical order.
  std::vector<LabeledResult> sorted = results;
  std::stable_sort(sorted.begin(), sorted.end(), [](const LabeledResult& a, const LabeledResult& b) {
    const auto ka = key_of(a.labels);
    const auto kb = key_of(b.labels);
    if (ka != kb) return ka < kb;
    return json(trial_result_to_json(a.result)).dump() < json(trial_result_to_json(b.result)).dump();
  });

  std::map<GroupKey, std::pair<TrialLabels, Accumulator>> groups;
  std::map<int, std::pair<TrialLabels, Accumulator>> techniques;
  for (const auto& lr : sorted) {
    auto& g = groups[key_of(lr.labels)];
    g.first = lr.labels;
    g.second.add(lr.result);
    auto& t = techniques[static_cast<int>(lr.labels.technique)];
    t.first = lr.labels;
    t.second.add(lr.result);
  }

  AggregateReport report;
  for (const auto& [k, v] : groups) report.groups.push_back(v.second.finish(v.first, false));
  for (const auto& [k, v] : techniques) report.techniques.push_back(v.second.finish(v.first, true));
  report.infeasible = infeasible;
  std::sort(report.infeasible.begin(), report.infeasible.end(),
            [](const TrialLabels& a, const TrialLabels& b) { return key_of(a) < key_of(b); });
  return report;
}

json trial_result_to_json(const TrialResult& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"mode_in_error_translation", r.mode_in_error_translation ? 1 : 0},
          {"mode_in_error_scaling", r.mode_in_error_scaling ? 1 : 0},
          {"overall_mode_switch_error", r.overall_mode_switch_error ? 1 : 0},
          {"scaling_error", r.scaling_error ? 1 : 0},
          {"mode_in_time_translation_ms", opt(r.mode_in_time_translation_ms)},
          {"mode_in_time_scaling_ms", opt(r.mode_in_time_scaling_ms)},
          {"mode_out_time_scaling_ms", opt(r.mode_out_time_scaling_ms)},
          {"scale_difference", opt(r.scale_difference)},
          {"completed", r.completed}};
}

json labels_to_json(const TrialLabels& l) {
  return {{"technique", std::string(to_string(l.technique))},
          {"target_scale", l.target_scale},
          {"target_direction", std::string(to_string(l.direction))}};
}

namespace {

json group_json(const GroupStats& g) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  if (g.technique_only) {
    j["record"] = "technique";
    j["technique"] = std::string(to_string(g.labels.technique));
  } else {
    j = labels_to_json(g.labels);
    j["record"] = "group";
  }
  j["trials"] = g.trials;
  j["completed"] = g.completed;
  j["mode_in_error_translation_pct"] = g.mode_in_error_translation_pct;
  j["mode_in_error_scaling_pct"] = g.mode_in_error_scaling_pct;
  j["overall_mode_switch_error_pct"] = g.overall_mode_switch_error_pct;
  j["scaling_error_pct"] = g.scaling_error_pct;
  j["mode_in_time_translation_ms"] = opt(g.mode_in_time_translation_ms);
  j["mode_in_time_scaling_ms"] = opt(g.mode_in_time_scaling_ms);
  j["mode_out_time_scaling_ms"] = opt(g.mode_out_time_scaling_ms);
  j["scale_difference"] = opt(g.scale_difference);
  return j;
}

std::string fmt_opt(const std::optional<double>& v, const char* f) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, f, *v);
  return buf;
}

}  // namespace

std::string report_to_jsonl(const AggregateReport& report, const json& header_extra) {
  json header = {{"record", "header"},
                 {"schema_version", kTraceSchemaVersion},
                 {"scale_tolerance_unit", "meters of world diameter"},
                 {"groups", report.groups.size()},
                 {"infeasible", report.infeasible.size()}};
  if (header_extra.is_object()) {
    for (const auto& [k, v] : header_extra.items()) header[k] = v;
  }
  std::ostringstream out;
  out << header.dump() << '\n';
  for (const auto& g : report.techniques) out << group_json(g).dump() << '\n';
  for (const auto& g : report.groups) out << group_json(g).dump() << '\n';
  for (const auto& l : report.infeasible) {
    json j = labels_to_json(l);
    j["record"] = "infeasible";
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string report_to_table(const AggregateReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %6s %5s %6s %7s %7s %7s %7s %8s %8s %8s %8s\n",
                "technique", "scale", "dir", "trials", "err_tr%", "err_sc%", "err_all%", "scal_e%",
                "t_in_tr", "t_in_sc", "t_out", "s_diff");
  out << line;
  auto row = [&](const GroupStats& g) {
    const std::string scale = g.technique_only ? "all" : fmt_opt(g.labels.target_scale, "%.2f");
    const std::string dir = g.technique_only ? "all" : std::string(to_string(g.labels.direction));
    std::snprintf(line, sizeof line,
                  "%-16s %6s %5s %6d %7.1f %7.1f %8.1f %7.1f %8s %8s %8s %8s\n",
                  std::string(to_string(g.labels.technique)).c_str(), scale.c_str(), dir.c_str(),
                  g.trials, g.mode_in_error_translation_pct, g.mode_in_error_scaling_pct,
                  g.overall_mode_switch_error_pct, g.scaling_error_pct,
                  fmt_opt(g.mode_in_time_translation_ms, "%.0f").c_str(),
                  fmt_opt(g.mode_in_time_scaling_ms, "%.0f").c_str(),
                  fmt_opt(g.mode_out_time_scaling_ms, "%.0f").c_str(),
                  fmt_opt(g.scale_difference, "%.4f").c_str());
    out << line;
  };
  for (const auto& g : report.techniques) row(g);
  out << '\n';
  for (const auto& g : report.groups) row(g);
  if (!report.infeasible.empty()) {
    out << "\ninfeasible targets (outside the clamp range from the actor's initial input):\n";
    for (const auto& l : report.infeasible) {
      std::snprintf(line, sizeof line, "  %-16s x%.2f %s\n",
                    std::string(to_string(l.technique)).c_str(), l.target_scale,
                    std::string(to_string(l.direction)).c_str());
      out << line;
    }
  }
  out << "\nscale tolerance is in meters of world diameter\n";
  return out.str();
}

}  // namespace gazescale
