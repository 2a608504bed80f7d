#include "gazescale/cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "gazescale/errors.hpp"
#include "gazescale/metrics.hpp"
#include "gazescale/playground.hpp"
#include "gazescale/random.hpp"
#include "gazescale/server.hpp"
#include "gazescale/synth.hpp"

namespace gazescale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TrialJob {
  TrialLabels labels;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string trace_file;  // relative to the output directory
};

struct TrialOutcome {
  std::optional<TrialResult> result;
  std::string infeasible_reason;
  std::string error;
};

std::string scale_tag(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
  if (!f) throw Error("write failed for " + path.string());
}

TrialOutcome run_trial(const TrialJob& job, const SimulateOptions& opts, const fs::path& out) {
  TrialOutcome o;
  TrialSpec spec;
  spec.target_direction = job.labels.direction;
  spec.target_scale = job.labels.target_scale;
  ActorParams actor;
  actor.positional_noise_sd = opts.noise_sd;
  actor.seed = job.seed;
  try {
    const Trace trace = synthesize_trial(spec, actor, job.labels.technique, opts.config);
    save_trace(trace, (out / job.trace_file).string());
    o.result = evaluate_trial(trace, job.labels.technique, spec, opts.config);
  } catch (const InfeasibleTarget& e) {
    o.infeasible_reason = e.what();
  } catch (const Error& e) {
    o.error = e.what();
  }
  return o;
}

}  // namespace

int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.reps < 1 || opts.jobs < 1 || opts.noise_sd < 0.0 || opts.out_dir.empty()) {
    err << "error: reps and jobs must be positive, noise-sd non-negative, out set\n";
    return kExitUsage;
  }
  const fs::path root(opts.out_dir);
  std::error_code ec;
  fs::create_directories(root / "traces", ec);
  if (ec) {
    err << "error: cannot create " << (root / "traces").string() << ": " << ec.message() << "\n";
    return kExitEvaluation;
  }

  std::vector<TrialJob> jobs;
  for (Technique t : opts.techniques) {
    for (double s : opts.scales) {
      for (Direction d : opts.directions) {
        for (int r = 0; r < opts.reps; ++r) {
          TrialJob j;
          j.labels = {t, s, d};
          j.rep = r;
          j.seed = derive_seed(opts.seed, jobs.size());
          j.trace_file = "traces/" + std::string(to_string(t)) + "_x" + scale_tag(s) + "_" +
                         std::string(to_string(d)) + "_r" + std::to_string(r) + ".jsonl";
          jobs.push_back(std::move(j));
        }
      }
    }
  }

  std::vector<TrialOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      outcomes[i] = run_trial(jobs[i], opts, root);
    }
  };
  const int n_threads = std::min<int>(opts.jobs, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::string results;
  std::vector<LabeledResult> evaluated;
  std::vector<TrialLabels> infeasible;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const TrialJob& j = jobs[i];
    const TrialOutcome& o = outcomes[i];
    if (!o.error.empty()) {
      err << "error: " << j.trace_file << ": " << o.error << "\n";
      return kExitEvaluation;
    }
    json row = labels_to_json(j.labels);
    row["trial"] = i;
    row["rep"] = j.rep;
    row["seed"] = j.seed;
    row["infeasible"] = o.result ? false : true;
    if (o.result) {
      row["trace"] = j.trace_file;
      row["result"] = trial_result_to_json(*o.result);
      evaluated.push_back({j.labels, *o.result});
    } else {
      row["trace"] = nullptr;
      row["reason"] = o.infeasible_reason;
      infeasible.push_back(j.labels);
    }
    results += row.dump() + "\n";
  }

  const json header = {{"seed", opts.seed},
                       {"reps", opts.reps},
                       {"noise_sd", opts.noise_sd},
                       {"trials", jobs.size()},
                       {"evaluated", evaluated.size()},
                       {"config", config_to_json(opts.config)}};
  try {
    write_file(root / "results.jsonl", results);
    const AggregateReport report = aggregate(evaluated, infeasible);
    const std::string table = report_to_table(report);
    write_file(root / "report.jsonl", report_to_jsonl(report, header));
    write_file(root / "report.txt", table);
    out << table;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  if (evaluated.empty()) {
    err << "error: every requested target is infeasible\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_replay(const std::string& trace_path, std::optional<Technique> technique,
               const EngineConfig& cfg, std::ostream& out, std::ostream& err) {
  Trace trace;
  try {
    trace = load_trace(trace_path);
  } catch (const ParseError& e) {
    err << "parse error: " << trace_path << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const SchemaVersionMismatch& e) {
    err << "parse error: " << trace_path << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!technique) technique = trace.meta.technique;
  if (!technique) {
    err << "error: trace names no technique; pass --technique\n";
    return kExitUsage;
  }

  try {
    const TrialSpec& spec = trace.meta.trial_spec;
    TrialRunner runner(*technique, spec, cfg, trace.frames.front().head.head_origin);
    Outline outline = Outline::None;
    bool snapped = false;
    char line[256];
    out << "technique " << to_string(*technique) << ", target x" << spec.target_scale << " "
        << to_string(spec.target_direction) << ", " << trace.frames.size() << " frames\n";
    for (const Frame& f : trace.frames) {
      const StepResult& r = runner.step(f);
      for (const ModeEvent& e : r.events) {
        switch (e.kind) {
          case EventKind::ModeInTranslation:
            std::snprintf(line, sizeof line, "%9.4f  mode-in   translation (%s hand)\n", e.t,
                          e.hand ? std::string(to_string(*e.hand)).c_str() : "-");
            break;
          case EventKind::ModeInScaling:
            std::snprintf(line, sizeof line, "%9.4f  mode-in   scaling (I0 = %.6g %s)\n", e.t,
                          e.input ? e.input->value : 0.0,
                          e.input ? std::string(to_string(e.input->kind)).c_str() : "");
            break;
          case EventKind::ModeOut:
            std::snprintf(line, sizeof line, "%9.4f  mode-out  from %s%s, scale %.6f\n", e.t,
                          std::string(to_string(e.from)).c_str(), e.forced ? " (forced)" : "",
                          e.scale);
            break;
          case EventKind::ScaleChanged:
            std::snprintf(line, sizeof line, "%9.4f  scale     %.6f\n", e.t, e.scale);
            break;
          case EventKind::TrackingLoss:
            std::snprintf(line, sizeof line, "%9.4f  tracking  lost\n", e.t);
            break;
          case EventKind::ObjectMoved:
            continue;
        }
        out << line;
      }
      if (r.outline != outline) {
        std::snprintf(line, sizeof line, "%9.4f  outline   %s -> %s\n", f.t,
                      std::string(to_string(outline)).c_str(),
                      std::string(to_string(r.outline)).c_str());
        out << line;
        outline = r.outline;
      }
      if (!snapped && runner.snapped()) {
        std::snprintf(line, sizeof line, "%9.4f  snapped   to target\n", f.t);
        out << line;
        snapped = true;
      }
    }
    out << "result " << trial_result_to_json(runner.result()).dump() << "\n";
  } catch (const Error& e) {
    err << "evaluation error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  return kExitOk;
}

int run_serve(int port, const EngineConfig& cfg, std::ostream& out, std::ostream& err) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  // Block before any thread starts so only sigwait sees them.
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  PlaygroundServer server(cfg);
  int bound = 0;
  try {
    bound = server.start(port, "127.0.0.1");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  out << "serving playground protocol v" << kProtocolVersion << " on 127.0.0.1:" << bound
      << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  out << "stopped\n";
  return kExitOk;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaze-hand alignment engine: simulate trials, replay traces, serve the playground"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "engine config (JSON object, missing keys keep defaults)")
        ->check(CLI::ExistingFile);
  };

  SimulateOptions sim;
  std::vector<std::string> techniques, directions;
  std::vector<double> scales;
  auto* simulate = app.add_subcommand("simulate", "generate, replay and score synthetic trials");
  simulate->add_option("--technique", techniques,
                       "ptz-area, ptz-angle, ptz-span, push-pull-depth, bimanual (default all)");
  simulate->add_option("--scale", scales, "target scales (default 0.4 0.67 1.5 2.5)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--direction", directions, "up, down, left, right (default all)");
  simulate->add_option("--reps", sim.reps, "repetitions per condition")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "base seed");
  simulate->add_option("--noise-sd", sim.noise_sd, "hand positional noise, m")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--jobs", sim.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_config(simulate);

  std::string trace_path;
  std::string replay_technique;
  auto* replay = app.add_subcommand("replay", "print the event timeline and result of a trace");
  replay->add_option("trace", trace_path, "trace file")->required()->check(CLI::ExistingFile);
  replay->add_option("--technique", replay_technique, "override the technique in the header");
  add_config(replay);

  int port = 8765;
  auto* serve = app.add_subcommand("serve", "serve the playground protocol over TCP");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  add_config(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  EngineConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const ParseError& e) {
      err << "parse error: " << config_path << ": " << e.what() << "\n";
      return kExitParse;
    } catch (const ConfigError& e) {
      err << "parse error: " << config_path << ": " << e.what() << "\n";
      return kExitParse;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  if (*simulate) {
    if (!techniques.empty()) {
      sim.techniques.clear();
      for (const auto& s : techniques) {
        const auto t = technique_from_string(s);
        if (!t) {
          err << "usage error: unknown technique " << s << "\n";
          return kExitUsage;
        }
        sim.techniques.push_back(*t);
      }
    }
    if (!directions.empty()) {
      sim.directions.clear();
      for (const auto& s : directions) {
        const auto d = direction_from_string(s);
        if (!d) {
          err << "usage error: unknown direction " << s << "\n";
          return kExitUsage;
        }
        sim.directions.push_back(*d);
      }
    }
    if (!scales.empty()) sim.scales = scales;
    sim.config = cfg;
    return run_simulate(sim, out, err);
  }
  if (*replay) {
    std::optional<Technique> t;
    if (!replay_technique.empty()) {
      t = technique_from_string(replay_technique);
      if (!t) {
        err << "usage error: unknown technique " << replay_technique << "\n";
        return kExitUsage;
      }
    }
    return run_replay(trace_path, t, cfg, out, err);
  }
  return run_serve(port, cfg, out, err);
}

}  // namespace gazescale
