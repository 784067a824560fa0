#include "commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "log.hpp"
#include "parallel.hpp"
#include "posefuse/aggregate.hpp"
#include "posefuse/error.hpp"
#include "posefuse/ingest.hpp"
#include "posefuse/json_io.hpp"
#include "posefuse/metrics.hpp"
#include "posefuse/pipeline.hpp"
#include "posefuse/pseudo_gt.hpp"
#include "posefuse/rng.hpp"
#include "posefuse/synth.hpp"
#include "toml.hpp"

namespace posefuse::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void write_manifest(const std::string& output_dir, const char* command, json config,
                    json summary) {
  json manifest;
  manifest["command"] = command;
  manifest["config_hash"] = hex64(fnv1a64(config.dump()));
  manifest["config"] = std::move(config);
  manifest["summary"] = std::move(summary);
  write_text_file((fs::path(output_dir) / "manifest.json").string(), manifest.dump());
}

void ensure_output_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + path + ": " + ec.message());
}

// Sequence files in a directory, sorted by video id (the file stem).
std::vector<fs::path> sequence_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::usage_error, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    if (entry.path().filename() == "manifest.json") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

EstimatorFormat format_from_tag(const std::string& tag) {
  const auto kind = format_kind_from_name(tag);
  if (!kind) throw Error(Errc::usage_error, "unknown format '" + tag + "'");
  return EstimatorFormat::standard(*kind);
}

}  // namespace

void cmd_aggregate(const AggregateOptions& opt) {
  if (opt.estimators.size() < 2)
    throw Error(Errc::usage_error, "aggregation needs at least two estimator inputs");
  if (opt.formats.size() != opt.estimators.size() && opt.formats.size() != 1)
    throw Error(Errc::usage_error, "pass one format per estimator or a single shared format");
  if (opt.persons != "all" && opt.persons != "primary")
    throw Error(Errc::usage_error, "--persons must be all or primary");
  if (opt.jobs < 1) throw Error(Errc::usage_error, "--jobs must be >= 1");
  if (!fs::is_directory(opt.input))
    throw Error(Errc::usage_error, "input directory does not exist: " + opt.input);

  AggregationConfig cfg;
  cfg.gamma = opt.gamma;
  cfg.epsilon = opt.epsilon;
  cfg.estimator_count = static_cast<int>(opt.estimators.size());
  cfg.validate();

  std::vector<EstimatorFormat> formats;
  for (size_t m = 0; m < opt.estimators.size(); ++m) {
    const std::string& tag = opt.formats.size() == 1 ? opt.formats[0] : opt.formats[m];
    formats.push_back(format_from_tag(tag));
  }

  // One subdirectory per video; every estimator file must be present.
  std::vector<std::string> videos;
  for (const auto& entry : fs::directory_iterator(opt.input)) {
    if (entry.is_directory()) videos.push_back(entry.path().filename().string());
  }
  std::sort(videos.begin(), videos.end());
  if (videos.empty()) throw Error(Errc::usage_error, "no video directories under " + opt.input);

  for (const std::string& video : videos) {
    for (const std::string& estimator : opt.estimators) {
      const fs::path file = fs::path(opt.input) / video / (estimator + ".json");
      if (!fs::is_regular_file(file))
        throw Error(Errc::usage_error, "missing estimator file: " + file.string());
    }
  }

  ensure_output_dir(opt.output);

  struct VideoStats {
    std::string video;
    int frames = 0;
    int persons = 0;
    long retained = 0;
    long discarded = 0;
    double mean_confidence = 0.0;
  };
  std::vector<VideoStats> stats(videos.size());

  parallel_for(static_cast<int>(videos.size()), opt.jobs, [&](int index) {
    const std::string& video = videos[index];
    std::vector<std::vector<FrameBundle>> per_estimator;
    std::optional<std::array<int, 2>> resolution = opt.resolution;
    bool resolution_from_file = false;

    for (size_t m = 0; m < opt.estimators.size(); ++m) {
      const fs::path file = fs::path(opt.input) / video / (opt.estimators[m] + ".json");
      const auto parsed =
          parse_estimator_file(read_text_file(file.string()), formats[m], static_cast<int>(m));
      if (parsed.resolution) {
        if (resolution_from_file && *resolution != *parsed.resolution)
          throw Error(Errc::resolution_mismatch,
                      video + ": estimator files disagree on resolution");
        resolution = parsed.resolution;
        resolution_from_file = true;
      }
      per_estimator.push_back(std::move(parsed.frames));
    }
    if (!resolution)
      throw Error(Errc::usage_error,
                  video + ": no resolution in any input file, pass --resolution WxH");

    const VideoMeta meta{video, (*resolution)[0], (*resolution)[1]};
    AssociationConfig assoc;
    assoc.tau_match = opt.tau;
    const PersonMode mode = opt.persons == "primary" ? PersonMode::primary : PersonMode::all;

    const VideoAggregation result = aggregate_video(per_estimator, meta, cfg, assoc, mode);
    write_text_file((fs::path(opt.output) / (video + ".json")).string(),
                    write_sequence_file(meta, result.sequences));

    VideoStats& vs = stats[index];
    vs.video = video;
    vs.frames = result.frame_count;
    vs.persons = static_cast<int>(result.sequences.size());
    double confidence_sum = 0.0;
    long frames_emitted = 0;
    for (const PoseSequence& seq : result.sequences) {
      for (const AggregatedPose& frame : seq.frames) {
        ++frames_emitted;
        confidence_sum += frame.confidence;
        frame.retained ? ++vs.retained : ++vs.discarded;
      }
    }
    vs.mean_confidence = frames_emitted > 0 ? confidence_sum / frames_emitted : 0.0;
    logging::info("aggregated video",
                  {{"video", video},
                   {"persons", vs.persons},
                   {"retained", vs.retained},
                   {"discarded", vs.discarded}});
  });

  json config;
  config["input"] = opt.input;
  config["output"] = opt.output;
  config["estimators"] = opt.estimators;
  config["formats"] = opt.formats;
  config["gamma"] = opt.gamma;
  config["epsilon"] = opt.epsilon;
  config["tau"] = opt.tau;
  config["persons"] = opt.persons;
  config["jobs"] = opt.jobs;
  if (opt.resolution) config["resolution"] = json::array({(*opt.resolution)[0], (*opt.resolution)[1]});

  json video_summaries = json::array();
  for (const VideoStats& vs : stats) {
    json v;
    v["video"] = vs.video;
    v["frames"] = vs.frames;
    v["persons"] = vs.persons;
    v["retained"] = vs.retained;
    v["discarded"] = vs.discarded;
    v["mean_confidence"] = vs.mean_confidence;
    video_summaries.push_back(std::move(v));
  }
  write_manifest(opt.output, "aggregate", std::move(config),
                 json{{"videos", std::move(video_summaries)}});
}

void cmd_pseudo_gt(const PseudoGtOptions& opt) {
  if (opt.anchors < 1) throw Error(Errc::usage_error, "--anchors must be >= 1");
  const auto files = sequence_files(opt.input);
  if (files.empty()) throw Error(Errc::usage_error, "no sequence files under " + opt.input);

  std::vector<PoseSequence> sequences;
  for (const fs::path& file : files) {
    SequenceFile doc = read_sequence_file(read_text_file(file.string()));
    for (PoseSequence& seq : doc.persons) sequences.push_back(std::move(seq));
  }

  // Codebook fits on the retained poses only.
  std::vector<Pose> training;
  long retained = 0;
  for (const PoseSequence& seq : sequences) {
    for (const AggregatedPose& frame : seq.frames) {
      if (!frame.retained) continue;
      ++retained;
      const auto normalized = normalize_pose_for_similarity(frame.joints);
      if (normalized) training.push_back(*normalized);
    }
  }

  const AnchorCodebook codebook = fit_anchor_codebook(training, opt.anchors, opt.seed);

  ensure_output_dir(opt.output);
  write_text_file((fs::path(opt.output) / "codebook.json").string(),
                  write_codebook_json(codebook));

  PseudoAnnotationConfig annotation_cfg;
  annotation_cfg.expand = opt.expand;
  annotation_cfg.gamma = opt.gamma;
  annotation_cfg.anchor_count = opt.anchors;
  annotation_cfg.seed = opt.seed;

  std::ostringstream annotations;
  export_training_targets(sequences, codebook, annotation_cfg, annotations);
  const std::string text = annotations.str();
  write_text_file((fs::path(opt.output) / "annotations.jsonl").string(), text);

  long records = -1;  // header line does not count
  for (char c : text) records += c == '\n';

  json config;
  config["input"] = opt.input;
  config["output"] = opt.output;
  config["expand"] = opt.expand;
  config["gamma"] = opt.gamma;
  config["anchors"] = opt.anchors;
  config["seed"] = opt.seed;
  write_manifest(opt.output, "pseudo-gt", std::move(config),
                 json{{"sequences", sequences.size()},
                      {"retained_poses", retained},
                      {"annotations", records}});
  logging::info("pseudo ground truth written",
                {{"annotations", records}, {"anchors", opt.anchors}});
}

void cmd_evaluate(const EvaluateOptions& opt) {
  if (opt.pred.empty()) throw Error(Errc::usage_error, "pass at least one --pred name=dir");
  if (opt.jobs < 1) throw Error(Errc::usage_error, "--jobs must be >= 1");

  EvalConfig cfg;
  cfg.alpha = opt.alpha;
  cfg.gamma = opt.gamma;
  cfg.bin_edges = opt.bins.empty() ? EvalConfig::default_bin_edges() : opt.bins;
  cfg.validate();

  struct Method {
    std::string name;
    std::string dir;
  };
  std::vector<Method> methods;
  for (const std::string& spec : opt.pred) {
    const size_t eq = spec.find('=');
    Method method;
    method.dir = eq == std::string::npos ? spec : spec.substr(eq + 1);
    method.name = eq == std::string::npos ? fs::path(spec).filename().string() : spec.substr(0, eq);
    if (method.name.empty()) throw Error(Errc::usage_error, "empty method name in " + spec);
    methods.push_back(std::move(method));
  }

  const auto gt_files = sequence_files(opt.gt);
  std::map<std::string, SequenceFile> gt;
  for (const fs::path& file : gt_files)
    gt.emplace(file.stem().string(), read_sequence_file(read_text_file(file.string())));
  if (gt.empty()) throw Error(Errc::usage_error, "no ground-truth files under " + opt.gt);

  struct MethodResult {
    EvalReport report;
    ConfidenceHistogram histogram;
  };
  std::vector<MethodResult> results(methods.size());

  parallel_for(static_cast<int>(methods.size()), opt.jobs, [&](int index) {
    const Method& method = methods[index];
    std::map<std::string, SequenceFile> pred;
    for (const fs::path& file : sequence_files(method.dir))
      pred.emplace(file.stem().string(), read_sequence_file(read_text_file(file.string())));

    // Strict id alignment: every video must exist on both sides.
    std::vector<std::string> missing, extra;
    for (const auto& [video, doc] : gt)
      if (!pred.count(video)) missing.push_back(video);
    for (const auto& [video, doc] : pred)
      if (!gt.count(video)) extra.push_back(video);
    if (!missing.empty() || !extra.empty()) {
      std::string detail = method.name + ":";
      for (const std::string& v : missing) detail += " missing=" + v;
      for (const std::string& v : extra) detail += " extra=" + v;
      throw Error(Errc::alignment_error, detail);
    }

    EvalAccumulator acc(cfg.alpha);
    ConfidenceHistogram merged;
    merged.edges = cfg.bin_edges;
    merged.retained.assign(cfg.bin_edges.size(), 0);
    merged.discarded.assign(cfg.bin_edges.size(), 0);

    for (const auto& [video, gt_doc] : gt) {
      const SequenceFile& pred_doc = pred.at(video);
      std::map<int, const PoseSequence*> pred_by_person;
      for (const PoseSequence& seq : pred_doc.persons) pred_by_person[seq.person] = &seq;
      const PoseSequence empty;
      for (const PoseSequence& gt_seq : gt_doc.persons) {
        const auto it = pred_by_person.find(gt_seq.person);
        acc.add(it == pred_by_person.end() ? empty : *it->second, gt_seq);
      }
      try {
        const auto hist = confidence_error_histogram(pred_doc.persons, gt_doc.persons, cfg);
        for (size_t b = 0; b < merged.retained.size(); ++b) {
          merged.retained[b] += hist.retained[b];
          merged.discarded[b] += hist.discarded[b];
        }
      } catch (const Error& e) {
        if (e.code() != Errc::empty_eval) throw;  // empty videos just add nothing
      }
    }

    results[index] = MethodResult{acc.report(), std::move(merged)};
    logging::info("evaluated method",
                  {{"method", method.name}, {"pckh", results[index].report.pckh}});
  });

  ensure_output_dir(opt.output);

  json report;
  report["alpha"] = cfg.alpha;
  report["gamma"] = cfg.gamma;
  json method_rows = json::array();
  for (size_t i = 0; i < methods.size(); ++i) {
    const EvalReport& r = results[i].report;
    json row;
    row["name"] = methods[i].name;
    row["pckh"] = r.pckh;
    row["mpjpe"] = r.mpjpe;
    row["miss_rate"] = r.miss_rate;
    row["evaluated_pairs"] = r.evaluated_pairs;
    row["missing_pairs"] = r.missing_pairs;
    row["per_joint_pckh"] = r.per_joint_pckh;
    method_rows.push_back(std::move(row));
  }
  report["methods"] = std::move(method_rows);
  write_text_file((fs::path(opt.output) / "report.json").string(), report.dump());

  std::ostringstream csv;
  csv << "method,pckh,mpjpe,miss_rate,evaluated_pairs,missing_pairs\n";
  for (size_t i = 0; i < methods.size(); ++i) {
    const EvalReport& r = results[i].report;
    csv << methods[i].name << ',' << format_double(r.pckh) << ',' << format_double(r.mpjpe) << ','
        << format_double(r.miss_rate) << ',' << r.evaluated_pairs << ',' << r.missing_pairs
        << '\n';
  }
  write_text_file((fs::path(opt.output) / "report.csv").string(), csv.str());

  std::ostringstream hist_csv;
  hist_csv << "method,bin_low,bin_high,retained,discarded\n";
  for (size_t i = 0; i < methods.size(); ++i) {
    const ConfidenceHistogram& h = results[i].histogram;
    for (size_t b = 0; b < h.retained.size(); ++b) {
      hist_csv << methods[i].name << ',' << format_double(h.edges[b]) << ',';
      if (b + 1 < h.edges.size()) {
        hist_csv << format_double(h.edges[b + 1]);
      } else {
        hist_csv << "inf";
      }
      hist_csv << ',' << h.retained[b] << ',' << h.discarded[b] << '\n';
    }
  }
  write_text_file((fs::path(opt.output) / "histogram.csv").string(), hist_csv.str());

  json config;
  config["pred"] = opt.pred;
  config["gt"] = opt.gt;
  config["output"] = opt.output;
  config["alpha"] = opt.alpha;
  config["gamma"] = opt.gamma;
  config["bins"] = cfg.bin_edges;
  write_manifest(opt.output, "evaluate", std::move(config),
                 json{{"methods", methods.size()}, {"videos", gt.size()}});
}

namespace {

struct BenchSetup {
  TraceParams trace;
  std::vector<CorruptionProfile> profiles;
};

CorruptionProfile profile_from_json(const std::string& name, const nlohmann::ordered_json& obj) {
  CorruptionProfile profile;
  profile.name = name;
  if (obj.contains("jitter_sigma")) profile.jitter_sigma = obj["jitter_sigma"].get<double>();
  if (obj.contains("joint_dropout_p")) profile.joint_dropout_p = obj["joint_dropout_p"].get<double>();
  if (obj.contains("person_miss_p")) profile.person_miss_p = obj["person_miss_p"].get<double>();
  if (obj.contains("outlier_p")) profile.outlier_p = obj["outlier_p"].get<double>();
  if (obj.contains("outlier_scale")) profile.outlier_scale = obj["outlier_scale"].get<double>();
  if (obj.contains("bias_x")) profile.bias_x = obj["bias_x"].get<double>();
  if (obj.contains("bias_y")) profile.bias_y = obj["bias_y"].get<double>();
  profile.validate();
  return profile;
}

BenchSetup load_bench_setup(const std::string& profiles_path) {
  BenchSetup setup;
  if (profiles_path.empty()) {
    const auto defaults = default_benchmark_profiles();
    setup.profiles.assign(defaults.begin(), defaults.end());
    return setup;
  }
  const auto doc = toml::parse(read_text_file(profiles_path));
  if (doc.contains("trace")) {
    const auto& trace = doc["trace"];
    if (trace.contains("width")) setup.trace.width = trace["width"].get<int>();
    if (trace.contains("height")) setup.trace.height = trace["height"].get<int>();
    if (trace.contains("gait_frequency"))
      setup.trace.gait_frequency = trace["gait_frequency"].get<double>();
    if (trace.contains("path_speed")) setup.trace.path_speed = trace["path_speed"].get<double>();
  }
  if (!doc.contains("estimator") || !doc["estimator"].is_object() || doc["estimator"].empty())
    throw Error(Errc::usage_error, profiles_path + ": needs at least one [estimator.<name>]");
  for (const auto& [name, obj] : doc["estimator"].items())
    setup.profiles.push_back(profile_from_json(name, obj));
  if (setup.profiles.size() < 2)
    throw Error(Errc::usage_error, profiles_path + ": needs at least two estimators");
  return setup;
}

PoseSequence bundles_to_sequence(const std::vector<FrameBundle>& bundles, const VideoMeta& meta) {
  PoseSequence seq;
  seq.meta = meta;
  for (const FrameBundle& bundle : bundles) {
    if (bundle.proposals.empty()) continue;
    AggregatedPose frame;
    frame.frame = bundle.frame;
    frame.joints = bundle.proposals[0].joints;
    frame.confidence = 1.0;
    frame.retained = true;
    frame.source.fill(0);
    seq.frames.push_back(frame);
  }
  return seq;
}

}  // namespace

void cmd_bench(const BenchOptions& opt) {
  if (opt.trials < 1) throw Error(Errc::usage_error, "--trials must be >= 1");
  if (opt.frames < 2) throw Error(Errc::usage_error, "--frames must be >= 2");
  if (opt.jobs < 1) throw Error(Errc::usage_error, "--jobs must be >= 1");
  const BenchSetup setup = load_bench_setup(opt.profiles);
  const int experts = static_cast<int>(setup.profiles.size());

  AggregationConfig cfg;
  cfg.gamma = opt.gamma;
  cfg.estimator_count = experts;
  cfg.validate();

  struct Trial {
    uint64_t seed = 0;
    std::vector<double> expert_pckh;
    std::vector<double> expert_mpjpe;
    double fused_pckh = 0.0;
    double fused_mpjpe = 0.0;
    bool win = false;
  };
  std::vector<Trial> trials(opt.trials);

  parallel_for(opt.trials, opt.jobs, [&](int index) {
    Trial& trial = trials[index];
    trial.seed = derive_seed(opt.seed, static_cast<uint64_t>(index));
    const MotionTrace trace = generate_trace(setup.trace, opt.frames, trial.seed);

    std::vector<std::vector<FrameBundle>> per_estimator;
    for (int m = 0; m < experts; ++m) {
      CorruptionProfile profile = setup.profiles[m];
      profile.seed = derive_seed(trial.seed, static_cast<uint64_t>(m) + 1);
      per_estimator.push_back(simulate_estimator(trace, profile, m));
      const PoseSequence as_seq = bundles_to_sequence(per_estimator.back(), trace.gt.meta);
      const EvalReport report = evaluate_pair(as_seq, trace.gt, opt.alpha);
      trial.expert_pckh.push_back(report.pckh);
      trial.expert_mpjpe.push_back(report.mpjpe);
    }

    PersonTrack track;
    track.person = 0;
    for (int t = 0; t < opt.frames; ++t) {
      track.frames.push_back(t);
      std::vector<std::optional<Pose>> slots(experts);
      for (int m = 0; m < experts; ++m) {
        if (!per_estimator[m][t].proposals.empty())
          slots[m] = per_estimator[m][t].proposals[0].joints;
      }
      track.proposals.push_back(std::move(slots));
    }
    const PoseSequence fused = aggregate_track(track, trace.gt.meta, cfg);
    const EvalReport fused_report = evaluate_pair(fused, trace.gt, opt.alpha);
    trial.fused_pckh = fused_report.pckh;
    trial.fused_mpjpe = fused_report.mpjpe;
    trial.win = trial.fused_pckh >=
                *std::max_element(trial.expert_pckh.begin(), trial.expert_pckh.end());
  });

  ensure_output_dir(opt.output);

  std::ostringstream csv;
  csv << "trial,seed";
  for (const CorruptionProfile& p : setup.profiles) csv << ',' << p.name << "_pckh";
  csv << ",fused_pckh";
  for (const CorruptionProfile& p : setup.profiles) csv << ',' << p.name << "_mpjpe";
  csv << ",fused_mpjpe,win\n";
  int wins = 0;
  double fused_sum = 0.0, best_sum = 0.0, fused_mpjpe_sum = 0.0;
  std::vector<double> expert_sums(experts, 0.0);
  std::vector<double> expert_mpjpe_sums(experts, 0.0);
  for (int i = 0; i < opt.trials; ++i) {
    const Trial& trial = trials[i];
    csv << i << ',' << trial.seed;
    for (double v : trial.expert_pckh) csv << ',' << format_double(v);
    csv << ',' << format_double(trial.fused_pckh);
    for (double v : trial.expert_mpjpe) csv << ',' << format_double(v);
    csv << ',' << format_double(trial.fused_mpjpe) << ',' << (trial.win ? 1 : 0) << '\n';
    wins += trial.win ? 1 : 0;
    fused_sum += trial.fused_pckh;
    fused_mpjpe_sum += trial.fused_mpjpe;
    best_sum += *std::max_element(trial.expert_pckh.begin(), trial.expert_pckh.end());
    for (int m = 0; m < experts; ++m) {
      expert_sums[m] += trial.expert_pckh[m];
      expert_mpjpe_sums[m] += trial.expert_mpjpe[m];
    }
  }
  write_text_file((fs::path(opt.output) / "trials.csv").string(), csv.str());

  json summary;
  summary["trials"] = opt.trials;
  summary["frames"] = opt.frames;
  summary["seed"] = opt.seed;
  summary["alpha"] = opt.alpha;
  summary["win_rate"] = static_cast<double>(wins) / opt.trials;
  summary["mean_fused_pckh"] = fused_sum / opt.trials;
  summary["mean_fused_mpjpe"] = fused_mpjpe_sum / opt.trials;
  summary["mean_best_expert_pckh"] = best_sum / opt.trials;
  summary["mean_improvement"] = (fused_sum - best_sum) / opt.trials;
  json expert_means = json::object();
  json expert_mpjpe_means = json::object();
  for (int m = 0; m < experts; ++m) {
    expert_means[setup.profiles[m].name] = expert_sums[m] / opt.trials;
    expert_mpjpe_means[setup.profiles[m].name] = expert_mpjpe_sums[m] / opt.trials;
  }
  summary["mean_expert_pckh"] = std::move(expert_means);
  summary["mean_expert_mpjpe"] = std::move(expert_mpjpe_means);
  write_text_file((fs::path(opt.output) / "summary.json").string(), summary.dump());

  json config;
  config["trials"] = opt.trials;
  config["frames"] = opt.frames;
  config["seed"] = opt.seed;
  config["alpha"] = opt.alpha;
  config["gamma"] = opt.gamma;
  config["profiles"] = opt.profiles;
  write_manifest(opt.output, "bench", std::move(config),
                 json{{"win_rate", static_cast<double>(wins) / opt.trials}});
  logging::info("bench finished", {{"win_rate", static_cast<double>(wins) / opt.trials},
                                   {"mean_improvement", (fused_sum - best_sum) / opt.trials}});
}

void cmd_simulate(const SimulateOptions& opt) {
  if (opt.frames < 1) throw Error(Errc::usage_error, "--frames must be >= 1");
  if (opt.video.empty() || opt.video.find('/') != std::string::npos)
    throw Error(Errc::usage_error, "--video must be a plain name");
  const BenchSetup setup = load_bench_setup(opt.profiles);

  MotionTrace trace = generate_trace(setup.trace, opt.frames, opt.seed);
  trace.gt.meta.video = opt.video;

  const fs::path video_dir = fs::path(opt.output) / "videos" / opt.video;
  const fs::path gt_dir = fs::path(opt.output) / "gt";
  ensure_output_dir(video_dir.string());
  ensure_output_dir(gt_dir.string());

  for (size_t m = 0; m < setup.profiles.size(); ++m) {
    CorruptionProfile profile = setup.profiles[m];
    profile.seed = derive_seed(opt.seed, m + 1);
    const auto bundles = simulate_estimator(trace, profile, static_cast<int>(m));
    write_text_file((video_dir / (profile.name + ".json")).string(),
                    write_proposal_file(trace.gt.meta, bundles));
  }
  write_text_file((gt_dir / (opt.video + ".json")).string(),
                  write_sequence_file(trace.gt.meta, std::vector{trace.gt}));

  json config;
  config["output"] = opt.output;
  config["video"] = opt.video;
  config["frames"] = opt.frames;
  config["seed"] = opt.seed;
  config["profiles"] = opt.profiles;
  json names = json::array();
  for (const CorruptionProfile& p : setup.profiles) names.push_back(p.name);
  write_manifest(opt.output, "simulate", std::move(config),
                 json{{"estimators", std::move(names)}, {"frames", opt.frames}});
  logging::info("synthetic video written", {{"video", opt.video}, {"frames", opt.frames}});
}

}  // namespace posefuse::cli
