// Acceptance suite: one check per release criterion, each printed as a
// PASS/FAIL line with its runtime. Run with no arguments for the full list or
// with a single criterion number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracle.hpp"
#include "posefuse/aggregate.hpp"
#include "posefuse/error.hpp"
#include "posefuse/json_io.hpp"
#include "posefuse/metrics.hpp"
#include "posefuse/pseudo_gt.hpp"
#include "posefuse/rng.hpp"
#include "posefuse/synth.hpp"

namespace fs = std::filesystem;
using namespace posefuse;
using testutil::base_pose;
using testutil::kp;
using testutil::translated;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& out, bool condition, const std::string& what) {
  if (!condition && out.pass) {
    out.pass = false;
    out.detail = what;
  }
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion_oracle_equivalence() {
  Outcome out;
  Rng rng(20260101);
  for (int iter = 0; iter < 1000; ++iter) {
    const auto instance = testutil::random_instance(rng);
    const auto impl = aggregate_series(instance);
    const auto ref = oracle::aggregate(instance);
    expect(out, oracle::matches(impl, ref),
           "instance " + std::to_string(iter) + " diverged from the oracle");
    if (!out.pass) break;
  }
  return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_confidence_identities() {
  Outcome out;
  const AggregationConfig cfg;

  // Unanimity pins C to 1.
  {
    const Pose agg = base_pose();
    std::array<int, kJointCount> src{};
    src.fill(0);
    const double c = confidence(agg, src, std::vector<Pose>(3, agg), cfg);
    expect(out, std::abs(c - 1.0) <= 1e-12, "unanimous confidence " + std::to_string(c));
  }

  // A single summable term at exactly one head length gives e^-1.
  {
    const Pose agg = base_pose();  // head length 40
    std::array<int, kJointCount> src{};
    src.fill(kNoSource);
    src[static_cast<int>(JointId::l_wrist)] = 0;
    Pose proposal{};
    const Keypoint wrist = agg[static_cast<int>(JointId::l_wrist)];
    proposal[static_cast<int>(JointId::l_wrist)] = kp(wrist.x, wrist.y + 40.0);
    const double c = confidence(agg, src, std::vector<Pose>{proposal}, cfg);
    expect(out, std::abs(c - std::exp(-1.0)) <= 1e-9,
           "single-term confidence " + std::to_string(c));
  }

  // Monotone decrease under any single growing disagreement.
  Rng rng(414243);
  int tested = 0;
  while (tested < 1000 && out.pass) {
    const Pose agg = base_pose();
    std::array<int, kJointCount> src{};
    src.fill(0);
    std::vector<Pose> proposals(3, agg);
    for (Pose& p : proposals) {
      for (Keypoint& joint : p) {
        joint.x += rng.uniform(-25, 25);
        joint.y += rng.uniform(-25, 25);
      }
    }
    const int j = rng.next_int(kJointCount);
    const int m = rng.next_int(3);
    const double dx = proposals[m][j].x - agg[j].x;
    const double dy = proposals[m][j].y - agg[j].y;
    if (std::hypot(dx, dy) < 1e-6) continue;
    const double before = confidence(agg, src, proposals, cfg);
    proposals[m][j].x = agg[j].x + (1.0 + rng.uniform(0.1, 2.0)) * dx;
    proposals[m][j].y = agg[j].y + (1.0 + rng.uniform(0.1, 2.0)) * dy;
    const double after = confidence(agg, src, proposals, cfg);
    expect(out, after < before, "confidence did not decrease on perturbation");
    ++tested;
  }
  return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion_filter_semantics() {
  Outcome out;
  AggregationConfig cfg;  // gamma = 0.18
  Rng rng(5150);

  for (int iter = 0; iter < 200 && out.pass; ++iter) {
    PoseSequence seq;
    const int frames = 1 + rng.next_int(20);
    for (int t = 0; t < frames; ++t) {
      AggregatedPose frame;
      frame.frame = t;
      // Mix of random confidences and exact boundary values.
      const int kind = rng.next_int(4);
      frame.confidence = kind == 0 ? 0.18 : rng.next_double();
      seq.frames.push_back(frame);
    }
    filter_sequence(seq, cfg);
    for (const AggregatedPose& frame : seq.frames) {
      expect(out, frame.retained == (frame.confidence >= 0.18),
             "retained flag disagrees with C >= gamma at C = " +
                 std::to_string(frame.confidence));
    }
  }

  // The inclusive boundary seen end to end: a confidence computed by the
  // implementation, used verbatim as gamma, must keep the frame.
  const Pose agg = base_pose();
  std::array<int, kJointCount> src{};
  src.fill(0);
  std::vector<Pose> proposals(3, agg);
  proposals[2][5].x += 30.0;
  const double c = confidence(agg, src, proposals, AggregationConfig{});
  PoseSequence seq;
  AggregatedPose frame;
  frame.frame = 0;
  frame.confidence = c;
  seq.frames.push_back(frame);

  AggregationConfig boundary;
  boundary.gamma = c;
  filter_sequence(seq, boundary);
  expect(out, seq.frames[0].retained, "C == gamma must be retained");

  boundary.gamma = std::nextafter(c, 1.0);
  filter_sequence(seq, boundary);
  expect(out, !seq.frames[0].retained, "C just below gamma must be discarded");
  return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion_fusion_gain() {
  Outcome out;
  const int trials = 100;
  int wins = 0;
  double fused_sum = 0.0, best_sum = 0.0;

  for (int trial = 0; trial < trials; ++trial) {
    const uint64_t trial_seed = derive_seed(20250101, static_cast<uint64_t>(trial));
    const MotionTrace trace = generate_trace(TraceParams{}, 120, trial_seed);

    auto profiles = default_benchmark_profiles();
    std::vector<std::vector<FrameBundle>> per_estimator;
    std::vector<double> expert_pckh;
    for (size_t m = 0; m < profiles.size(); ++m) {
      profiles[m].seed = derive_seed(trial_seed, m + 1);
      per_estimator.push_back(simulate_estimator(trace, profiles[m], static_cast<int>(m)));

      PoseSequence as_seq;
      as_seq.meta = trace.gt.meta;
      for (const FrameBundle& bundle : per_estimator.back()) {
        if (bundle.proposals.empty()) continue;
        AggregatedPose frame;
        frame.frame = bundle.frame;
        frame.joints = bundle.proposals[0].joints;
        frame.confidence = 1.0;
        frame.retained = true;
        as_seq.frames.push_back(frame);
      }
      expert_pckh.push_back(pckh(as_seq, trace.gt, 2.0));
    }

    PersonTrack track;
    for (int t = 0; t < 120; ++t) {
      track.frames.push_back(t);
      std::vector<std::optional<Pose>> slots(profiles.size());
      for (size_t m = 0; m < profiles.size(); ++m) {
        if (!per_estimator[m][t].proposals.empty())
          slots[m] = per_estimator[m][t].proposals[0].joints;
      }
      track.proposals.push_back(std::move(slots));
    }
    const PoseSequence fused = aggregate_track(track, trace.gt.meta, AggregationConfig{});
    const double fused_pckh = pckh(fused, trace.gt, 2.0);

    const double best = *std::max_element(expert_pckh.begin(), expert_pckh.end());
    if (fused_pckh >= best) ++wins;
    fused_sum += fused_pckh;
    best_sum += best;
  }

  expect(out, wins >= 95,
         "fusion won only " + std::to_string(wins) + "/100 trials");
  expect(out, fused_sum - best_sum > 0.0, "mean improvement over the best expert is not positive");
  out.detail = out.pass ? "" : out.detail;
  return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion_pseudo_gt_geometry() {
  Outcome out;
  Rng rng(778899);
  const VideoMeta image{"v", 640, 480};

  for (int iter = 0; iter < 1000 && out.pass; ++iter) {
    Pose pose{};
    const int valid = 2 + rng.next_int(kJointCount - 1);
    for (int j = 0; j < valid; ++j) pose[j] = kp(rng.uniform(0, 640), rng.uniform(0, 480));

    // Expansion factor 0.10, before clipping.
    const auto raw = derive_box(pose, 0.0, nullptr);
    const auto grown = derive_box(pose, 0.10, nullptr);
    expect(out, raw.has_value() && grown.has_value(), "box undefined on a valid pose");
    if (!out.pass) break;
    expect(out, std::abs(grown->width() - 1.10 * raw->width()) <= 1e-9,
           "expanded width is not 1.10x raw");
    expect(out, std::abs(grown->height() - 1.10 * raw->height()) <= 1e-9,
           "expanded height is not 1.10x raw");

    const auto clipped = derive_box(pose, 0.10, &image);
    for (const Keypoint& joint : pose) {
      if (!joint.valid) continue;
      expect(out,
             joint.x >= clipped->x_min && joint.x <= clipped->x_max &&
                 joint.y >= clipped->y_min && joint.y <= clipped->y_max,
             "a valid joint escaped its box");
    }
  }

  // Anchor assignment invariances, exact on constructed cases.
  AnchorCodebook codebook;
  codebook.anchor_count = 4;
  for (int k = 0; k < 4; ++k) {
    Pose variant = base_pose();
    variant[static_cast<int>(JointId::l_wrist)].y += 10.0 * k;
    variant[static_cast<int>(JointId::r_elbow)].x += 5.0 * k;
    codebook.anchors.push_back(*normalize_pose_for_similarity(variant));
  }
  Pose query = base_pose();
  query[static_cast<int>(JointId::l_wrist)].y += 20.0;
  query[static_cast<int>(JointId::r_elbow)].x += 10.0;

  const auto reference = assign_anchor_class(query, codebook);
  expect(out, reference.has_value() && reference->first == 2, "constructed query must pick class 2");
  if (reference) {
    const auto moved = assign_anchor_class(translated(query, 311, -57), codebook);
    expect(out, moved && moved->first == reference->first && moved->second == reference->second,
           "translation changed the assignment");
    Pose doubled = query;
    for (Keypoint& joint : doubled) {
      joint.x *= 2.0;
      joint.y *= 2.0;
    }
    const auto scaled = assign_anchor_class(doubled, codebook);
    expect(out, scaled && scaled->first == reference->first && scaled->second == reference->second,
           "uniform scaling changed the assignment");
  }
  return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion_kmeans_contract() {
  Outcome out;
  Rng rng(90210);

  // Objective is non-increasing on random data.
  std::vector<Pose> random_poses;
  for (int i = 0; i < 80; ++i) {
    Pose pose{};
    for (Keypoint& joint : pose) {
      joint.x = rng.next_double();
      joint.y = rng.next_double();
      joint.valid = true;
    }
    random_poses.push_back(pose);
  }
  KmeansStats stats;
  fit_anchor_codebook(random_poses, 7, 1234, &stats);
  for (size_t i = 1; i < stats.objective.size(); ++i) {
    expect(out, stats.objective[i] <= stats.objective[i - 1] + 1e-9,
           "objective increased at iteration " + std::to_string(i));
  }

  // A two-cluster toy recovers the true centroids within 1e-6.
  std::vector<Pose> samples;
  std::vector<Pose> members_a, members_b;
  for (int i = 0; i < 10; ++i) {
    Pose a = *normalize_pose_for_similarity(base_pose());
    Pose shifted = base_pose();
    shifted[static_cast<int>(JointId::l_wrist)].y += 40.0;
    shifted[static_cast<int>(JointId::r_wrist)].y -= 40.0;
    Pose b = *normalize_pose_for_similarity(shifted);
    a[0].x += rng.uniform(-0.002, 0.002);
    b[0].x += rng.uniform(-0.002, 0.002);
    members_a.push_back(a);
    members_b.push_back(b);
    samples.push_back(a);
    samples.push_back(b);
  }
  const AnchorCodebook toy = fit_anchor_codebook(samples, 2, 77);

  auto centroid = [](const std::vector<Pose>& members) {
    std::array<double, 2 * kJointCount> mean{};
    for (const Pose& pose : members) {
      for (int j = 0; j < kJointCount; ++j) {
        mean[2 * j] += pose[j].x;
        mean[2 * j + 1] += pose[j].y;
      }
    }
    for (double& v : mean) v /= members.size();
    return mean;
  };
  auto matches = [&](const std::array<double, 2 * kJointCount>& mean, const Pose& anchor) {
    for (int j = 0; j < kJointCount; ++j) {
      if (std::abs(anchor[j].x - mean[2 * j]) > 1e-6) return false;
      if (std::abs(anchor[j].y - mean[2 * j + 1]) > 1e-6) return false;
    }
    return true;
  };
  const auto mean_a = centroid(members_a);
  const auto mean_b = centroid(members_b);
  const bool recovered = (matches(mean_a, toy.anchors[0]) && matches(mean_b, toy.anchors[1])) ||
                         (matches(mean_a, toy.anchors[1]) && matches(mean_b, toy.anchors[0]));
  expect(out, recovered, "two-cluster toy centroids not recovered within 1e-6");

  // Same seed, same bytes.
  const std::string once = write_codebook_json(fit_anchor_codebook(samples, 3, 42));
  const std::string twice = write_codebook_json(fit_anchor_codebook(samples, 3, 42));
  expect(out, once == twice, "identical seeds produced different codebook bytes");
  return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_metric_goldens() {
  Outcome out;

  auto sequence_of = [](const std::vector<Pose>& poses) {
    PoseSequence seq;
    seq.meta = VideoMeta{"v", 640, 480};
    for (int t = 0; t < static_cast<int>(poses.size()); ++t) {
      AggregatedPose frame;
      frame.frame = t;
      frame.joints = poses[t];
      frame.confidence = 1.0;
      frame.retained = true;
      seq.frames.push_back(frame);
    }
    return seq;
  };

  const auto self = sequence_of({base_pose(), translated(base_pose(), 2, 3)});
  expect(out, pckh(self, self, 0.5) == 1.0, "self PCKh must be exactly 1");
  expect(out, mpjpe_normalized(self, self).mpjpe == 0.0, "self MPJPE must be exactly 0");

  // Hand-computed half: head length 10, offsets of 0, 0.3, 0.7 and 0.6 head
  // lengths over four evaluated joints.
  Pose gt{};
  gt[static_cast<int>(JointId::head)] = kp(0, 10);
  gt[static_cast<int>(JointId::l_shoulder)] = kp(-3, 0);
  gt[static_cast<int>(JointId::r_shoulder)] = kp(3, 0);
  gt[static_cast<int>(JointId::l_wrist)] = kp(20, 0);
  Pose pred = gt;
  pred[static_cast<int>(JointId::l_shoulder)] = kp(-3, 7);
  pred[static_cast<int>(JointId::r_shoulder)] = kp(3, 3);
  pred[static_cast<int>(JointId::l_wrist)] = kp(26, 0);
  expect(out, pckh(sequence_of({pred}), sequence_of({gt}), 0.5) == 0.5,
         "hand-computed PCKh must be exactly 0.5");

  // Hand-computed MPJPE: two evaluated joints at 1.0 and 3.0 head lengths.
  Pose gt2{};
  gt2[static_cast<int>(JointId::head)] = kp(0, 10);
  gt2[static_cast<int>(JointId::l_shoulder)] = kp(-3, 0);
  gt2[static_cast<int>(JointId::r_shoulder)] = kp(3, 0);
  Pose pred2{};
  pred2[static_cast<int>(JointId::l_shoulder)] = kp(-3, 10);
  pred2[static_cast<int>(JointId::r_shoulder)] = kp(3, 30);
  const auto mp = mpjpe_normalized(sequence_of({pred2}), sequence_of({gt2}));
  expect(out, mp.mpjpe == 2.0, "hand-computed MPJPE must be exactly 2.0");
  expect(out, mp.evaluated == 2 && mp.missing == 1, "MPJPE bookkeeping is off");
  return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_cross_entropy() {
  Outcome out;
  const std::vector<double> certain = {0.0, 1.0};
  expect(out, std::abs(classification_loss(certain, 1) - 0.0) <= 1e-12, "loss(1) must be 0");

  const std::vector<double> half = {0.5, 0.5};
  expect(out, std::abs(classification_loss(half, 0) - std::log(2.0)) <= 1e-12,
         "loss(0.5) must be ln 2");

  const double e_inv = std::exp(-1.0);
  const std::vector<double> inv = {e_inv, 1.0 - e_inv};
  expect(out, std::abs(classification_loss(inv, 0) - 1.0) <= 1e-12, "loss(e^-1) must be 1");
  return out;
}

// ---------------------------------------------------------------- criterion 9

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POSEFUSE_CLI_PATH) + " " + args + " 2>/dev/null";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file())
      out[fs::relative(entry.path(), dir).string()] = read_text_file(entry.path().string());
  }
  return out;
}

Outcome criterion_pipeline_determinism() {
  Outcome out;
  const fs::path scratch = "acceptance_scratch";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const fs::path input = scratch / "input";
  expect(out,
         run_cli("simulate --output " + input.string() + " --frames 60 --seed 31") == 0,
         "simulate failed");
  if (!out.pass) return out;

  auto run_pipeline = [&]() -> std::map<std::string, std::string> {
    const fs::path refined = scratch / "refined";
    const fs::path pseudo = scratch / "pseudo";
    const fs::path report = scratch / "report";
    fs::remove_all(refined);
    fs::remove_all(pseudo);
    fs::remove_all(report);
    if (run_cli("aggregate --input " + (input / "videos").string() + " --output " + refined.string() +
                " --estimators expert_td_a,expert_td_b,expert_bu --format canonical") != 0)
      return {};
    if (run_cli("pseudo-gt --input " + refined.string() + " --output " + pseudo.string() +
                " --anchors 4 --seed 7") != 0)
      return {};
    if (run_cli("evaluate --pred fused=" + refined.string() + " --gt " +
                (input / "gt").string() + " --output " + report.string() + " --alpha 2.0") != 0)
      return {};
    std::map<std::string, std::string> all;
    for (const auto& [rel, bytes] : dir_contents(refined)) all["refined/" + rel] = bytes;
    for (const auto& [rel, bytes] : dir_contents(pseudo)) all["pseudo/" + rel] = bytes;
    for (const auto& [rel, bytes] : dir_contents(report)) all["report/" + rel] = bytes;
    return all;
  };

  const auto first = run_pipeline();
  expect(out, !first.empty(), "pipeline run failed");
  const auto second = run_pipeline();
  expect(out, first == second, "rerun artifacts differ");
  fs::remove_all(scratch);
  return out;
}

// --------------------------------------------------------------- criterion 10

Outcome criterion_histogram_structure() {
  Outcome out;
  Rng rng(161616);

  std::vector<Pose> gt_poses, pred_poses;
  std::vector<double> confidences;
  for (int t = 0; t < 200; ++t) {
    gt_poses.push_back(base_pose());
    pred_poses.push_back(translated(base_pose(), rng.uniform(0, 500), rng.uniform(0, 100)));
    confidences.push_back(rng.next_double());
  }
  PoseSequence pred;
  pred.meta = VideoMeta{"v", 640, 480};
  PoseSequence gt = pred;
  for (int t = 0; t < 200; ++t) {
    AggregatedPose frame;
    frame.frame = t;
    frame.joints = pred_poses[t];
    frame.confidence = confidences[t];
    pred.frames.push_back(frame);
    frame.joints = gt_poses[t];
    frame.confidence = 1.0;
    gt.frames.push_back(frame);
  }

  for (int config = 0; config < 20 && out.pass; ++config) {
    EvalConfig cfg;
    cfg.gamma = 0.01 + 0.98 * rng.next_double();
    cfg.bin_edges = {0.0};
    const int extra = 1 + rng.next_int(8);
    for (int e = 0; e < extra; ++e)
      cfg.bin_edges.push_back(cfg.bin_edges.back() + rng.uniform(0.1, 3.0));

    const auto hist =
        confidence_error_histogram(std::vector{pred}, std::vector{gt}, cfg);
    expect(out, hist.total() == 200, "histogram totals must cover every pose");

    EvalConfig other = cfg;
    other.gamma = 0.01 + 0.98 * rng.next_double();
    const auto moved = confidence_error_histogram(std::vector{pred}, std::vector{gt}, other);
    expect(out, moved.total() == hist.total(), "moving gamma changed the total");
    for (size_t b = 0; b < hist.retained.size(); ++b) {
      expect(out,
             hist.retained[b] + hist.discarded[b] == moved.retained[b] + moved.discarded[b],
             "moving gamma changed a per-bin total");
    }
  }
  return out;
}

struct Criterion {
  int id;
  const char* label;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "streaming aggregation matches the exhaustive oracle on 1000 instances", 10.0,
       criterion_oracle_equivalence},
      {2, "confidence identities: unanimity, single-term e^-1, monotonicity", 5.0,
       criterion_confidence_identities},
      {3, "filter semantics: retained iff C >= gamma, inclusive boundary", 5.0,
       criterion_filter_semantics},
      {4, "fusion beats every simulated expert in >= 95 of 100 seeded trials", 60.0,
       criterion_fusion_gain},
      {5, "pseudo-GT geometry: 1.10x expansion, containment, assignment invariances", 5.0,
       criterion_pseudo_gt_geometry},
      {6, "k-means contract: monotone objective, toy recovery, seed-stable bytes", 5.0,
       criterion_kmeans_contract},
      {7, "metric goldens: exact self-eval, hand-computed PCKh 0.5 and MPJPE 2.0", 5.0,
       criterion_metric_goldens},
      {8, "cross entropy matches 0, ln 2 and 1 within 1e-12", 5.0, criterion_cross_entropy},
      {9, "aggregate -> pseudo-gt -> evaluate rerun is byte-identical", 60.0,
       criterion_pipeline_determinism},
      {10, "histogram split counts repartition without changing totals", 5.0,
       criterion_histogram_structure},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  bool all_pass = true;
  for (const Criterion& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail = "over the " + std::to_string(criterion.budget_seconds) + "s budget";
    }
    std::printf("[%s] criterion %2d (%.2fs): %s%s%s\n", outcome.pass ? "PASS" : "FAIL",
                criterion.id, elapsed, criterion.label,
                outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
