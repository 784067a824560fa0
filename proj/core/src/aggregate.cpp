#include "posefuse/aggregate.hpp"

#include <cfloat>
#include <cmath>

#include "posefuse/error.hpp"

namespace posefuse {

namespace {

double dist(const Keypoint& a, const Keypoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

void AggregationConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw Error(Errc::invalid_params, "gamma must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_params, "epsilon must be positive");
  if (estimator_count < 2)
    throw Error(Errc::invalid_params, "at least two estimators are required");
  if (joint_count < 1) throw Error(Errc::invalid_params, "joint_count must be positive");
}

std::optional<double> euclidean_distance(const Keypoint& a, const Keypoint& b) {
  if (!a.valid || !b.valid) return std::nullopt;
  return dist(a, b);
}

JointChoice aggregate_joint_first_frame(std::span<const Keypoint> proposals) {
  JointChoice choice;
  int single = -1;
  int valid_count = 0;
  for (int m = 0; m < static_cast<int>(proposals.size()); ++m) {
    if (proposals[m].valid) {
      ++valid_count;
      if (single < 0) single = m;
    }
  }
  if (valid_count == 0) return choice;  // unresolved
  if (valid_count == 1) {
    choice.source = single;
    choice.position = proposals[single];
    return choice;
  }
  // Closest pair over all valid proposals; the lower-indexed member wins.
  double best = 0.0;
  int best_a = -1;
  for (int i = 0; i < static_cast<int>(proposals.size()); ++i) {
    if (!proposals[i].valid) continue;
    for (int j = i + 1; j < static_cast<int>(proposals.size()); ++j) {
      if (!proposals[j].valid) continue;
      const double d = dist(proposals[i], proposals[j]);
      if (best_a < 0 || d < best) {
        best = d;
        best_a = i;
      }
    }
  }
  choice.source = best_a;
  choice.position = proposals[best_a];
  return choice;
}

JointChoice aggregate_joint(std::span<const Keypoint> proposals, const Keypoint& prev) {
  JointChoice choice;
  int best_m = -1;
  double best = 0.0;
  for (int m = 0; m < static_cast<int>(proposals.size()); ++m) {
    if (!proposals[m].valid) continue;
    const double d = dist(proposals[m], prev);
    if (best_m < 0 || d < best) {
      best = d;
      best_m = m;
    }
  }
  if (best_m < 0) {
    choice.source = kCarriedForward;
    choice.position = prev;
    return choice;
  }
  choice.source = best_m;
  choice.position = proposals[best_m];
  choice.distance_to_prev = best;
  return choice;
}

std::vector<JointChoice> aggregate_frame(const ProposalGrid& grid,
                                         const std::vector<Keypoint>* prev) {
  const int estimators = static_cast<int>(grid.size());
  const int joints = estimators > 0 ? static_cast<int>(grid[0].size())
                                    : (prev ? static_cast<int>(prev->size()) : 0);
  std::vector<JointChoice> out(joints);
  std::vector<Keypoint> column(estimators);
  for (int j = 0; j < joints; ++j) {
    for (int m = 0; m < estimators; ++m) column[m] = grid[m][j];
    JointChoice& c = out[j];
    if (prev && (*prev)[j].valid) {
      c = aggregate_joint(column, (*prev)[j]);
    } else {
      c = aggregate_joint_first_frame(column);
    }
    c.joint = j;
  }
  return out;
}

std::vector<std::vector<JointChoice>> aggregate_series(std::span<const ProposalGrid> frames) {
  std::vector<std::vector<JointChoice>> out;
  out.reserve(frames.size());
  std::vector<Keypoint> prev;
  bool have_prev = false;
  for (const ProposalGrid& grid : frames) {
    auto choices = aggregate_frame(grid, have_prev ? &prev : nullptr);
    if (prev.size() != choices.size()) prev.assign(choices.size(), Keypoint{});
    for (size_t j = 0; j < choices.size(); ++j) prev[j] = choices[j].position;
    have_prev = true;
    out.push_back(std::move(choices));
  }
  return out;
}

double confidence(const Pose& aggregated, const std::array<int, kJointCount>& sources,
                  std::span<const Pose> proposals, const AggregationConfig& cfg) {
  const auto normal = head_length(aggregated);
  if (!normal) return 0.0;  // pose cannot be validated without a head length

  double sum = 0.0;
  long terms = 0;
  for (int j = 0; j < kJointCount; ++j) {
    if (!aggregated[j].valid || sources[j] == kCarriedForward || sources[j] == kNoSource)
      continue;
    for (const Pose& proposal : proposals) {
      if (!proposal[j].valid) continue;
      sum += dist(aggregated[j], proposal[j]) / (*normal + cfg.epsilon);
      ++terms;
    }
  }
  if (terms == 0) return 0.0;

  const double c = std::exp(-sum / static_cast<double>(terms));
  // exp underflow would report an impossible confidence of exactly 0.
  return c > 0.0 ? c : DBL_MIN;
}

void filter_sequence(PoseSequence& seq, const AggregationConfig& cfg) {
  for (AggregatedPose& frame : seq.frames) frame.retained = frame.confidence >= cfg.gamma;
}

TrackAggregator::TrackAggregator(int person, const AggregationConfig& cfg)
    : person_(person), cfg_(cfg) {
  cfg_.validate();
}

const Pose* TrackAggregator::last_aggregate() const { return started_ ? &prev_ : nullptr; }

void TrackAggregator::push_frame(int frame, std::span<const std::optional<Pose>> by_estimator) {
  ProposalGrid grid(by_estimator.size(), std::vector<Keypoint>(kJointCount));
  std::vector<Pose> present;
  present.reserve(by_estimator.size());
  for (size_t m = 0; m < by_estimator.size(); ++m) {
    if (by_estimator[m]) {
      for (int j = 0; j < kJointCount; ++j) grid[m][j] = (*by_estimator[m])[j];
      present.push_back(*by_estimator[m]);
    }
  }

  std::vector<Keypoint> prev_joints;
  if (started_) prev_joints.assign(prev_.begin(), prev_.end());
  const auto choices = aggregate_frame(grid, started_ ? &prev_joints : nullptr);

  AggregatedPose pose;
  pose.frame = frame;
  bool any_resolved = false;
  bool any_fresh = false;
  for (int j = 0; j < kJointCount; ++j) {
    pose.joints[j] = choices[j].position;
    pose.source[j] = choices[j].source;
    if (choices[j].source != kNoSource) any_resolved = true;
    if (choices[j].source >= 0) any_fresh = true;
  }
  if (!started_ && !any_resolved) return;  // sequence start deferred

  pose.confidence = confidence(pose.joints, pose.source, present, cfg_);
  prev_ = pose.joints;
  started_ = true;
  if (any_fresh) last_live_ = static_cast<int>(frames_.size());
  frames_.push_back(pose);
}

PoseSequence TrackAggregator::finish(const VideoMeta& meta) {
  PoseSequence seq;
  seq.person = person_;
  seq.meta = meta;
  seq.frames = std::move(frames_);
  // Trailing frames where everything was carried forward hold no new data.
  seq.frames.resize(last_live_ + 1);
  filter_sequence(seq, cfg_);
  frames_.clear();
  last_live_ = -1;
  started_ = false;
  return seq;
}

PoseSequence aggregate_track(const PersonTrack& track, const VideoMeta& meta,
                             const AggregationConfig& cfg) {
  TrackAggregator agg(track.person, cfg);
  for (size_t i = 0; i < track.frames.size(); ++i) {
    agg.push_frame(track.frames[i], track.proposals[i]);
  }
  return agg.finish(meta);
}

}  // namespace posefuse
