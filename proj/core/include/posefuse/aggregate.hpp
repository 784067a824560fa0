#pragma once

#include <optional>
#include <span>
#include <vector>

#include "posefuse/skeleton.hpp"

namespace posefuse {

struct AggregationConfig {
  double gamma = 0.18;     // confidence threshold; frames below are discarded
  double epsilon = 1e-12;  // guards the normalizer when head length is zero
  int estimator_count = 3;
  int joint_count = kJointCount;

  void validate() const;  // throws Error{invalid_params}
};

// Outcome of fusing one joint in one frame.
struct JointChoice {
  int joint = 0;
  int source = kNoSource;  // estimator index, kCarriedForward or kNoSource
  Keypoint position;       // invalid when the joint never resolved
  std::optional<double> distance_to_prev;
};

// Proposals for one frame, indexed [estimator][joint]. Joint count is taken
// from the inner vectors, which lets tests run reduced joint sets.
using ProposalGrid = std::vector<std::vector<Keypoint>>;

std::optional<double> euclidean_distance(const Keypoint& a, const Keypoint& b);

// First-frame rule: among all valid proposal pairs pick the closest pair and
// return the member from the lower-indexed estimator. A single valid proposal
// is returned as-is; none at all yields an unresolved choice.
JointChoice aggregate_joint_first_frame(std::span<const Keypoint> proposals);

// Steady-state rule: the valid proposal closest to the previous aggregate,
// ties to the lowest estimator index. No valid proposal carries `prev`
// forward.
JointChoice aggregate_joint(std::span<const Keypoint> proposals, const Keypoint& prev);

// One streaming step over a frame grid. `prev` is the previous frame's
// aggregate (null for the first frame); joints whose previous aggregate is
// invalid fall back to the first-frame rule.
std::vector<JointChoice> aggregate_frame(const ProposalGrid& grid,
                                         const std::vector<Keypoint>* prev);

// Full streaming pass over an ordered series of frame grids.
std::vector<std::vector<JointChoice>> aggregate_series(std::span<const ProposalGrid> frames);

// Pose-level confidence: exp of the negative mean disagreement between the
// aggregated joints and every valid proposal, normalized by head length.
// Only (joint, estimator) pairs with a valid proposal and a non-carried
// aggregated joint contribute, and the mean divides by the number of such
// terms. Returns exactly 0 when nothing is summable or head length is
// undefined; otherwise the value lies in (0, 1].
double confidence(const Pose& aggregated, const std::array<int, kJointCount>& sources,
                  std::span<const Pose> proposals, const AggregationConfig& cfg);

// Pass 2: mark frames retained iff confidence >= gamma (inclusive). Pass-1
// aggregates are left untouched; discarded frames stay in the sequence as gap
// metadata with retained=false.
void filter_sequence(PoseSequence& seq, const AggregationConfig& cfg);

// Per-person proposal timeline. proposals[i][m] is estimator m's pose at
// frames[i], or nullopt when that estimator produced nothing for this person.
struct PersonTrack {
  int person = 0;
  std::vector<int> frames;  // sorted ascending
  std::vector<std::vector<std::optional<Pose>>> proposals;
};

// Streaming two-pass aggregation for one person. Frames are pushed in order;
// finish() runs the confidence filter and returns the sequence. Leading
// frames where no joint resolves are skipped and trailing frames where every
// joint is carried forward are trimmed.
class TrackAggregator {
 public:
  TrackAggregator(int person, const AggregationConfig& cfg);

  void push_frame(int frame, std::span<const std::optional<Pose>> by_estimator);

  // Latest pass-1 aggregate, or nullptr before any joint has resolved.
  const Pose* last_aggregate() const;

  PoseSequence finish(const VideoMeta& meta);

 private:
  int person_;
  AggregationConfig cfg_;
  bool started_ = false;
  Pose prev_{};
  std::vector<AggregatedPose> frames_;
  int last_live_ = -1;  // index of the last frame with at least one fresh joint
};

// Convenience wrapper over TrackAggregator for a fully materialized track.
PoseSequence aggregate_track(const PersonTrack& track, const VideoMeta& meta,
                             const AggregationConfig& cfg);

}  // namespace posefuse
