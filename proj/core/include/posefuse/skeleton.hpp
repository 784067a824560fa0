#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posefuse {

// Canonical joint layout shared by every estimator mapping. The indices are
// the wire order of the canonical JSON schema and must not be reordered.
enum class JointId : int {
  head = 0,
  l_shoulder,
  r_shoulder,
  l_elbow,
  r_elbow,
  l_wrist,
  r_wrist,
  l_hip,
  r_hip,
  l_knee,
  r_knee,
  l_ankle,
  r_ankle,
};

inline constexpr int kJointCount = 13;

const char* joint_name(JointId id) noexcept;
std::optional<JointId> joint_from_name(std::string_view name) noexcept;

// One 2D body landmark in source-video pixel coordinates. When valid is
// false, x/y/score carry no meaning and consumers must skip the point.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double score = 1.0;  // estimator score in [0,1]; 1.0 when the format has none
  bool valid = false;
};

using Pose = std::array<Keypoint, kJointCount>;

// Per-joint provenance of an aggregated pose.
inline constexpr int kCarriedForward = -1;  // reused from the previous frame
inline constexpr int kNoSource = -2;        // joint never resolved

// One estimator's full-body hypothesis for one person in one frame.
// `person` is a detection index at parse time and a track id after
// association.
struct PoseProposal {
  int estimator = 0;
  int frame = 0;
  int person = 0;
  Pose joints{};
};

struct AggregatedPose {
  int frame = 0;
  Pose joints{};
  double confidence = 0.0;
  std::array<int, kJointCount> source{};  // estimator id, kCarriedForward or kNoSource
  bool retained = false;
};

struct VideoMeta {
  std::string video;
  int width = 0;
  int height = 0;
};

struct PoseSequence {
  int person = 0;
  VideoMeta meta;
  std::vector<AggregatedPose> frames;  // sorted strictly by frame, no duplicates
};

// Midpoint of the two shoulders. The canonical layout stores no neck joint,
// yet head-length normalization needs one, so it is derived on demand.
std::optional<Keypoint> neck_position(const Pose& pose);

// Pixel distance between the head keypoint and the derived neck.
std::optional<double> head_length(const Pose& pose);

}  // namespace posefuse
