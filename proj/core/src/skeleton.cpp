#include "posefuse/skeleton.hpp"

#include <cmath>

#include "posefuse/error.hpp"

namespace posefuse {

namespace {

constexpr const char* kJointNames[kJointCount] = {
    "head",    "l_shoulder", "r_shoulder", "l_elbow", "r_elbow", "l_wrist", "r_wrist",
    "l_hip",   "r_hip",      "l_knee",     "r_knee",  "l_ankle", "r_ankle",
};

}  // namespace

const char* joint_name(JointId id) noexcept { return kJointNames[static_cast<int>(id)]; }

std::optional<JointId> joint_from_name(std::string_view name) noexcept {
  for (int i = 0; i < kJointCount; ++i) {
    if (name == kJointNames[i]) return static_cast<JointId>(i);
  }
  return std::nullopt;
}

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "parse error";
    case Errc::format_mismatch: return "format mismatch";
    case Errc::resolution_mismatch: return "resolution mismatch";
    case Errc::insufficient_data: return "insufficient data";
    case Errc::empty_eval: return "empty evaluation";
    case Errc::alignment_error: return "alignment error";
    case Errc::invalid_distribution: return "invalid distribution";
    case Errc::invalid_params: return "invalid parameters";
    case Errc::io_error: return "io error";
    case Errc::usage_error: return "usage error";
  }
  return "error";
}

std::optional<Keypoint> neck_position(const Pose& pose) {
  const Keypoint& l = pose[static_cast<int>(JointId::l_shoulder)];
  const Keypoint& r = pose[static_cast<int>(JointId::r_shoulder)];
  if (!l.valid || !r.valid) return std::nullopt;
  Keypoint neck;
  neck.x = 0.5 * (l.x + r.x);
  neck.y = 0.5 * (l.y + r.y);
  neck.score = 0.5 * (l.score + r.score);
  neck.valid = true;
  return neck;
}

std::optional<double> head_length(const Pose& pose) {
  const Keypoint& head = pose[static_cast<int>(JointId::head)];
  if (!head.valid) return std::nullopt;
  const auto neck = neck_position(pose);
  if (!neck) return std::nullopt;
  return std::hypot(head.x - neck->x, head.y - neck->y);
}

}  // namespace posefuse
