#include "posefuse/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_util.hpp"
#include "posefuse/error.hpp"

namespace posefuse {

namespace {

using detail::json;

constexpr int kOpenPoseJoints = 18;
constexpr int kCocoJoints = 17;

int J(JointId id) { return static_cast<int>(id); }

// OpenPose 18-joint body order: nose, neck, r_shoulder, r_elbow, r_wrist,
// l_shoulder, l_elbow, l_wrist, r_hip, r_knee, r_ankle, l_hip, l_knee,
// l_ankle, r_eye, l_eye, r_ear, l_ear. Neck, eyes and ears have no canonical
// slot.
std::vector<int> openpose18_map() {
  return {J(JointId::head),    kDropJoint,          J(JointId::r_shoulder),
          J(JointId::r_elbow), J(JointId::r_wrist), J(JointId::l_shoulder),
          J(JointId::l_elbow), J(JointId::l_wrist), J(JointId::r_hip),
          J(JointId::r_knee),  J(JointId::r_ankle), J(JointId::l_hip),
          J(JointId::l_knee),  J(JointId::l_ankle), kDropJoint,
          kDropJoint,          kDropJoint,          kDropJoint};
}

// COCO 17-joint order: nose, l_eye, r_eye, l_ear, r_ear, then shoulders,
// elbows, wrists, hips, knees, ankles in left/right pairs.
std::vector<int> coco17_map() {
  return {J(JointId::head),    kDropJoint,          kDropJoint,
          kDropJoint,          kDropJoint,          J(JointId::l_shoulder),
          J(JointId::r_shoulder), J(JointId::l_elbow), J(JointId::r_elbow),
          J(JointId::l_wrist), J(JointId::r_wrist), J(JointId::l_hip),
          J(JointId::r_hip),   J(JointId::l_knee),  J(JointId::r_knee),
          J(JointId::l_ankle), J(JointId::r_ankle)};
}

std::vector<int> identity_map() {
  std::vector<int> map(kJointCount);
  for (int i = 0; i < kJointCount; ++i) map[i] = i;
  return map;
}

int source_joint_count(FormatKind kind) {
  switch (kind) {
    case FormatKind::openpose18_json: return kOpenPoseJoints;
    case FormatKind::coco17_json: return kCocoJoints;
    case FormatKind::canonical_json: return kJointCount;
  }
  return 0;
}

// Flat [x, y, score] triplets onto the canonical layout. Score zero means the
// estimator saw nothing there.
Pose map_triplets(const json& flat, const EstimatorFormat& format) {
  const int n = source_joint_count(format.kind);
  if (!flat.is_array() || static_cast<int>(flat.size()) != 3 * n)
    throw Error(Errc::format_mismatch, "expected " + std::to_string(3 * n) +
                                           " keypoint values, got " + std::to_string(flat.size()));
  Pose pose{};
  for (int s = 0; s < n; ++s) {
    const int target = format.joint_map[s];
    if (target == kDropJoint) continue;
    if (!flat[3 * s].is_number() || !flat[3 * s + 1].is_number() || !flat[3 * s + 2].is_number())
      throw Error(Errc::format_mismatch, "keypoint values must be numbers");
    const double score = flat[3 * s + 2].get<double>();
    Keypoint& kp = pose[target];
    kp.x = flat[3 * s].get<double>();
    kp.y = flat[3 * s + 1].get<double>();
    kp.score = std::clamp(score, 0.0, 1.0);
    kp.valid = score > 0.0;
  }
  return pose;
}

void add_frame(std::map<int, std::vector<PoseProposal>>& by_frame, int t, PoseProposal proposal) {
  if (t < 0) throw Error(Errc::format_mismatch, "negative frame index " + std::to_string(t));
  proposal.frame = t;
  proposal.person = static_cast<int>(by_frame[t].size());  // detection index
  by_frame[t].push_back(std::move(proposal));
}

ParsedEstimatorFile parse_openpose18(const json& root, const EstimatorFormat& format,
                                     int estimator) {
  ParsedEstimatorFile out;
  const json* frames = &root;
  if (root.is_object()) {
    if (root.contains("resolution")) out.resolution = detail::resolution_from_json(root["resolution"]);
    if (!root.contains("frames"))
      throw Error(Errc::format_mismatch, "expected a frames array");
    frames = &root["frames"];
  }
  if (!frames->is_array()) throw Error(Errc::format_mismatch, "expected a frames array");

  std::map<int, std::vector<PoseProposal>> by_frame;
  std::map<int, bool> seen;
  for (const json& entry : *frames) {
    if (!entry.is_object() || !entry.contains("frame") || !entry.contains("people"))
      throw Error(Errc::format_mismatch, "frame entries need frame and people fields");
    const int t = entry["frame"].get<int>();
    if (seen[t]) throw Error(Errc::format_mismatch, "duplicate frame " + std::to_string(t));
    seen[t] = true;
    by_frame[t];  // materialize even when people is empty
    for (const json& person : entry["people"]) {
      if (!person.contains("pose_keypoints_2d"))
        throw Error(Errc::format_mismatch, "person entries need pose_keypoints_2d");
      PoseProposal p;
      p.estimator = estimator;
      p.joints = map_triplets(person["pose_keypoints_2d"], format);
      add_frame(by_frame, t, std::move(p));
    }
  }

  const int last = by_frame.empty() ? -1 : by_frame.rbegin()->first;
  out.frames.resize(last + 1);
  for (int t = 0; t <= last; ++t) out.frames[t].frame = t;
  for (auto& [t, proposals] : by_frame) out.frames[t].proposals = std::move(proposals);
  return out;
}

ParsedEstimatorFile parse_coco17(const json& root, const EstimatorFormat& format, int estimator) {
  ParsedEstimatorFile out;
  const json* detections = &root;
  if (root.is_object()) {
    if (root.contains("resolution")) out.resolution = detail::resolution_from_json(root["resolution"]);
    if (!root.contains("annotations"))
      throw Error(Errc::format_mismatch, "expected an annotations array");
    detections = &root["annotations"];
  }
  if (!detections->is_array()) throw Error(Errc::format_mismatch, "expected a detections array");

  std::map<int, std::vector<PoseProposal>> by_frame;
  for (const json& det : *detections) {
    if (!det.is_object() || !det.contains("image_id") || !det.contains("keypoints"))
      throw Error(Errc::format_mismatch, "detections need image_id and keypoints fields");
    const int t = det["image_id"].get<int>();
    PoseProposal p;
    p.estimator = estimator;
    p.joints = map_triplets(det["keypoints"], format);
    add_frame(by_frame, t, std::move(p));
  }

  const int last = by_frame.empty() ? -1 : by_frame.rbegin()->first;
  out.frames.resize(last + 1);
  for (int t = 0; t <= last; ++t) out.frames[t].frame = t;
  for (auto& [t, proposals] : by_frame) out.frames[t].proposals = std::move(proposals);
  return out;
}

ParsedEstimatorFile parse_canonical(const json& root, const EstimatorFormat& format,
                                    int estimator) {
  ParsedEstimatorFile out;
  if (!root.is_object() || !root.contains("frames"))
    throw Error(Errc::format_mismatch, "expected an object with a frames array");
  if (root.contains("resolution")) out.resolution = detail::resolution_from_json(root["resolution"]);

  std::map<int, std::vector<PoseProposal>> by_frame;
  std::map<int, bool> seen;
  for (const json& entry : root["frames"]) {
    if (!entry.is_object() || !entry.contains("t") || !entry.contains("people"))
      throw Error(Errc::format_mismatch, "frame entries need t and people fields");
    const int t = entry["t"].get<int>();
    if (seen[t]) throw Error(Errc::format_mismatch, "duplicate frame " + std::to_string(t));
    seen[t] = true;
    by_frame[t];
    for (const json& person : entry["people"]) {
      if (!person.contains("joints"))
        throw Error(Errc::format_mismatch, "person entries need a joints array");
      const Pose mapped = detail::joints_from_json(person["joints"]);
      PoseProposal p;
      p.estimator = estimator;
      // Identity map unless the caller remapped canonical slots.
      Pose pose{};
      for (int s = 0; s < kJointCount; ++s) {
        const int target = format.joint_map[s];
        if (target != kDropJoint) pose[target] = mapped[s];
      }
      p.joints = pose;
      add_frame(by_frame, t, std::move(p));
    }
  }

  const int last = by_frame.empty() ? -1 : by_frame.rbegin()->first;
  out.frames.resize(last + 1);
  for (int t = 0; t <= last; ++t) out.frames[t].frame = t;
  for (auto& [t, proposals] : by_frame) out.frames[t].proposals = std::move(proposals);
  return out;
}

}  // namespace

const char* format_kind_name(FormatKind kind) noexcept {
  switch (kind) {
    case FormatKind::openpose18_json: return "openpose18";
    case FormatKind::coco17_json: return "coco17";
    case FormatKind::canonical_json: return "canonical";
  }
  return "unknown";
}

std::optional<FormatKind> format_kind_from_name(std::string_view name) noexcept {
  if (name == "openpose18") return FormatKind::openpose18_json;
  if (name == "coco17") return FormatKind::coco17_json;
  if (name == "canonical") return FormatKind::canonical_json;
  return std::nullopt;
}

EstimatorFormat EstimatorFormat::standard(FormatKind kind) {
  EstimatorFormat format;
  format.kind = kind;
  switch (kind) {
    case FormatKind::openpose18_json: format.joint_map = openpose18_map(); break;
    case FormatKind::coco17_json: format.joint_map = coco17_map(); break;
    case FormatKind::canonical_json: format.joint_map = identity_map(); break;
  }
  return format;
}

void EstimatorFormat::validate() const {
  if (static_cast<int>(joint_map.size()) != source_joint_count(kind))
    throw Error(Errc::invalid_params, "joint_map size does not match the format");
  for (int target : joint_map) {
    if (target != kDropJoint && (target < 0 || target >= kJointCount))
      throw Error(Errc::invalid_params, "joint_map target out of range");
  }
}

ParsedEstimatorFile parse_estimator_file(std::string_view bytes, const EstimatorFormat& format,
                                         int estimator) {
  format.validate();
  const json root = detail::parse_json(bytes);
  switch (format.kind) {
    case FormatKind::openpose18_json: return parse_openpose18(root, format, estimator);
    case FormatKind::coco17_json: return parse_coco17(root, format, estimator);
    case FormatKind::canonical_json: return parse_canonical(root, format, estimator);
  }
  throw Error(Errc::invalid_params, "unknown format kind");
}

std::vector<FrameBundle> parse_estimator_output(std::string_view bytes,
                                                const EstimatorFormat& format, int estimator) {
  return parse_estimator_file(bytes, format, estimator).frames;
}

double AssociationConfig::default_tau(int width, int height) {
  return 0.5 * std::hypot(static_cast<double>(width), static_cast<double>(height)) / 10.0;
}

std::optional<double> mean_joint_distance(const Pose& a, const Pose& b) {
  double sum = 0.0;
  int n = 0;
  for (int j = 0; j < kJointCount; ++j) {
    if (!a[j].valid || !b[j].valid) continue;
    sum += std::hypot(a[j].x - b[j].x, a[j].y - b[j].y);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<PersonAssignment> associate_persons(const FrameBundle& bundle,
                                                std::span<const TrackedPose> tracked,
                                                int estimator_count,
                                                const AssociationConfig& cfg) {
  // Canonical processing order, independent of how the bundle was assembled.
  std::vector<const PoseProposal*> props;
  props.reserve(bundle.proposals.size());
  for (const PoseProposal& p : bundle.proposals) props.push_back(&p);
  std::sort(props.begin(), props.end(), [](const PoseProposal* a, const PoseProposal* b) {
    if (a->estimator != b->estimator) return a->estimator < b->estimator;
    return a->person < b->person;
  });

  std::vector<bool> taken(props.size(), false);
  std::vector<PersonAssignment> result;

  auto best_match = [&](int estimator, const Pose& reference) -> int {
    int best = -1;
    double best_d = 0.0;
    for (int i = 0; i < static_cast<int>(props.size()); ++i) {
      if (taken[i] || props[i]->estimator != estimator) continue;
      const auto d = mean_joint_distance(props[i]->joints, reference);
      if (!d || *d > cfg.tau_match) continue;
      if (best < 0 || *d < best_d) {
        best = i;
        best_d = *d;
      }
    }
    return best;
  };

  int next_person = 0;
  for (const TrackedPose& person : tracked) {
    next_person = std::max(next_person, person.person + 1);
    PersonAssignment pa;
    pa.person = person.person;
    pa.by_estimator.resize(estimator_count);
    for (int m = 0; m < estimator_count; ++m) {
      const int pick = best_match(m, person.joints);
      if (pick >= 0) {
        taken[pick] = true;
        pa.by_estimator[m] = *props[pick];
      }
    }
    result.push_back(std::move(pa));
  }

  // Leftovers seed new persons; the seed is the first untaken proposal in
  // (estimator, detection) order and pulls in at most one proposal from each
  // other estimator within the gate.
  for (int i = 0; i < static_cast<int>(props.size()); ++i) {
    if (taken[i]) continue;
    taken[i] = true;
    PersonAssignment pa;
    pa.person = next_person++;
    pa.is_new = true;
    pa.by_estimator.resize(estimator_count);
    pa.by_estimator[props[i]->estimator] = *props[i];
    for (int m = 0; m < estimator_count; ++m) {
      if (m == props[i]->estimator) continue;
      const int pick = best_match(m, props[i]->joints);
      if (pick >= 0) {
        taken[pick] = true;
        pa.by_estimator[m] = *props[pick];
      }
    }
    result.push_back(std::move(pa));
  }
  return result;
}

}  // namespace posefuse
