#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posefuse/skeleton.hpp"

namespace posefuse {

enum class FormatKind {
  openpose18_json,  // 18-joint body model, per-frame people arrays
  coco17_json,      // 17-joint COCO keypoint detections, flat list
  canonical_json,   // this toolkit's 13-joint proposal schema
};

const char* format_kind_name(FormatKind kind) noexcept;
std::optional<FormatKind> format_kind_from_name(std::string_view name) noexcept;

inline constexpr int kDropJoint = -1;

// Maps a source format's joint indices onto the canonical layout. Entries are
// canonical joint indices or kDropJoint for parts the layout does not keep.
struct EstimatorFormat {
  FormatKind kind = FormatKind::canonical_json;
  std::vector<int> joint_map;

  static EstimatorFormat standard(FormatKind kind);
  void validate() const;  // throws Error{invalid_params}
};

// All proposals of every estimator for one frame.
struct FrameBundle {
  int frame = 0;
  std::vector<PoseProposal> proposals;
};

// Parses one estimator file into per-frame bundles in canonical joint order.
// Frames absent from the input become empty bundles so the result is always
// contiguous from 0. Unmapped and zero-score joints come back valid=false.
// `estimator` is stamped on every proposal; `person` is the detection index
// within its frame. Throws Error{parse_error} with a byte offset on bad
// syntax and Error{format_mismatch} on wrong joint counts.
std::vector<FrameBundle> parse_estimator_output(std::string_view bytes,
                                                const EstimatorFormat& format,
                                                int estimator = 0);

// File-level variant that also surfaces the resolution header when the file
// carries one.
struct ParsedEstimatorFile {
  std::optional<std::array<int, 2>> resolution;
  std::vector<FrameBundle> frames;
};

ParsedEstimatorFile parse_estimator_file(std::string_view bytes, const EstimatorFormat& format,
                                         int estimator = 0);

struct AssociationConfig {
  double tau_match = 0.0;  // mean-distance gate in pixels

  static double default_tau(int width, int height);  // 0.5 * diag / 10
};

// Last pass-1 aggregate of a person already being tracked.
struct TrackedPose {
  int person = 0;
  Pose joints{};
};

struct PersonAssignment {
  int person = 0;
  bool is_new = false;
  std::vector<std::optional<PoseProposal>> by_estimator;  // size = estimator count
};

// Greedy one-to-one matching of a frame's proposals to tracked persons, then
// grouping of leftovers into new persons. Every tracked person appears in the
// result (possibly with all slots empty); each proposal is assigned at most
// once. New person ids continue after the highest tracked id. Deterministic:
// ties break on lowest estimator index, then lowest detection index.
std::vector<PersonAssignment> associate_persons(const FrameBundle& bundle,
                                                std::span<const TrackedPose> tracked,
                                                int estimator_count,
                                                const AssociationConfig& cfg);

// Mean distance over joints valid in both poses; nullopt when they share none.
std::optional<double> mean_joint_distance(const Pose& a, const Pose& b);

}  // namespace posefuse
