#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posefuse/skeleton.hpp"

namespace posefuse {

struct PseudoBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

// Tight box over the valid joints, grown by `expand` of its width and height
// (half per side), optionally clipped to the image. An axis with zero extent
// is padded to one pixel before expansion. Needs at least two valid joints.
std::optional<PseudoBox> derive_box(const Pose& pose, double expand = 0.10,
                                    const VideoMeta* clip_to = nullptr);

// Translates the pose so its raw box corner sits at the origin and scales so
// the box height is 1. Removes global translation and uniform scale, which is
// what makes anchor matching placement-free.
std::optional<Pose> normalize_pose_for_similarity(const Pose& pose);

struct AnchorCodebook {
  int anchor_count = 0;
  std::vector<Pose> anchors;  // normalized, all joints valid
  std::string normalization = "bbox_topleft_height1";
  uint64_t seed = 0;
};

struct KmeansStats {
  int iterations = 0;
  std::vector<double> objective;  // sum of squared distances after each assignment
};

// K-means over 26-dim normalized pose vectors with k-means++ seeding, Lloyd
// iterations to an assignment fixpoint (300 max), and empty clusters reseeded
// to the point farthest from their stale center. Incomplete poses are
// skipped; fewer complete poses than `anchor_count` throws
// Error{insufficient_data}. Deterministic for a fixed seed.
AnchorCodebook fit_anchor_codebook(std::span<const Pose> normalized_poses, int anchor_count,
                                   uint64_t seed, KmeansStats* stats = nullptr);

// Dissimilarity: mean per-joint distance between the normalized pose and an
// anchor, over the pose's valid joints.
// Returns (argmin class, its dissimilarity); ties take the lowest index.
std::optional<std::pair<int, double>> assign_anchor_class(const Pose& pose,
                                                          const AnchorCodebook& codebook);

// Cross entropy of a class distribution against a hard label: -ln u[label].
// u must be non-negative and sum to 1 within 1e-6. u[label] == 0 returns
// +infinity.
double classification_loss(std::span<const double> u, int label);

std::string write_codebook_json(const AnchorCodebook& codebook);
AnchorCodebook read_codebook_json(std::string_view bytes);

struct PseudoAnnotationConfig {
  double expand = 0.10;
  double gamma = 0.18;
  int anchor_count = 20;
  uint64_t seed = 0;
};

// Emits one JSON line per retained pose, ordered by (video, person, t), after
// a header line recording gamma, anchor count and seed:
//   {"box":[x0,y0,x1,y1],"class":int,"conf":float,"person":int,"t":int,"video":str}
// Poses without a derivable box or anchor class are skipped.
void export_training_targets(std::span<const PoseSequence> sequences,
                             const AnchorCodebook& codebook,
                             const PseudoAnnotationConfig& cfg, std::ostream& out);

}  // namespace posefuse
