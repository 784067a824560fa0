#include "posefuse/pseudo_gt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json_util.hpp"
#include "posefuse/error.hpp"
#include "posefuse/rng.hpp"

namespace posefuse {

namespace {

using detail::json;
using PoseVec = std::array<double, 2 * kJointCount>;

PoseVec to_vector(const Pose& pose) {
  PoseVec v{};
  for (int j = 0; j < kJointCount; ++j) {
    v[2 * j] = pose[j].x;
    v[2 * j + 1] = pose[j].y;
  }
  return v;
}

Pose to_pose(const PoseVec& v) {
  Pose pose{};
  for (int j = 0; j < kJointCount; ++j) {
    pose[j].x = v[2 * j];
    pose[j].y = v[2 * j + 1];
    pose[j].score = 1.0;
    pose[j].valid = true;
  }
  return pose;
}

double squared_distance(const PoseVec& a, const PoseVec& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

bool complete(const Pose& pose) {
  return std::all_of(pose.begin(), pose.end(), [](const Keypoint& kp) { return kp.valid; });
}

}  // namespace

std::optional<PseudoBox> derive_box(const Pose& pose, double expand, const VideoMeta* clip_to) {
  if (expand < 0.0) throw Error(Errc::invalid_params, "expand must be non-negative");

  double x_min = std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  int valid = 0;
  for (const Keypoint& kp : pose) {
    if (!kp.valid) continue;
    ++valid;
    x_min = std::min(x_min, kp.x);
    x_max = std::max(x_max, kp.x);
    y_min = std::min(y_min, kp.y);
    y_max = std::max(y_max, kp.y);
  }
  if (valid < 2) return std::nullopt;

  // Collinear joints leave a zero-extent axis; pad it to one pixel so the box
  // stays a box.
  if (x_max - x_min <= 0.0) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max - y_min <= 0.0) {
    y_min -= 0.5;
    y_max += 0.5;
  }

  const double pad_x = (x_max - x_min) * expand / 2.0;
  const double pad_y = (y_max - y_min) * expand / 2.0;
  PseudoBox box{x_min - pad_x, y_min - pad_y, x_max + pad_x, y_max + pad_y};

  if (clip_to) {
    box.x_min = std::max(box.x_min, 0.0);
    box.y_min = std::max(box.y_min, 0.0);
    box.x_max = std::min(box.x_max, static_cast<double>(clip_to->width));
    box.y_max = std::min(box.y_max, static_cast<double>(clip_to->height));
  }
  return box;
}

std::optional<Pose> normalize_pose_for_similarity(const Pose& pose) {
  const auto box = derive_box(pose, 0.0, nullptr);
  if (!box) return std::nullopt;
  const double scale = box->height();  // >= 1 px after degenerate padding
  Pose out = pose;
  for (Keypoint& kp : out) {
    if (!kp.valid) continue;
    kp.x = (kp.x - box->x_min) / scale;
    kp.y = (kp.y - box->y_min) / scale;
  }
  return out;
}

AnchorCodebook fit_anchor_codebook(std::span<const Pose> normalized_poses, int anchor_count,
                                   uint64_t seed, KmeansStats* stats) {
  if (anchor_count < 1) throw Error(Errc::invalid_params, "anchor_count must be positive");

  std::vector<PoseVec> data;
  for (const Pose& pose : normalized_poses) {
    if (complete(pose)) data.push_back(to_vector(pose));
  }
  const int n = static_cast<int>(data.size());
  if (n < anchor_count)
    throw Error(Errc::insufficient_data, "need at least " + std::to_string(anchor_count) +
                                             " complete poses, have " + std::to_string(n));

  Rng rng(seed);
  std::vector<PoseVec> centers;
  centers.reserve(anchor_count);

  // k-means++ seeding: subsequent centers drawn proportionally to the squared
  // distance from the nearest chosen one.
  centers.push_back(data[rng.next_int(n)]);
  std::vector<double> d2(n);
  for (int k = 1; k < anchor_count; ++k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = squared_distance(data[i], centers[0]);
      for (size_t c = 1; c < centers.size(); ++c)
        best = std::min(best, squared_distance(data[i], centers[c]));
      d2[i] = best;
      total += best;
    }
    int pick = 0;
    if (total > 0.0) {
      const double r = rng.next_double() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > r) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(data[pick]);
  }

  // Lloyd iterations to an assignment fixpoint.
  constexpr int kMaxIterations = 300;
  std::vector<int> assign(n, -1);
  std::vector<int> prev_assign;
  int iterations = 0;
  std::vector<double> objective;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      int best_c = 0;
      double best = squared_distance(data[i], centers[0]);
      for (int c = 1; c < anchor_count; ++c) {
        const double d = squared_distance(data[i], centers[c]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      assign[i] = best_c;
      obj += best;
    }
    objective.push_back(obj);
    iterations = iter + 1;
    if (assign == prev_assign) break;
    prev_assign = assign;

    // Means are accumulated relative to the cluster's first member, which
    // keeps a cluster of identical points exactly on that point.
    std::vector<PoseVec> sums(anchor_count, PoseVec{});
    std::vector<int> counts(anchor_count, 0);
    std::vector<int> reference(anchor_count, -1);
    for (int i = 0; i < n; ++i) {
      const int c = assign[i];
      if (reference[c] < 0) reference[c] = i;
      ++counts[c];
      for (size_t d = 0; d < data[i].size(); ++d)
        sums[c][d] += data[i][d] - data[reference[c]][d];
    }
    for (int c = 0; c < anchor_count; ++c) {
      if (counts[c] == 0) continue;
      for (size_t d = 0; d < sums[c].size(); ++d)
        centers[c][d] = data[reference[c]][d] + sums[c][d] / counts[c];
    }
    // An empty cluster is reseeded to the point farthest from its stale
    // center.
    for (int c = 0; c < anchor_count; ++c) {
      if (counts[c] > 0) continue;
      int far = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = squared_distance(data[i], centers[c]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[c] = data[far];
    }
  }

  if (stats) {
    stats->iterations = iterations;
    stats->objective = std::move(objective);
  }

  AnchorCodebook codebook;
  codebook.anchor_count = anchor_count;
  codebook.seed = seed;
  for (const PoseVec& center : centers) codebook.anchors.push_back(to_pose(center));
  return codebook;
}

std::optional<std::pair<int, double>> assign_anchor_class(const Pose& pose,
                                                          const AnchorCodebook& codebook) {
  if (codebook.anchor_count < 1 ||
      codebook.anchors.size() != static_cast<size_t>(codebook.anchor_count))
    throw Error(Errc::invalid_params, "codebook is not fitted");
  const auto normalized = normalize_pose_for_similarity(pose);
  if (!normalized) return std::nullopt;

  int best = -1;
  double best_s = 0.0;
  for (int b = 0; b < codebook.anchor_count; ++b) {
    double sum = 0.0;
    int joints = 0;
    for (int j = 0; j < kJointCount; ++j) {
      if (!(*normalized)[j].valid) continue;
      sum += std::hypot((*normalized)[j].x - codebook.anchors[b][j].x,
                        (*normalized)[j].y - codebook.anchors[b][j].y);
      ++joints;
    }
    const double s = sum / joints;  // joints >= 2 whenever a box exists
    if (best < 0 || s < best_s) {
      best = b;
      best_s = s;
    }
  }
  return std::make_pair(best, best_s);
}

double classification_loss(std::span<const double> u, int label) {
  if (label < 0 || label >= static_cast<int>(u.size()))
    throw Error(Errc::invalid_params, "label out of range");
  double sum = 0.0;
  for (double p : u) {
    if (p < 0.0 || !std::isfinite(p))
      throw Error(Errc::invalid_distribution, "probabilities must be non-negative and finite");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error(Errc::invalid_distribution, "probabilities must sum to 1");
  if (u[label] == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(u[label]);
}

std::string write_codebook_json(const AnchorCodebook& codebook) {
  json doc;
  doc["count"] = codebook.anchor_count;
  doc["normalization"] = codebook.normalization;
  doc["seed"] = codebook.seed;
  json anchors = json::array();
  for (const Pose& anchor : codebook.anchors) {
    json points = json::array();
    for (const Keypoint& kp : anchor) points.push_back(json::array({kp.x, kp.y}));
    anchors.push_back(std::move(points));
  }
  doc["anchors"] = std::move(anchors);
  return doc.dump();
}

AnchorCodebook read_codebook_json(std::string_view bytes) {
  const json doc = detail::parse_json(bytes);
  if (!doc.is_object() || !doc.contains("count") || !doc.contains("anchors"))
    throw Error(Errc::format_mismatch, "codebook needs count and anchors");
  AnchorCodebook codebook;
  codebook.anchor_count = doc["count"].get<int>();
  if (doc.contains("normalization")) codebook.normalization = doc["normalization"].get<std::string>();
  if (doc.contains("seed")) codebook.seed = doc["seed"].get<uint64_t>();
  for (const json& points : doc["anchors"]) {
    if (!points.is_array() || points.size() != kJointCount)
      throw Error(Errc::format_mismatch, "anchors must hold 13 points");
    Pose anchor{};
    for (int j = 0; j < kJointCount; ++j) {
      anchor[j].x = points[j][0].get<double>();
      anchor[j].y = points[j][1].get<double>();
      anchor[j].score = 1.0;
      anchor[j].valid = true;
    }
    codebook.anchors.push_back(anchor);
  }
  if (codebook.anchors.size() != static_cast<size_t>(codebook.anchor_count))
    throw Error(Errc::format_mismatch, "anchor count disagrees with the anchors array");
  return codebook;
}

void export_training_targets(std::span<const PoseSequence> sequences,
                             const AnchorCodebook& codebook,
                             const PseudoAnnotationConfig& cfg, std::ostream& out) {
  json header;
  header["type"] = "header";
  header["gamma"] = cfg.gamma;
  header["anchors"] = cfg.anchor_count;
  header["seed"] = cfg.seed;
  header["expand"] = cfg.expand;
  header["normalization"] = codebook.normalization;
  out << header.dump() << '\n';

  // Deterministic record order regardless of input ordering.
  std::vector<const PoseSequence*> ordered;
  for (const PoseSequence& seq : sequences) ordered.push_back(&seq);
  std::sort(ordered.begin(), ordered.end(), [](const PoseSequence* a, const PoseSequence* b) {
    if (a->meta.video != b->meta.video) return a->meta.video < b->meta.video;
    return a->person < b->person;
  });

  for (const PoseSequence* seq : ordered) {
    for (const AggregatedPose& frame : seq->frames) {
      if (!frame.retained) continue;
      const auto box = derive_box(frame.joints, cfg.expand, &seq->meta);
      if (!box) continue;
      const auto assigned = assign_anchor_class(frame.joints, codebook);
      if (!assigned) continue;
      json record;
      record["video"] = seq->meta.video;
      record["person"] = seq->person;
      record["t"] = frame.frame;
      record["box"] = json::array({box->x_min, box->y_min, box->x_max, box->y_max});
      record["class"] = assigned->first;
      record["conf"] = frame.confidence;
      out << record.dump() << '\n';
    }
  }
}

}  // namespace posefuse
