#pragma once

#include <array>
#include <span>
#include <vector>

#include "posefuse/skeleton.hpp"

namespace posefuse {

struct EvalConfig {
  double alpha = 0.5;              // PCKh threshold multiplier
  std::vector<double> bin_edges;   // histogram bin edges in head-length units
  double gamma = 0.18;             // retained/discarded split for the histogram

  static std::vector<double> default_bin_edges();  // 0,1,...,10
  void validate() const;                           // throws Error{invalid_params}
};

struct EvalReport {
  double pckh = 0.0;       // fraction of gt-valid joints within alpha * head length
  double mpjpe = 0.0;      // mean error over both-valid joints, in head lengths
  double miss_rate = 0.0;  // gt-valid joints with no prediction / gt-valid joints
  std::array<double, kJointCount> per_joint_pckh{};
  long evaluated_pairs = 0;  // gt-valid (frame, joint) pairs
  long within_pairs = 0;
  long missing_pairs = 0;
  long matched_frames = 0;
};

// Streaming accumulator over (pred, gt) sequence pairs, so reports can pool
// whole directories of videos. report() throws Error{empty_eval} when nothing
// evaluable was added.
class EvalAccumulator {
 public:
  explicit EvalAccumulator(double alpha) : alpha_(alpha) {}

  void add(const PoseSequence& pred, const PoseSequence& gt);
  EvalReport report() const;

 private:
  double alpha_;
  long evaluated_ = 0;
  long within_ = 0;
  long missing_ = 0;
  long matched_frames_ = 0;
  double err_sum_ = 0.0;
  long err_n_ = 0;
  std::array<long, kJointCount> joint_within_{};
  std::array<long, kJointCount> joint_total_{};
};

// Joint-level accuracy against ground truth, frames aligned by t. Head length
// comes from the ground-truth pose; frames where it is undefined are skipped.
// A gt-valid joint with no valid prediction counts as a PCKh failure and is
// excluded from the MPJPE mean (reported via miss_rate instead). Throws
// Error{empty_eval} when no frame aligns.
double pckh(const PoseSequence& pred, const PoseSequence& gt, double alpha);

struct MpjpeResult {
  double mpjpe = 0.0;
  double miss_rate = 0.0;
  long evaluated = 0;
  long missing = 0;
};

MpjpeResult mpjpe_normalized(const PoseSequence& pred, const PoseSequence& gt);

// Full report for one (pred, gt) sequence pair; same conventions as above.
EvalReport evaluate_pair(const PoseSequence& pred, const PoseSequence& gt, double alpha);

// Multi-person wrapper: persons align by id, gt persons with no counterpart
// count as all-missing, extra predicted persons are ignored.
EvalReport evaluate_sequences(std::span<const PoseSequence> pred, std::span<const PoseSequence> gt,
                              double alpha);

// Per-pose error histogram split by the confidence threshold. Bin k covers
// [edges[k], edges[k+1]); the last bin absorbs everything past the final
// edge, so retained/discarded each have edges.size() entries. Changing gamma
// repartitions the split without touching per-bin totals.
struct ConfidenceHistogram {
  std::vector<double> edges;
  std::vector<long> retained;   // poses with confidence >= gamma
  std::vector<long> discarded;  // poses with confidence < gamma

  long total() const;
};

ConfidenceHistogram confidence_error_histogram(std::span<const PoseSequence> pred,
                                               std::span<const PoseSequence> gt,
                                               const EvalConfig& cfg);

}  // namespace posefuse
