#include "posefuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "posefuse/error.hpp"

namespace posefuse {

void EvalAccumulator::add(const PoseSequence& pred, const PoseSequence& gt) {
  std::map<int, const AggregatedPose*> pred_by_t;
  for (const AggregatedPose& frame : pred.frames) pred_by_t[frame.frame] = &frame;

  for (const AggregatedPose& gt_frame : gt.frames) {
    const auto hl = head_length(gt_frame.joints);
    if (!hl || *hl <= 0.0) continue;  // nothing to normalize against

    const auto it = pred_by_t.find(gt_frame.frame);
    const AggregatedPose* pred_frame = it == pred_by_t.end() ? nullptr : it->second;
    if (pred_frame) ++matched_frames_;

    for (int j = 0; j < kJointCount; ++j) {
      const Keypoint& gt_kp = gt_frame.joints[j];
      if (!gt_kp.valid) continue;
      ++evaluated_;
      ++joint_total_[j];
      const Keypoint* pred_kp = pred_frame ? &pred_frame->joints[j] : nullptr;
      if (!pred_kp || !pred_kp->valid) {
        ++missing_;  // a PCKh failure, excluded from the MPJPE mean
        continue;
      }
      const double err = std::hypot(pred_kp->x - gt_kp.x, pred_kp->y - gt_kp.y) / *hl;
      err_sum_ += err;
      ++err_n_;
      if (err <= alpha_) {
        ++within_;
        ++joint_within_[j];
      }
    }
  }
}

EvalReport EvalAccumulator::report() const {
  if (evaluated_ == 0) throw Error(Errc::empty_eval, "no evaluable (frame, joint) pairs");
  EvalReport report;
  report.pckh = static_cast<double>(within_) / static_cast<double>(evaluated_);
  report.mpjpe = err_n_ > 0 ? err_sum_ / static_cast<double>(err_n_) : 0.0;
  report.miss_rate = static_cast<double>(missing_) / static_cast<double>(evaluated_);
  for (int j = 0; j < kJointCount; ++j) {
    report.per_joint_pckh[j] =
        joint_total_[j] > 0
            ? static_cast<double>(joint_within_[j]) / static_cast<double>(joint_total_[j])
            : 0.0;
  }
  report.evaluated_pairs = evaluated_;
  report.within_pairs = within_;
  report.missing_pairs = missing_;
  report.matched_frames = matched_frames_;
  return report;
}

std::vector<double> EvalConfig::default_bin_edges() {
  std::vector<double> edges;
  for (int i = 0; i <= 10; ++i) edges.push_back(0.5 * i);
  return edges;
}

void EvalConfig::validate() const {
  if (!(alpha > 0.0)) throw Error(Errc::invalid_params, "alpha must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw Error(Errc::invalid_params, "gamma must lie in (0, 1]");
  if (bin_edges.empty()) throw Error(Errc::invalid_params, "bin_edges must not be empty");
  for (size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1]))
      throw Error(Errc::invalid_params, "bin edges must be strictly increasing");
  }
}

double pckh(const PoseSequence& pred, const PoseSequence& gt, double alpha) {
  return evaluate_pair(pred, gt, alpha).pckh;
}

MpjpeResult mpjpe_normalized(const PoseSequence& pred, const PoseSequence& gt) {
  const EvalReport report = evaluate_pair(pred, gt, 0.5);
  MpjpeResult r;
  r.mpjpe = report.mpjpe;
  r.miss_rate = report.miss_rate;
  r.evaluated = report.evaluated_pairs - report.missing_pairs;
  r.missing = report.missing_pairs;
  return r;
}

EvalReport evaluate_pair(const PoseSequence& pred, const PoseSequence& gt, double alpha) {
  EvalAccumulator acc(alpha);
  acc.add(pred, gt);
  return acc.report();
}

EvalReport evaluate_sequences(std::span<const PoseSequence> pred, std::span<const PoseSequence> gt,
                              double alpha) {
  std::map<int, const PoseSequence*> pred_by_person;
  for (const PoseSequence& seq : pred) pred_by_person[seq.person] = &seq;

  EvalAccumulator acc(alpha);
  const PoseSequence empty;
  for (const PoseSequence& gt_seq : gt) {
    const auto it = pred_by_person.find(gt_seq.person);
    acc.add(it == pred_by_person.end() ? empty : *it->second, gt_seq);
  }
  return acc.report();
}

long ConfidenceHistogram::total() const {
  long n = 0;
  for (long v : retained) n += v;
  for (long v : discarded) n += v;
  return n;
}

ConfidenceHistogram confidence_error_histogram(std::span<const PoseSequence> pred,
                                               std::span<const PoseSequence> gt,
                                               const EvalConfig& cfg) {
  cfg.validate();
  ConfidenceHistogram hist;
  hist.edges = cfg.bin_edges;
  hist.retained.assign(cfg.bin_edges.size(), 0);
  hist.discarded.assign(cfg.bin_edges.size(), 0);

  std::map<int, const PoseSequence*> gt_by_person;
  for (const PoseSequence& seq : gt) gt_by_person[seq.person] = &seq;

  long binned = 0;
  for (const PoseSequence& pred_seq : pred) {
    const auto person_it = gt_by_person.find(pred_seq.person);
    if (person_it == gt_by_person.end()) continue;
    std::map<int, const AggregatedPose*> gt_by_t;
    for (const AggregatedPose& frame : person_it->second->frames) gt_by_t[frame.frame] = &frame;

    for (const AggregatedPose& pose : pred_seq.frames) {
      const auto frame_it = gt_by_t.find(pose.frame);
      if (frame_it == gt_by_t.end()) continue;
      const AggregatedPose& gt_frame = *frame_it->second;
      const auto hl = head_length(gt_frame.joints);
      if (!hl || *hl <= 0.0) continue;

      double err_sum = 0.0;
      int err_n = 0;
      for (int j = 0; j < kJointCount; ++j) {
        if (!pose.joints[j].valid || !gt_frame.joints[j].valid) continue;
        err_sum += std::hypot(pose.joints[j].x - gt_frame.joints[j].x,
                              pose.joints[j].y - gt_frame.joints[j].y) /
                   *hl;
        ++err_n;
      }
      if (err_n == 0) continue;
      const double err = err_sum / err_n;

      const auto upper = std::upper_bound(hist.edges.begin(), hist.edges.end(), err);
      int bin = static_cast<int>(upper - hist.edges.begin()) - 1;
      bin = std::clamp(bin, 0, static_cast<int>(hist.edges.size()) - 1);
      if (pose.confidence >= cfg.gamma) {
        ++hist.retained[bin];
      } else {
        ++hist.discarded[bin];
      }
      ++binned;
    }
  }
  if (binned == 0) throw Error(Errc::empty_eval, "no poses with computable error");
  return hist;
}

}  // namespace posefuse
