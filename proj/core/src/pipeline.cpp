#include "posefuse/pipeline.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "posefuse/error.hpp"

namespace posefuse {

namespace {

// Picks each estimator's first detection of the frame, ignoring the rest.
std::vector<std::optional<Pose>> primary_slots(const FrameBundle& bundle, int estimator_count) {
  std::vector<std::optional<Pose>> slots(estimator_count);
  std::vector<int> best(estimator_count, -1);
  for (const PoseProposal& p : bundle.proposals) {
    if (p.estimator < 0 || p.estimator >= estimator_count) continue;
    if (best[p.estimator] < 0 || p.person < best[p.estimator]) {
      best[p.estimator] = p.person;
      slots[p.estimator] = p.joints;
    }
  }
  return slots;
}

}  // namespace

VideoAggregation aggregate_video(std::span<const std::vector<FrameBundle>> per_estimator,
                                 const VideoMeta& meta, const AggregationConfig& cfg,
                                 const AssociationConfig& assoc, PersonMode mode) {
  const int estimator_count = static_cast<int>(per_estimator.size());
  if (estimator_count < 2)
    throw Error(Errc::invalid_params, "aggregation needs at least two estimators");
  cfg.validate();

  AssociationConfig gate = assoc;
  if (gate.tau_match <= 0.0)
    gate.tau_match = AssociationConfig::default_tau(meta.width, meta.height);

  size_t frame_count = 0;
  for (const auto& bundles : per_estimator) frame_count = std::max(frame_count, bundles.size());

  std::map<int, std::unique_ptr<TrackAggregator>> trackers;
  int next_person = 0;

  for (size_t t = 0; t < frame_count; ++t) {
    FrameBundle merged;
    merged.frame = static_cast<int>(t);
    for (int m = 0; m < estimator_count; ++m) {
      if (t >= per_estimator[m].size()) continue;
      for (PoseProposal p : per_estimator[m][t].proposals) {
        p.estimator = m;
        merged.proposals.push_back(std::move(p));
      }
    }

    if (mode == PersonMode::primary) {
      auto slots = primary_slots(merged, estimator_count);
      const bool any = std::any_of(slots.begin(), slots.end(),
                                   [](const auto& s) { return s.has_value(); });
      if (trackers.empty()) {
        if (!any) continue;
        trackers.emplace(0, std::make_unique<TrackAggregator>(0, cfg));
      }
      trackers.at(0)->push_frame(merged.frame, slots);
      continue;
    }

    std::vector<TrackedPose> tracked;
    for (const auto& [person, tracker] : trackers) {
      if (const Pose* last = tracker->last_aggregate())
        tracked.push_back(TrackedPose{person, *last});
    }

    for (PersonAssignment& pa : associate_persons(merged, tracked, estimator_count, gate)) {
      std::vector<std::optional<Pose>> slots(estimator_count);
      for (int m = 0; m < estimator_count; ++m) {
        if (pa.by_estimator[m]) slots[m] = pa.by_estimator[m]->joints;
      }
      int person = pa.person;
      if (pa.is_new) {
        person = next_person++;
        trackers.emplace(person, std::make_unique<TrackAggregator>(person, cfg));
      }
      trackers.at(person)->push_frame(merged.frame, slots);
    }
  }

  VideoAggregation out;
  out.frame_count = static_cast<int>(frame_count);
  for (auto& [person, tracker] : trackers) {
    PoseSequence seq = tracker->finish(meta);
    if (!seq.frames.empty()) out.sequences.push_back(std::move(seq));
  }
  std::sort(out.sequences.begin(), out.sequences.end(),
            [](const PoseSequence& a, const PoseSequence& b) { return a.person < b.person; });
  return out;
}

}  // namespace posefuse
