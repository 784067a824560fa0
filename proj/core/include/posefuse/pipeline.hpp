#pragma once

#include <span>
#include <vector>

#include "posefuse/aggregate.hpp"
#include "posefuse/ingest.hpp"
#include "posefuse/skeleton.hpp"

namespace posefuse {

enum class PersonMode {
  all,      // track every person via association
  primary,  // take each estimator's first detection as one person
};

struct VideoAggregation {
  std::vector<PoseSequence> sequences;  // sorted by person id, empty tracks dropped
  int frame_count = 0;
};

// Drives association and aggregation over one video: merges the per-estimator
// bundle lists into a common frame range, matches proposals to persons frame
// by frame against the running pass-1 aggregates, and finishes every track.
// Strictly sequential in t; videos are the unit of parallelism.
VideoAggregation aggregate_video(std::span<const std::vector<FrameBundle>> per_estimator,
                                 const VideoMeta& meta, const AggregationConfig& cfg,
                                 const AssociationConfig& assoc, PersonMode mode);

}  // namespace posefuse
