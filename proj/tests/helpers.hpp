#pragma once

// Shared fixtures and generators for the test suites.

#include <cmath>
#include <vector>

#include "posefuse/aggregate.hpp"
#include "posefuse/rng.hpp"
#include "posefuse/skeleton.hpp"

namespace testutil {

inline posefuse::Keypoint kp(double x, double y, double score = 1.0) {
  return posefuse::Keypoint{x, y, score, true};
}

// A plausible standing figure, head length 40 px.
inline posefuse::Pose base_pose() {
  using posefuse::JointId;
  posefuse::Pose pose{};
  auto set = [&](JointId id, double x, double y) { pose[static_cast<int>(id)] = kp(x, y); };
  set(JointId::head, 320, 100);
  set(JointId::l_shoulder, 300, 140);
  set(JointId::r_shoulder, 340, 140);
  set(JointId::l_elbow, 290, 180);
  set(JointId::r_elbow, 350, 180);
  set(JointId::l_wrist, 285, 220);
  set(JointId::r_wrist, 355, 220);
  set(JointId::l_hip, 305, 230);
  set(JointId::r_hip, 335, 230);
  set(JointId::l_knee, 300, 290);
  set(JointId::r_knee, 340, 290);
  set(JointId::l_ankle, 298, 350);
  set(JointId::r_ankle, 342, 350);
  return pose;
}

inline posefuse::Pose translated(const posefuse::Pose& pose, double dx, double dy) {
  posefuse::Pose out = pose;
  for (posefuse::Keypoint& kp : out) {
    if (!kp.valid) continue;
    kp.x += dx;
    kp.y += dy;
  }
  return out;
}

// All joints valid, integer pixel coordinates (ties and translations stay
// exact in floating point).
inline posefuse::Pose random_int_pose(posefuse::Rng& rng, int width = 600, int height = 440) {
  posefuse::Pose pose{};
  for (auto& kp : pose) {
    kp.x = static_cast<double>(10 + rng.next_int(width));
    kp.y = static_cast<double>(10 + rng.next_int(height));
    kp.score = 1.0;
    kp.valid = true;
  }
  return pose;
}

// Small aggregation instance for oracle comparisons: 1-5 frames, 1-4 joints,
// 3 estimators, whole-frame and per-joint dropouts, integer coordinates so
// exact ties occur.
inline std::vector<posefuse::ProposalGrid> random_instance(posefuse::Rng& rng) {
  const int frames = 1 + rng.next_int(5);
  const int joints = 1 + rng.next_int(4);
  const int estimators = 3;
  std::vector<posefuse::ProposalGrid> out;
  for (int t = 0; t < frames; ++t) {
    posefuse::ProposalGrid grid(estimators, std::vector<posefuse::Keypoint>(joints));
    for (int m = 0; m < estimators; ++m) {
      if (rng.next_double() < 0.2) continue;  // whole-frame miss
      for (int j = 0; j < joints; ++j) {
        if (rng.next_double() < 0.25) continue;  // joint miss
        grid[m][j].x = static_cast<double>(rng.next_int(13));
        grid[m][j].y = static_cast<double>(rng.next_int(13));
        grid[m][j].score = 1.0;
        grid[m][j].valid = true;
      }
    }
    out.push_back(std::move(grid));
  }
  return out;
}

}  // namespace testutil
