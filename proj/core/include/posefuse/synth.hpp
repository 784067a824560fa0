#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "posefuse/ingest.hpp"
#include "posefuse/skeleton.hpp"

namespace posefuse {

// Failure model for one simulated estimator. joint_dropout_p models
// heatmap-style per-joint misses, person_miss_p models detector-style
// whole-frame misses.
struct CorruptionProfile {
  std::string name = "estimator";
  double jitter_sigma = 0.0;    // Gaussian pixel noise per axis
  double joint_dropout_p = 0.0;
  double person_miss_p = 0.0;
  double outlier_p = 0.0;
  double outlier_scale = 0.0;   // outlier offset magnitude in pixels
  double bias_x = 0.0;
  double bias_y = 0.0;
  uint64_t seed = 0;

  void validate() const;  // throws Error{invalid_params}
};

// Articulated walker parameters. Bone lengths are constants of the generator,
// so the trace keeps them fixed over time by construction.
struct TraceParams {
  int width = 640;
  int height = 480;
  double torso_height = 50.0;
  double shoulder_width = 34.0;
  double hip_width = 26.0;
  double neck_to_head = 22.0;  // the trace's head length
  double upper_arm = 28.0;
  double forearm = 24.0;
  double thigh = 40.0;
  double shin = 38.0;
  double gait_frequency = 0.05;  // gait cycles per frame
  double arm_swing = 0.5;        // radians
  double leg_swing = 0.55;       // radians
  double path_speed = 2.2;       // peak hip-center speed, px per frame
  double bob_amplitude = 3.0;    // vertical hip bounce, px

  void validate() const;  // throws Error{invalid_params}

  // Conservative per-frame joint displacement bound implied by the params.
  double max_step() const;
};

struct MotionTrace {
  PoseSequence gt;  // complete poses, every joint valid, confidence 1
  TraceParams params;
};

// Deterministic walking trace of `frame_count` poses. The seed randomizes the
// gait phase and path placement only.
MotionTrace generate_trace(const TraceParams& params, int frame_count, uint64_t seed);

// Applies a corruption profile to the trace and emits per-frame bundles for
// one estimator (at most one proposal per frame). Deterministic given
// profile.seed.
std::vector<FrameBundle> simulate_estimator(const MotionTrace& trace,
                                            const CorruptionProfile& profile, int estimator);

// The documented default benchmark setup: two detector-style experts that
// miss whole frames and one heatmap-style expert that drops joints. Seeds are
// reassigned per trial by the harness.
std::array<CorruptionProfile, 3> default_benchmark_profiles();

}  // namespace posefuse
