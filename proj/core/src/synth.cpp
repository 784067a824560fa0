#include "posefuse/synth.hpp"

#include <algorithm>
#include <cmath>

#include "posefuse/error.hpp"
#include "posefuse/rng.hpp"

namespace posefuse {

namespace {

constexpr double kTau = 6.28318530717958647692;  // 2*pi

void require_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(Errc::invalid_params, std::string(name) + " must lie in [0, 1]");
}

Keypoint kp(double x, double y) { return Keypoint{x, y, 1.0, true}; }

}  // namespace

void CorruptionProfile::validate() const {
  require_prob(joint_dropout_p, "joint_dropout_p");
  require_prob(person_miss_p, "person_miss_p");
  require_prob(outlier_p, "outlier_p");
  if (jitter_sigma < 0.0) throw Error(Errc::invalid_params, "jitter_sigma must be >= 0");
  if (outlier_scale < 0.0) throw Error(Errc::invalid_params, "outlier_scale must be >= 0");
}

void TraceParams::validate() const {
  if (width < 1 || height < 1) throw Error(Errc::invalid_params, "image size must be positive");
  for (double length : {torso_height, shoulder_width, hip_width, neck_to_head, upper_arm, forearm,
                        thigh, shin}) {
    if (!(length > 0.0)) throw Error(Errc::invalid_params, "limb lengths must be positive");
  }
  if (gait_frequency < 0.0 || path_speed < 0.0 || bob_amplitude < 0.0 || arm_swing < 0.0 ||
      leg_swing < 0.0)
    throw Error(Errc::invalid_params, "motion parameters must be non-negative");
}

double TraceParams::max_step() const {
  const double omega = kTau * gait_frequency;
  const double arm_sweep = arm_swing * upper_arm + (arm_swing + 0.25) * forearm;
  const double leg_sweep = leg_swing * thigh + (leg_swing + 0.25) * shin;
  const double swing = omega * std::max(arm_sweep, leg_sweep);
  const double bob = 2.0 * omega * bob_amplitude;
  return 1.05 * (path_speed + bob + swing);
}

MotionTrace generate_trace(const TraceParams& params, int frame_count, uint64_t seed) {
  params.validate();
  if (frame_count < 1) throw Error(Errc::invalid_params, "frame_count must be >= 1");

  Rng rng(seed);
  const double phase = rng.uniform(0.0, kTau);
  const double path_phase = rng.uniform(0.0, kTau);

  const double omega = kTau * params.gait_frequency;
  // Horizontal margin covering the widest reach of the body.
  const double margin =
      params.shoulder_width / 2.0 + params.upper_arm + params.forearm + 10.0;
  const double amp_x = std::max(0.0, params.width / 2.0 - margin);
  const double omega_x = amp_x > 0.0 ? params.path_speed / amp_x : 0.0;
  const double center_x = params.width / 2.0;
  const double center_y = params.height / 2.0;

  MotionTrace trace;
  trace.params = params;
  trace.gt.person = 0;
  trace.gt.meta = VideoMeta{"synthetic", params.width, params.height};

  for (int t = 0; t < frame_count; ++t) {
    const double hip_x = center_x + amp_x * std::sin(omega_x * t + path_phase);
    const double hip_y = center_y + params.bob_amplitude * std::sin(2.0 * omega * t + phase);
    const double shoulder_y = hip_y - params.torso_height;

    Pose pose{};
    pose[static_cast<int>(JointId::head)] = kp(hip_x, shoulder_y - params.neck_to_head);
    pose[static_cast<int>(JointId::l_shoulder)] = kp(hip_x - params.shoulder_width / 2.0, shoulder_y);
    pose[static_cast<int>(JointId::r_shoulder)] = kp(hip_x + params.shoulder_width / 2.0, shoulder_y);
    pose[static_cast<int>(JointId::l_hip)] = kp(hip_x - params.hip_width / 2.0, hip_y);
    pose[static_cast<int>(JointId::r_hip)] = kp(hip_x + params.hip_width / 2.0, hip_y);

    const struct {
      JointId shoulder, elbow, wrist, hip, knee, ankle;
      double side_phase;
    } sides[2] = {
        {JointId::l_shoulder, JointId::l_elbow, JointId::l_wrist, JointId::l_hip, JointId::l_knee,
         JointId::l_ankle, 0.0},
        {JointId::r_shoulder, JointId::r_elbow, JointId::r_wrist, JointId::r_hip, JointId::r_knee,
         JointId::r_ankle, kTau / 2.0},
    };
    for (const auto& side : sides) {
      const Keypoint& sh = pose[static_cast<int>(side.shoulder)];
      const double arm_angle = params.arm_swing * std::sin(omega * t + phase + side.side_phase);
      const double elbow_x = sh.x + params.upper_arm * std::sin(arm_angle);
      const double elbow_y = sh.y + params.upper_arm * std::cos(arm_angle);
      pose[static_cast<int>(side.elbow)] = kp(elbow_x, elbow_y);
      const double bend = 0.35 + 0.25 * std::sin(omega * t + phase + side.side_phase);
      pose[static_cast<int>(side.wrist)] =
          kp(elbow_x + params.forearm * std::sin(arm_angle + bend),
             elbow_y + params.forearm * std::cos(arm_angle + bend));

      const Keypoint& hip = pose[static_cast<int>(side.hip)];
      // Legs swing opposite to the same-side arm.
      const double leg_angle =
          params.leg_swing * std::sin(omega * t + phase + side.side_phase + kTau / 2.0);
      const double knee_x = hip.x + params.thigh * std::sin(leg_angle);
      const double knee_y = hip.y + params.thigh * std::cos(leg_angle);
      pose[static_cast<int>(side.knee)] = kp(knee_x, knee_y);
      const double knee_bend = 0.25 * (1.0 + std::cos(omega * t + phase + side.side_phase));
      pose[static_cast<int>(side.ankle)] =
          kp(knee_x + params.shin * std::sin(leg_angle - knee_bend),
             knee_y + params.shin * std::cos(leg_angle - knee_bend));
    }

    AggregatedPose frame;
    frame.frame = t;
    frame.joints = pose;
    frame.confidence = 1.0;
    frame.retained = true;
    frame.source.fill(kNoSource);
    trace.gt.frames.push_back(frame);
  }
  return trace;
}

std::vector<FrameBundle> simulate_estimator(const MotionTrace& trace,
                                            const CorruptionProfile& profile, int estimator) {
  profile.validate();
  Rng rng(profile.seed);

  std::vector<FrameBundle> out;
  out.reserve(trace.gt.frames.size());
  for (const AggregatedPose& gt_frame : trace.gt.frames) {
    FrameBundle bundle;
    bundle.frame = gt_frame.frame;
    if (rng.next_double() < profile.person_miss_p) {
      out.push_back(std::move(bundle));  // detector lost the whole person
      continue;
    }

    PoseProposal proposal;
    proposal.estimator = estimator;
    proposal.frame = gt_frame.frame;
    proposal.person = 0;
    for (int j = 0; j < kJointCount; ++j) {
      if (rng.next_double() < profile.joint_dropout_p) continue;  // stays invalid
      const Keypoint& gt_kp = gt_frame.joints[j];
      const double gx = rng.gaussian(profile.jitter_sigma);
      const double gy = rng.gaussian(profile.jitter_sigma);
      Keypoint& kp = proposal.joints[j];
      if (rng.next_double() < profile.outlier_p) {
        const double angle = rng.uniform(0.0, kTau);
        kp.x = gt_kp.x + profile.outlier_scale * std::cos(angle);
        kp.y = gt_kp.y + profile.outlier_scale * std::sin(angle);
      } else {
        kp.x = gt_kp.x + profile.bias_x + gx;
        kp.y = gt_kp.y + profile.bias_y + gy;
      }
      kp.score = 1.0;
      kp.valid = true;
    }
    bundle.proposals.push_back(std::move(proposal));
    out.push_back(std::move(bundle));
  }
  return out;
}

std::array<CorruptionProfile, 3> default_benchmark_profiles() {
  CorruptionProfile detector_a;
  detector_a.name = "expert_td_a";
  detector_a.jitter_sigma = 2.5;
  detector_a.joint_dropout_p = 0.02;
  detector_a.person_miss_p = 0.25;
  detector_a.outlier_p = 0.03;
  detector_a.outlier_scale = 80.0;

  CorruptionProfile detector_b;
  detector_b.name = "expert_td_b";
  detector_b.jitter_sigma = 3.0;
  detector_b.joint_dropout_p = 0.05;
  detector_b.person_miss_p = 0.15;
  detector_b.outlier_p = 0.02;
  detector_b.outlier_scale = 70.0;
  detector_b.bias_x = 1.5;
  detector_b.bias_y = -1.0;

  CorruptionProfile heatmap;
  heatmap.name = "expert_bu";
  heatmap.jitter_sigma = 2.0;
  heatmap.joint_dropout_p = 0.25;
  heatmap.person_miss_p = 0.02;
  heatmap.outlier_p = 0.04;
  heatmap.outlier_scale = 90.0;

  return {detector_a, detector_b, heatmap};
}

}  // namespace posefuse
