#include <cmath>
#include <cstring>

#include <doctest.h>

#include "helpers.hpp"
#include "posefuse/error.hpp"
#include "posefuse/json_io.hpp"
#include "posefuse/rng.hpp"
#include "posefuse/skeleton.hpp"

using namespace posefuse;
using testutil::kp;

namespace {

Pose shoulders_only(Keypoint l, Keypoint r) {
  Pose pose{};
  pose[static_cast<int>(JointId::l_shoulder)] = l;
  pose[static_cast<int>(JointId::r_shoulder)] = r;
  return pose;
}

}  // namespace

TEST_CASE("joint names are a bijection over the 13 ids") {
  for (int i = 0; i < kJointCount; ++i) {
    const auto id = static_cast<JointId>(i);
    const auto round = joint_from_name(joint_name(id));
    REQUIRE(round.has_value());
    CHECK(*round == id);
  }
  CHECK_FALSE(joint_from_name("neck").has_value());
  CHECK_FALSE(joint_from_name("").has_value());
}

TEST_CASE("neck position is the shoulder midpoint") {
  auto pose = shoulders_only(kp(0, 0), kp(2, 0));
  auto neck = neck_position(pose);
  REQUIRE(neck.has_value());
  CHECK(neck->x == 1.0);
  CHECK(neck->y == 0.0);

  pose = shoulders_only(kp(4, 4), kp(4, 4));
  neck = neck_position(pose);
  REQUIRE(neck.has_value());
  CHECK(neck->x == 4.0);
  CHECK(neck->y == 4.0);

  pose = shoulders_only(kp(1, 2), kp(3, 6));
  neck = neck_position(pose);
  REQUIRE(neck.has_value());
  CHECK(neck->x == 2.0);
  CHECK(neck->y == 4.0);
}

TEST_CASE("neck position needs both shoulders") {
  Pose pose = shoulders_only(kp(1, 2), Keypoint{});
  CHECK_FALSE(neck_position(pose).has_value());
  pose = shoulders_only(Keypoint{}, kp(1, 2));
  CHECK_FALSE(neck_position(pose).has_value());
}

TEST_CASE("neck position is symmetric in the two shoulders") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const Keypoint a = kp(rng.uniform(-500, 500), rng.uniform(-500, 500));
    const Keypoint b = kp(rng.uniform(-500, 500), rng.uniform(-500, 500));
    const auto ab = neck_position(shoulders_only(a, b));
    const auto ba = neck_position(shoulders_only(b, a));
    REQUIRE(ab.has_value());
    REQUIRE(ba.has_value());
    CHECK(ab->x == ba->x);
    CHECK(ab->y == ba->y);
  }
}

TEST_CASE("head length from head and derived neck") {
  Pose pose = shoulders_only(kp(-3, 0), kp(3, 0));
  pose[static_cast<int>(JointId::head)] = kp(0, 10);
  auto len = head_length(pose);
  REQUIRE(len.has_value());
  CHECK(*len == 10.0);

  pose[static_cast<int>(JointId::head)] = kp(0, 0);  // coincides with the neck
  CHECK(*head_length(pose) == 0.0);

  pose = shoulders_only(kp(-2, 0), kp(2, 0));
  pose[static_cast<int>(JointId::head)] = kp(3, 4);
  CHECK(*head_length(pose) == 5.0);
}

TEST_CASE("head length undefined without head or a shoulder") {
  Pose pose = shoulders_only(kp(-3, 0), kp(3, 0));
  CHECK_FALSE(head_length(pose).has_value());  // no head
  pose[static_cast<int>(JointId::head)] = kp(0, 10);
  pose[static_cast<int>(JointId::r_shoulder)].valid = false;
  CHECK_FALSE(head_length(pose).has_value());
}

TEST_CASE("head length is invariant to translation and rotation") {
  Rng rng(1234);
  for (int i = 0; i < 200; ++i) {
    Pose pose = testutil::base_pose();
    const double reference = *head_length(pose);

    const double angle = rng.uniform(0, 6.2831853);
    const double dx = rng.uniform(-300, 300);
    const double dy = rng.uniform(-300, 300);
    Pose moved = pose;
    for (Keypoint& kp : moved) {
      const double x = kp.x * std::cos(angle) - kp.y * std::sin(angle) + dx;
      const double y = kp.x * std::sin(angle) + kp.y * std::cos(angle) + dy;
      kp.x = x;
      kp.y = y;
    }
    const double rotated = *head_length(moved);
    CHECK(std::abs(rotated - reference) <= 1e-9 * std::max(1.0, reference));
  }
}

namespace {

PoseSequence random_sequence(Rng& rng, int person) {
  PoseSequence seq;
  seq.person = person;
  seq.meta = VideoMeta{"vid", 640, 480};
  const int frames = 1 + rng.next_int(6);
  for (int t = 0; t < frames; ++t) {
    AggregatedPose frame;
    frame.frame = t;
    frame.confidence = rng.next_double();
    frame.retained = frame.confidence >= 0.18;
    frame.source.fill(kNoSource);
    for (auto& kp : frame.joints) {
      kp.x = rng.uniform(-100, 900);
      kp.y = rng.uniform(-50, 700);
      kp.score = rng.next_double();
      kp.valid = rng.next_double() < 0.9;
    }
    seq.frames.push_back(frame);
  }
  return seq;
}

}  // namespace

TEST_CASE("sequence json round-trips bit-exactly") {
  Rng rng(99);
  for (int iter = 0; iter < 25; ++iter) {
    const VideoMeta meta{"video_" + std::to_string(iter), 640, 480};
    std::vector<PoseSequence> persons;
    const int count = 1 + rng.next_int(3);
    for (int p = 0; p < count; ++p) {
      PoseSequence seq = random_sequence(rng, p);
      seq.meta = meta;
      persons.push_back(seq);
    }

    const std::string bytes = write_sequence_file(meta, persons);
    const SequenceFile parsed = read_sequence_file(bytes);

    REQUIRE(parsed.persons.size() == persons.size());
    CHECK(parsed.meta.video == meta.video);
    CHECK(parsed.meta.width == meta.width);
    CHECK(parsed.meta.height == meta.height);
    for (size_t p = 0; p < persons.size(); ++p) {
      const PoseSequence& in = persons[p];
      const PoseSequence& out = parsed.persons[p];
      CHECK(out.person == in.person);
      REQUIRE(out.frames.size() == in.frames.size());
      for (size_t f = 0; f < in.frames.size(); ++f) {
        CHECK(out.frames[f].frame == in.frames[f].frame);
        CHECK(out.frames[f].confidence == in.frames[f].confidence);
        CHECK(out.frames[f].retained == in.frames[f].retained);
        for (int j = 0; j < kJointCount; ++j) {
          CHECK(out.frames[f].joints[j].x == in.frames[f].joints[j].x);
          CHECK(out.frames[f].joints[j].y == in.frames[f].joints[j].y);
          CHECK(out.frames[f].joints[j].score == in.frames[f].joints[j].score);
          CHECK(out.frames[f].joints[j].valid == in.frames[f].joints[j].valid);
        }
      }
    }

    // A second serialization of the parsed document is byte-identical.
    CHECK(write_sequence_file(parsed.meta, parsed.persons) == bytes);
  }
}

TEST_CASE("sequence files must be strictly increasing in t") {
  Rng rng(3);
  PoseSequence seq = random_sequence(rng, 0);
  REQUIRE(seq.frames.size() >= 1);
  seq.frames.push_back(seq.frames.back());  // duplicate t
  const VideoMeta meta{"vid", 640, 480};
  CHECK_THROWS_AS(write_sequence_file(meta, std::vector{seq}), Error);

  const std::string bad = R"({"video":"v","resolution":[10,10],"persons":[
    {"id":0,"frames":[
      {"t":1,"confidence":1.0,"retained":true,"joints":[[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false]]},
      {"t":1,"confidence":1.0,"retained":true,"joints":[[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false],[0,0,1,false]]}]}]})";
  CHECK_THROWS_AS(read_sequence_file(bad), Error);
}
