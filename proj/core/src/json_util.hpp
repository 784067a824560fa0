#pragma once

// Internal helpers shared by the parsing and serialization units. Not
// installed; public headers stay free of the vendored json dependency.

#include <array>
#include <string_view>

#include <json.hpp>

#include "posefuse/error.hpp"
#include "posefuse/skeleton.hpp"

namespace posefuse::detail {

using nlohmann::json;

inline json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, std::string(e.what()) + " at byte " + std::to_string(e.byte));
  }
}

inline json joints_to_json(const Pose& pose) {
  json arr = json::array();
  for (const Keypoint& kp : pose) arr.push_back(json::array({kp.x, kp.y, kp.score, kp.valid}));
  return arr;
}

inline Pose joints_from_json(const json& arr) {
  if (!arr.is_array() || arr.size() != kJointCount)
    throw Error(Errc::format_mismatch,
                "joints array must hold " + std::to_string(kJointCount) + " entries");
  Pose pose{};
  for (int j = 0; j < kJointCount; ++j) {
    const json& kp = arr[j];
    if (!kp.is_array() || kp.size() != 4 || !kp[0].is_number() || !kp[1].is_number() ||
        !kp[2].is_number() || !kp[3].is_boolean())
      throw Error(Errc::format_mismatch, "joint entries must be [x, y, score, valid]");
    pose[j].x = kp[0].get<double>();
    pose[j].y = kp[1].get<double>();
    pose[j].score = kp[2].get<double>();
    pose[j].valid = kp[3].get<bool>();
  }
  return pose;
}

inline std::array<int, 2> resolution_from_json(const json& arr) {
  if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number_integer() ||
      !arr[1].is_number_integer())
    throw Error(Errc::format_mismatch, "resolution must be [width, height]");
  return {arr[0].get<int>(), arr[1].get<int>()};
}

}  // namespace posefuse::detail
