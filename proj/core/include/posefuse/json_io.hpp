#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posefuse/ingest.hpp"
#include "posefuse/skeleton.hpp"

namespace posefuse {

// Canonical sequence document:
//   {"video": str, "resolution": [w, h], "persons": [
//      {"id": int, "frames": [
//         {"t": int, "confidence": float, "retained": bool,
//          "joints": [[x, y, score, valid] x13]}]}]}
// Joint order is the JointId index order. Numbers round-trip bit-exactly.
std::string write_sequence_file(const VideoMeta& meta, std::span<const PoseSequence> persons);

struct SequenceFile {
  VideoMeta meta;
  std::vector<PoseSequence> persons;
};

SequenceFile read_sequence_file(std::string_view bytes);

// Canonical proposal document (one estimator, one video):
//   {"video": str, "resolution": [w, h], "frames": [
//      {"t": int, "people": [{"joints": [[x, y, score, valid] x13]}]}]}
std::string write_proposal_file(const VideoMeta& meta, std::span<const FrameBundle> frames);

// Filesystem helpers shared by the tools and tests.
std::string read_text_file(const std::string& path);            // throws Error{io_error}
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace posefuse
