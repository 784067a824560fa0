#include "posefuse/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "posefuse/error.hpp"

namespace posefuse {

using detail::json;

std::string write_sequence_file(const VideoMeta& meta, std::span<const PoseSequence> persons) {
  json doc;
  doc["video"] = meta.video;
  doc["resolution"] = json::array({meta.width, meta.height});
  json people = json::array();
  for (const PoseSequence& seq : persons) {
    json frames = json::array();
    int prev_t = -1;
    for (const AggregatedPose& frame : seq.frames) {
      if (frame.frame <= prev_t)
        throw Error(Errc::invalid_params, "sequence frames must be strictly increasing");
      prev_t = frame.frame;
      json f;
      f["t"] = frame.frame;
      f["confidence"] = frame.confidence;
      f["retained"] = frame.retained;
      f["joints"] = detail::joints_to_json(frame.joints);
      frames.push_back(std::move(f));
    }
    json person;
    person["id"] = seq.person;
    person["frames"] = std::move(frames);
    people.push_back(std::move(person));
  }
  doc["persons"] = std::move(people);
  return doc.dump();
}

SequenceFile read_sequence_file(std::string_view bytes) {
  const json doc = detail::parse_json(bytes);
  if (!doc.is_object() || !doc.contains("video") || !doc.contains("resolution") ||
      !doc.contains("persons"))
    throw Error(Errc::format_mismatch, "sequence file needs video, resolution and persons");

  SequenceFile out;
  out.meta.video = doc["video"].get<std::string>();
  const auto res = detail::resolution_from_json(doc["resolution"]);
  out.meta.width = res[0];
  out.meta.height = res[1];

  for (const json& person : doc["persons"]) {
    if (!person.is_object() || !person.contains("id") || !person.contains("frames"))
      throw Error(Errc::format_mismatch, "person entries need id and frames");
    PoseSequence seq;
    seq.person = person["id"].get<int>();
    seq.meta = out.meta;
    int prev_t = -1;
    for (const json& f : person["frames"]) {
      if (!f.is_object() || !f.contains("t") || !f.contains("confidence") ||
          !f.contains("retained") || !f.contains("joints"))
        throw Error(Errc::format_mismatch, "frames need t, confidence, retained and joints");
      AggregatedPose frame;
      frame.frame = f["t"].get<int>();
      if (frame.frame <= prev_t)
        throw Error(Errc::format_mismatch, "frames must be strictly increasing in t");
      prev_t = frame.frame;
      frame.confidence = f["confidence"].get<double>();
      frame.retained = f["retained"].get<bool>();
      frame.joints = detail::joints_from_json(f["joints"]);
      frame.source.fill(kNoSource);  // provenance is not part of the wire format
      seq.frames.push_back(std::move(frame));
    }
    out.persons.push_back(std::move(seq));
  }
  return out;
}

std::string write_proposal_file(const VideoMeta& meta, std::span<const FrameBundle> frames) {
  json doc;
  doc["video"] = meta.video;
  doc["resolution"] = json::array({meta.width, meta.height});
  json frame_arr = json::array();
  for (const FrameBundle& bundle : frames) {
    json f;
    f["t"] = bundle.frame;
    json people = json::array();
    for (const PoseProposal& p : bundle.proposals) {
      json person;
      person["joints"] = detail::joints_to_json(p.joints);
      people.push_back(std::move(person));
    }
    f["people"] = std::move(people);
    frame_arr.push_back(std::move(f));
  }
  doc["frames"] = std::move(frame_arr);
  return doc.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path);
}

}  // namespace posefuse
