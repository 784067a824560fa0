#pragma once

#include <stdexcept>
#include <string>

namespace posefuse {

enum class Errc {
  parse_error,           // malformed input syntax
  format_mismatch,       // syntactically valid but wrong shape for the declared format
  resolution_mismatch,   // estimator files disagree on image resolution
  insufficient_data,     // fewer samples than the operation needs
  empty_eval,            // no aligned frames to evaluate
  alignment_error,       // prediction/ground-truth video ids do not line up
  invalid_distribution,  // probability vector is malformed
  invalid_params,        // configuration values out of range
  io_error,              // file could not be read or written
  usage_error,           // caller violated a command precondition
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace posefuse
