#pragma once

#include <stdexcept>
#include <string>

namespace sunlit {

/// Broad failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
  Dynamics,
  Geometry,
  Illumination,
  Environment,
  Training,
  Evaluation,
  Config,
  Checkpoint,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sunlit
