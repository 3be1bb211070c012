#include "sunlit/error.hpp"

namespace sunlit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dynamics: return "dynamics";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Illumination: return "illumination";
    case ErrorKind::Environment: return "environment";
    case ErrorKind::Training: return "training";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Config: return "config";
    case ErrorKind::Checkpoint: return "checkpoint";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace sunlit
