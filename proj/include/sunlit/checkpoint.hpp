#pragma once

#include <filesystem>
#include <string>

#include "sunlit/train.hpp"

namespace sunlit {

inline constexpr const char* kCheckpointFormat = "sunlit-checkpoint";
inline constexpr int kCheckpointVersion = 1;

/// JSON document holding the full trainer state. Doubles are written in
/// shortest round-trip form, so a reload resumes bit-for-bit.
std::string serialize_checkpoint(const Trainer::State& state);
/// Throws ErrorKind::Checkpoint on a foreign format or version mismatch.
Trainer::State parse_checkpoint(const std::string& text);

/// Writes through a temporary file and renames, so readers never see a
/// half-written checkpoint.
void save_checkpoint(const std::filesystem::path& path,
                     const Trainer::State& state);
Trainer::State load_checkpoint(const std::filesystem::path& path);

/// True if `state` was produced by the same settings, ignoring the seed and
/// the total step budget (which a resume may extend).
bool same_settings(const Trainer::State& state, const TrainConfig& train,
                   const EpisodeConfig& episode);

}  // namespace sunlit
