#pragma once

#include "cavfluor/scenarios.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace cavfluor {

inline constexpr int kCheckpointVersion = 1;

/// 64-bit FNV-1a of a text, as 16 hex digits.
std::string scenario_hash(std::string_view text);

struct CheckpointTag {
	std::string scenario_hash;
	double omega_f = 0.0;
};

/// Text manifest at `manifest` plus a little-endian payload next to it
/// (same stem, ".bin").  Both are written to temporaries and renamed.
void save_checkpoint(const std::filesystem::path &manifest, const CheckpointTag &tag, const PropagationState &state);

/// Throws IoError on unreadable or malformed files and ConfigError when the
/// stored tag differs from `expected`.
PropagationState load_checkpoint(const std::filesystem::path &manifest, const CheckpointTag &expected);

} // namespace cavfluor
