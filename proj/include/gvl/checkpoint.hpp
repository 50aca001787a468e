#pragma once

#include <filesystem>

#include "gvl/model.hpp"

namespace gvl {

/// Checkpoint layout (all integers and floats little-endian):
///
///   bytes 0..7   magic "GVLCKPT\0"
///   u32          format version (1)
///   u32          image channels
///   u32          scale factor
///   u32          layer count L
///   L x 4 u32    in_ch, out_ch, kernel, activation (0 none, 1 tanh, 2 relu)
///   u64          Adam step counter
///   u64          parameter count P
///   P f64        parameters
///   P f64        Adam first moments
///   P f64        Adam second moments
///
/// See docs/checkpoint_format.md.
inline constexpr char kCheckpointMagic[8] = {'G', 'V', 'L', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace gvl
