#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gvl/image.hpp"

namespace gvl {

/// Procedural stand-in for a photo dataset: flat backgrounds with hard-edged
/// rectangles, discs, thick lines and glyph-like strokes. No anti-aliasing.
struct SyntheticSetSpec {
  int count = 200;
  int height = 96;
  int width = 96;
  int min_shapes = 6;
  int max_shapes = 14;
  std::uint64_t seed = 1;
};

struct SyntheticManifest {
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> files;
};

/// Renders image `index` of the set. Every image ends with an opaque
/// rectangle whose left edge has luma contrast >= 0.5 on its middle row,
/// which guarantees max |gx| >= 1.
Image render_synthetic(const SyntheticSetSpec& spec, int index);

/// Writes `count` PNGs plus manifest.txt into dir (created if missing).
SyntheticManifest make_synthetic_dataset(const SyntheticSetSpec& spec,
                                         const std::filesystem::path& dir);

}  // namespace gvl
