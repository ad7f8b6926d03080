#ifndef SAABCODEC_LUMA_PLANE_H_
#define SAABCODEC_LUMA_PLANE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saabcodec/block.h"

namespace saabcodec {

// 8-bit luma picture, raster order. Codec-facing planes have dimensions that
// are multiples of 8; ReadYuv crops to enforce that.
struct LumaPlane {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> samples;

  LumaPlane() = default;
  LumaPlane(int w, int h, uint8_t fill = 0)
      : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {}

  uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  uint8_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }

  PixelBlock GetBlock(int x0, int y0) const;
  void PutBlock(int x0, int y0, const PixelBlock& block);

  friend bool operator==(const LumaPlane&, const LumaPlane&) = default;
};

struct FrameRange {
  int first = 0;
  // Unset: through the end of the file.
  std::optional<int> count;
};

// Reads the Y planes of a planar 8-bit 4:2:0 file (chroma skipped). Frames
// are cropped to the largest multiple-of-8 size. Throws kInvalidInput for
// odd or non-positive dimensions, kFormat when the file is not a whole
// number of frames or the range runs past the end.
std::vector<LumaPlane> ReadYuv(const std::string& path, int width, int height,
                               FrameRange range = {});

// Writes planes as 4:2:0 with flat (128) chroma.
void WriteYuv(const std::string& path, const std::vector<LumaPlane>& planes);

// Grayscale binary PGM (P5, maxval 255).
LumaPlane ReadPgm(const std::string& path);

}  // namespace saabcodec

#endif  // SAABCODEC_LUMA_PLANE_H_
