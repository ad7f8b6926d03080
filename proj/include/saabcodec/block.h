#ifndef SAABCODEC_BLOCK_H_
#define SAABCODEC_BLOCK_H_

#include <array>
#include <cstdint>
#include <span>

#include "saabcodec/matrix.h"

namespace saabcodec {

inline constexpr int kBlockSide = 8;
inline constexpr int kBlockArea = kBlockSide * kBlockSide;
inline constexpr int kMaxResidual = 255;

// 8x8 prediction residual of 8-bit video, raster order.
class ResidualBlock {
 public:
  ResidualBlock() : samples_{} {}

  // Throws kInvalidInput if any sample lies outside [-255, 255].
  static ResidualBlock FromSamples(std::span<const int, kBlockArea> samples);

  int at(int row, int col) const { return samples_[row * kBlockSide + col]; }
  void set(int row, int col, int value);

  std::span<const int16_t, kBlockArea> samples() const { return samples_; }

  friend bool operator==(const ResidualBlock&, const ResidualBlock&) = default;

 private:
  std::array<int16_t, kBlockArea> samples_;
};

// Real-valued block-shaped data, raster order: transform inputs that are not
// integer residuals (mean-removed sets) and inverse-transform outputs.
using SampleBlock = std::array<double, kBlockArea>;

// Transform output, index 0 = DC, remaining entries in kernel order.
using CoeffBlock = std::array<double, kBlockArea>;

// 8-bit pixels, raster order.
using PixelBlock = std::array<uint8_t, kBlockArea>;

// Raster flattening: out[8 * r + c] = block(r, c).
Vec64 FlattenBlock(const ResidualBlock& block);

SampleBlock ToSamples(const ResidualBlock& block);

}  // namespace saabcodec

#endif  // SAABCODEC_BLOCK_H_
