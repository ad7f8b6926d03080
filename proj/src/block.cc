#include "saabcodec/block.h"

#include <string>

#include "saabcodec/error.h"

namespace saabcodec {
namespace {

void CheckRange(int value) {
  if (value < -kMaxResidual || value > kMaxResidual) {
    throw Error(ErrorKind::kInvalidInput,
                "residual sample out of range: " + std::to_string(value));
  }
}

}  // namespace

ResidualBlock ResidualBlock::FromSamples(
    std::span<const int, kBlockArea> samples) {
  ResidualBlock block;
  for (int i = 0; i < kBlockArea; ++i) {
    CheckRange(samples[i]);
    block.samples_[i] = static_cast<int16_t>(samples[i]);
  }
  return block;
}

void ResidualBlock::set(int row, int col, int value) {
  CheckRange(value);
  samples_[row * kBlockSide + col] = static_cast<int16_t>(value);
}

Vec64 FlattenBlock(const ResidualBlock& block) {
  Vec64 out{};
  const auto s = block.samples();
  for (int i = 0; i < kBlockArea; ++i) out[i] = s[i];
  return out;
}

SampleBlock ToSamples(const ResidualBlock& block) { return FlattenBlock(block); }

}  // namespace saabcodec
