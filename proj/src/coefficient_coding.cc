#include "saabcodec/coefficient_coding.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "saabcodec/error.h"

namespace saabcodec {
namespace {

constexpr int kLastPosBits = 6;

std::array<int, kBlockArea> MakeZigzag() {
  std::array<int, kBlockArea> scan{};
  int s = 0;
  for (int diag = 0; diag < 2 * kBlockSide - 1; ++diag) {
    if (diag % 2 == 0) {
      // Up-right: row decreasing.
      for (int r = std::min(diag, kBlockSide - 1); r >= 0 && diag - r < kBlockSide; --r)
        scan[s++] = r * kBlockSide + (diag - r);
    } else {
      for (int c = std::min(diag, kBlockSide - 1); c >= 0 && diag - c < kBlockSide; --c)
        scan[s++] = (diag - c) * kBlockSide + c;
    }
  }
  return scan;
}

int LastNonZero(const Levels& scanned) {
  for (int p = kBlockArea - 1; p >= 0; --p)
    if (scanned[p] != 0) return p;
  return -1;
}

}  // namespace

const std::array<int, kBlockArea> kZigzag = MakeZigzag();

Levels Quantize(const CoeffBlock& coeffs, double q_step) {
  Levels levels{};
  for (int k = 0; k < kBlockArea; ++k) {
    const double mag = std::floor(std::abs(coeffs[k]) / q_step + kDeadzoneOffset);
    const int32_t level = static_cast<int32_t>(mag);
    levels[k] = coeffs[k] < 0 ? -level : level;
  }
  return levels;
}

CoeffBlock Dequantize(const Levels& levels, double q_step) {
  CoeffBlock coeffs{};
  for (int k = 0; k < kBlockArea; ++k) coeffs[k] = levels[k] * q_step;
  return coeffs;
}

Levels ToScan(const Levels& levels, ScanOrder order) {
  if (order == ScanOrder::kIdentity) return levels;
  Levels out{};
  for (int s = 0; s < kBlockArea; ++s) out[s] = levels[kZigzag[s]];
  return out;
}

Levels FromScan(const Levels& scanned, ScanOrder order) {
  if (order == ScanOrder::kIdentity) return scanned;
  Levels out{};
  for (int s = 0; s < kBlockArea; ++s) out[kZigzag[s]] = scanned[s];
  return out;
}

void EncodeLevels(const Levels& scanned, BitWriter& out) {
  const int last = LastNonZero(scanned);
  out.PutBit(last >= 0);
  if (last < 0) return;
  out.PutBits(static_cast<uint32_t>(last), kLastPosBits);
  for (int p = last; p >= 0; --p) {
    const int32_t level = scanned[p];
    if (p != last) out.PutBit(level != 0);
    if (level == 0) continue;
    out.PutExpGolomb(static_cast<uint32_t>(std::abs(level)) - 1);
    out.PutBit(level < 0);
  }
}

Levels DecodeLevels(BitReader& in) {
  Levels scanned{};
  if (!in.GetBit()) return scanned;
  const int last = static_cast<int>(in.GetBits(kLastPosBits));
  for (int p = last; p >= 0; --p) {
    const bool significant = p == last || in.GetBit();
    if (!significant) continue;
    const uint64_t at = in.position();
    const uint32_t mag_minus_1 = in.GetExpGolomb();
    if (mag_minus_1 >= static_cast<uint32_t>(INT32_MAX)) {
      throw Error(ErrorKind::kFormat,
                  "level magnitude overflows at bit " + std::to_string(at));
    }
    const int32_t mag = static_cast<int32_t>(mag_minus_1) + 1;
    scanned[p] = in.GetBit() ? -mag : mag;
  }
  return scanned;
}

int CountLevelBits(const Levels& scanned) {
  const int last = LastNonZero(scanned);
  if (last < 0) return 1;
  int bits = 1 + kLastPosBits;
  for (int p = last; p >= 0; --p) {
    const int32_t level = scanned[p];
    if (p != last) ++bits;
    if (level == 0) continue;
    bits += ExpGolombLength(static_cast<uint32_t>(std::abs(level)) - 1) + 1;
  }
  return bits;
}

}  // namespace saabcodec
