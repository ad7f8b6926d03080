#ifndef SAABCODEC_COEFFICIENT_CODING_H_
#define SAABCODEC_COEFFICIENT_CODING_H_

#include <array>
#include <cstdint>

#include "saabcodec/bit_io.h"
#include "saabcodec/block.h"

namespace saabcodec {

using Levels = std::array<int32_t, kBlockArea>;

inline constexpr double kDeadzoneOffset = 1.0 / 3.0;

// level = sign(y) * floor(|y| / q + 1/3), in the coefficients' own order.
Levels Quantize(const CoeffBlock& coeffs, double q_step);
CoeffBlock Dequantize(const Levels& levels, double q_step);

// kZigzag[s] is the raster index visited at scan position s.
extern const std::array<int, kBlockArea> kZigzag;

// Coefficient order <-> scan order. DCT coefficients are zigzag scanned;
// learned kernels already sort their outputs, so they scan in index order.
enum class ScanOrder : uint8_t { kZigzag, kIdentity };
Levels ToScan(const Levels& levels, ScanOrder order);
Levels FromScan(const Levels& scanned, ScanOrder order);

// Block syntax (levels in scan order):
//   coded_block_flag            1 bit
//   if set:
//     last_pos                  6 bits, last non-zero scan position
//     for p = last_pos down to 0:
//       sig                     1 bit, omitted at p = last_pos (known set)
//       if significant:
//         abs_minus_1           Exp-Golomb order 0
//         sign                  1 bit, 1 = negative
void EncodeLevels(const Levels& scanned, BitWriter& out);
// Throws kFormat with the bit offset on malformed input.
Levels DecodeLevels(BitReader& in);

// Exact length EncodeLevels would produce.
int CountLevelBits(const Levels& scanned);

}  // namespace saabcodec

#endif  // SAABCODEC_COEFFICIENT_CODING_H_
