#ifndef SAABCODEC_CODEC_H_
#define SAABCODEC_CODEC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saabcodec/coefficient_coding.h"
#include "saabcodec/intra_prediction.h"
#include "saabcodec/kernel_bank.h"
#include "saabcodec/luma_plane.h"
#include "saabcodec/rd_params.h"

namespace saabcodec {

// How learned kernels are integrated with DCT.
//   kDctOnly  anchor, DCT everywhere
//   kS1       learned kernel replaces DCT outside modes 8-12 / 24-28, no flag
//   kS2       RDO between DCT and learned kernel outside 8-12 / 24-28 (flag)
//   kS3       RDO between DCT and learned kernel for every mode (flag)
enum class Strategy : uint8_t { kDctOnly = 0, kS1 = 1, kS2 = 2, kS3 = 3 };

const char* StrategyName(Strategy s);
// Accepts dct_only, s1, s2, s3. Throws kInvalidInput otherwise.
Strategy ParseStrategy(const std::string& name);

enum class TransformType : uint8_t { kDct = 0, kSbt = 1 };

struct CandidateSet {
  bool dct = false;
  bool sbt = false;
  // A 1-bit transform flag is coded (0 = DCT, 1 = learned kernel).
  bool flag = false;
};

// Pure function of (strategy, mode).
CandidateSet CandidatesFor(Strategy strategy, int mode);

inline constexpr int kModeFieldBits = 6;

struct CodecConfig {
  Strategy strategy = Strategy::kDctOnly;
  // Required for every strategy except kDctOnly. Not owned.
  const KernelBank* bank = nullptr;
  IntraOptions intra;
  BiasMode bias_mode = BiasMode::kCentered;
};

struct CodedBlock {
  int mode = 0;
  std::optional<bool> transform_flag;
  TransformType transform = TransformType::kDct;
  Levels scanned{};  // scan order
};

struct BlockRecord {
  int x = 0;
  int y = 0;
  int mode = 0;
  TransformType transform = TransformType::kDct;
  int bits = 0;
  int64_t sse = 0;
  double cost = 0.0;
  // Lowest J among DCT candidates evaluated for this block (+inf when the
  // strategy offered none).
  double best_dct_cost = 0.0;
};

struct FrameStats {
  int64_t total_bits = 0;
  int64_t sse = 0;
  double psnr = 0.0;  // +inf when lossless
  std::vector<BlockRecord> blocks;
  int n_saab = 0;
  int n_total = 0;
  int n_flags = 0;
};

struct BlockResult {
  CodedBlock coded;
  PixelBlock recon{};
  ResidualBlock residual;  // original - prediction for the chosen mode
  BlockRecord record;
};

// Full mode/transform RDO for the block at `pos`. `recon` holds the causal
// reconstruction; it is read but not modified. Ties in J go to DCT, then to
// the lower mode id.
BlockResult EncodeBlock(const LumaPlane& original, const LumaPlane& recon,
                        BlockPos pos, int qp, const CodecConfig& config);

void WriteCodedBlock(const CodedBlock& block, Strategy strategy, BitWriter& out);

// Reconstruction shared by encoder and decoder: dequantize, inverse
// transform, round half to even, add prediction, clip to [0, 255].
PixelBlock ReconstructBlock(const PixelBlock& prediction, const Levels& levels,
                            TransformType transform, int mode, double q_step,
                            const CodecConfig& config);

struct FramePayload {
  uint64_t bit_count = 0;
  std::vector<uint8_t> bytes;

  friend bool operator==(const FramePayload&, const FramePayload&) = default;
};

struct StreamHeader {
  int width = 0;
  int height = 0;
  int qp = 0;
  Strategy strategy = Strategy::kDctOnly;
  BiasMode bias_mode = BiasMode::kCentered;
  IntraOptions intra;
  uint64_t bank_digest = 0;  // 0 for kDctOnly

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

struct Bitstream {
  StreamHeader header;
  std::vector<FramePayload> frames;
};

std::vector<uint8_t> SerializeBitstream(const Bitstream& stream);
// Throws kFormat on bad magic, version or truncation.
Bitstream ParseBitstream(std::span<const uint8_t> bytes);

struct EncodedFrame {
  FramePayload payload;
  FrameStats stats;
  LumaPlane recon;
};

EncodedFrame EncodeFramePayload(const LumaPlane& plane, int qp,
                                const CodecConfig& config);

// Single-frame stream plus statistics.
struct EncodeResult {
  Bitstream stream;
  FrameStats stats;
  LumaPlane recon;
};
EncodeResult EncodeFrame(const LumaPlane& plane, int qp, const CodecConfig& config);

struct DecodedFrame {
  LumaPlane plane;
  int n_saab = 0;
  int n_flags = 0;
  int n_total = 0;
};

// Decodes one payload. Throws kFormat (with bit offset) on malformed data.
DecodedFrame DecodeFramePayload(const FramePayload& payload,
                                const StreamHeader& header,
                                const KernelBank* bank);

// Checks the bank digest and decodes every frame. Throws kMismatch when the
// stream needs a bank and `bank` is missing or has a different digest.
std::vector<DecodedFrame> DecodeStream(const Bitstream& stream,
                                       const KernelBank* bank);

// First frame of a stream.
LumaPlane DecodeFrame(const Bitstream& stream, const KernelBank* bank);

StreamHeader MakeHeader(const LumaPlane& plane, int qp, const CodecConfig& config);

double PsnrFromSse(int64_t sse, int64_t samples);

}  // namespace saabcodec

#endif  // SAABCODEC_CODEC_H_
