#include "saabcodec/codec.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "saabcodec/byte_io.h"
#include "saabcodec/dct.h"
#include "saabcodec/error.h"

namespace saabcodec {
namespace {

constexpr char kStreamMagic[] = "SBTC";
constexpr uint8_t kStreamVersion = 1;

ScanOrder ScanFor(TransformType t) {
  return t == TransformType::kDct ? ScanOrder::kZigzag : ScanOrder::kIdentity;
}

void RequireBank(const CodecConfig& config) {
  if (config.strategy != Strategy::kDctOnly && config.bank == nullptr) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("strategy ") + StrategyName(config.strategy) +
                    " needs a kernel bank");
  }
}

CoeffBlock Forward(const SampleBlock& x, TransformType t, int mode,
                   const CodecConfig& config) {
  if (t == TransformType::kDct) return DctForward(x);
  return KernelForward(config.bank->ForMode(mode), x, config.bias_mode);
}

SampleBlock Inverse(const CoeffBlock& y, TransformType t, int mode,
                    const CodecConfig& config) {
  if (t == TransformType::kDct) return DctInverse(y);
  return KernelInverse(config.bank->ForMode(mode), y, config.bias_mode);
}

bool AllZero(const Levels& levels) {
  return std::all_of(levels.begin(), levels.end(), [](int32_t v) { return v == 0; });
}

int64_t BlockSse(const PixelBlock& a, const PixelBlock& b) {
  int64_t sse = 0;
  for (int i = 0; i < kBlockArea; ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    sse += d * d;
  }
  return sse;
}

uint8_t PackIntra(const IntraOptions& o) {
  return static_cast<uint8_t>((o.reference_smoothing ? 1 : 0) |
                              (o.boundary_filters ? 2 : 0));
}

IntraOptions UnpackIntra(uint8_t bits) {
  IntraOptions o;
  o.reference_smoothing = bits & 1;
  o.boundary_filters = bits & 2;
  return o;
}

CodecConfig ConfigFromHeader(const StreamHeader& header, const KernelBank* bank) {
  CodecConfig config;
  config.strategy = header.strategy;
  config.bank = bank;
  config.intra = header.intra;
  config.bias_mode = header.bias_mode;
  return config;
}

}  // namespace

const char* StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kDctOnly: return "dct_only";
    case Strategy::kS1: return "s1";
    case Strategy::kS2: return "s2";
    case Strategy::kS3: return "s3";
  }
  return "unknown";
}

Strategy ParseStrategy(const std::string& name) {
  for (Strategy s : {Strategy::kDctOnly, Strategy::kS1, Strategy::kS2, Strategy::kS3})
    if (name == StrategyName(s)) return s;
  throw Error(ErrorKind::kInvalidInput, "unknown strategy '" + name + "'");
}

CandidateSet CandidatesFor(Strategy strategy, int mode) {
  switch (strategy) {
    case Strategy::kDctOnly:
      return {true, false, false};
    case Strategy::kS1:
      return IsNearHorVerMode(mode) ? CandidateSet{true, false, false}
                                    : CandidateSet{false, true, false};
    case Strategy::kS2:
      return IsNearHorVerMode(mode) ? CandidateSet{true, false, false}
                                    : CandidateSet{true, true, true};
    case Strategy::kS3:
      return {true, true, true};
  }
  return {true, false, false};
}

PixelBlock ReconstructBlock(const PixelBlock& prediction, const Levels& levels,
                            TransformType transform, int mode, double q_step,
                            const CodecConfig& config) {
  if (AllZero(levels) &&
      (transform == TransformType::kDct || config.bias_mode == BiasMode::kCentered)) {
    return prediction;
  }
  const SampleBlock residual =
      Inverse(Dequantize(levels, q_step), transform, mode, config);
  PixelBlock out{};
  for (int i = 0; i < kBlockArea; ++i) {
    const int r = static_cast<int>(std::nearbyint(residual[i]));
    out[i] = static_cast<uint8_t>(std::clamp(prediction[i] + r, 0, 255));
  }
  return out;
}

BlockResult EncodeBlock(const LumaPlane& original, const LumaPlane& recon,
                        BlockPos pos, int qp, const CodecConfig& config) {
  RequireBank(config);
  const RdParams rd = RdParamsForQp(qp);
  const PixelBlock source = original.GetBlock(pos.x, pos.y);
  const auto predictions = PredictAllModes(recon, pos, config.intra);

  BlockResult best;
  bool have_best = false;
  double best_dct = std::numeric_limits<double>::infinity();

  for (int mode = 0; mode < kNumIntraModes; ++mode) {
    const PixelBlock& pred = predictions[mode];
    SampleBlock residual{};
    for (int i = 0; i < kBlockArea; ++i)
      residual[i] = static_cast<int>(source[i]) - static_cast<int>(pred[i]);

    const CandidateSet cands = CandidatesFor(config.strategy, mode);
    for (TransformType t : {TransformType::kDct, TransformType::kSbt}) {
      if (t == TransformType::kDct ? !cands.dct : !cands.sbt) continue;
      const Levels levels = Quantize(Forward(residual, t, mode, config), rd.q_step);
      const Levels scanned = ToScan(levels, ScanFor(t));
      const int bits = kModeFieldBits + (cands.flag ? 1 : 0) + CountLevelBits(scanned);
      const PixelBlock rec = ReconstructBlock(pred, levels, t, mode, rd.q_step, config);
      const int64_t sse = BlockSse(source, rec);
      const double cost = RdCost(bits, static_cast<double>(sse), rd.lambda);
      if (t == TransformType::kDct) best_dct = std::min(best_dct, cost);

      const auto key = std::tuple(cost, static_cast<int>(t), mode);
      const auto best_key = std::tuple(best.record.cost,
                                       static_cast<int>(best.record.transform),
                                       best.record.mode);
      if (have_best && !(key < best_key)) continue;
      have_best = true;
      best.coded.mode = mode;
      best.coded.transform = t;
      best.coded.transform_flag =
          cands.flag ? std::optional<bool>(t == TransformType::kSbt) : std::nullopt;
      best.coded.scanned = scanned;
      best.recon = rec;
      best.record = {pos.x, pos.y, mode, t, bits, sse, cost, 0.0};
      std::array<int, kBlockArea> ints{};
      for (int i = 0; i < kBlockArea; ++i) ints[i] = static_cast<int>(residual[i]);
      best.residual = ResidualBlock::FromSamples(ints);
    }
  }
  best.record.best_dct_cost = best_dct;
  return best;
}

void WriteCodedBlock(const CodedBlock& block, Strategy strategy, BitWriter& out) {
  out.PutBits(static_cast<uint32_t>(block.mode), kModeFieldBits);
  if (CandidatesFor(strategy, block.mode).flag) out.PutBit(block.transform_flag.value());
  EncodeLevels(block.scanned, out);
}

double PsnrFromSse(int64_t sse, int64_t samples) {
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(sse) / static_cast<double>(samples);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

StreamHeader MakeHeader(const LumaPlane& plane, int qp, const CodecConfig& config) {
  StreamHeader h;
  h.width = plane.width;
  h.height = plane.height;
  h.qp = qp;
  h.strategy = config.strategy;
  h.bias_mode = config.bias_mode;
  h.intra = config.intra;
  h.bank_digest = config.strategy == Strategy::kDctOnly ? 0 : BankDigest(*config.bank);
  return h;
}

EncodedFrame EncodeFramePayload(const LumaPlane& plane, int qp,
                                const CodecConfig& config) {
  RequireBank(config);
  if (plane.width % kBlockSide != 0 || plane.height % kBlockSide != 0 ||
      plane.width == 0 || plane.height == 0) {
    throw Error(ErrorKind::kInvalidInput, "plane dimensions must be positive multiples of 8");
  }
  EncodedFrame frame;
  frame.recon = LumaPlane(plane.width, plane.height);
  BitWriter out;
  for (int y = 0; y < plane.height; y += kBlockSide) {
    for (int x = 0; x < plane.width; x += kBlockSide) {
      BlockResult block = EncodeBlock(plane, frame.recon, {x, y}, qp, config);
      const uint64_t before = out.bit_count();
      WriteCodedBlock(block.coded, config.strategy, out);
      block.record.bits = static_cast<int>(out.bit_count() - before);
      frame.recon.PutBlock(x, y, block.recon);

      FrameStats& s = frame.stats;
      s.total_bits += block.record.bits;
      s.sse += block.record.sse;
      s.n_total += 1;
      if (block.coded.transform == TransformType::kSbt) s.n_saab += 1;
      if (block.coded.transform_flag.has_value()) s.n_flags += 1;
      s.blocks.push_back(block.record);
    }
  }
  frame.stats.psnr = PsnrFromSse(frame.stats.sse,
                                 static_cast<int64_t>(plane.width) * plane.height);
  frame.payload.bit_count = out.bit_count();
  frame.payload.bytes = out.Take();
  return frame;
}

EncodeResult EncodeFrame(const LumaPlane& plane, int qp, const CodecConfig& config) {
  EncodedFrame frame = EncodeFramePayload(plane, qp, config);
  EncodeResult result;
  result.stream.header = MakeHeader(plane, qp, config);
  result.stream.frames.push_back(std::move(frame.payload));
  result.stats = std::move(frame.stats);
  result.recon = std::move(frame.recon);
  return result;
}

DecodedFrame DecodeFramePayload(const FramePayload& payload,
                                const StreamHeader& header,
                                const KernelBank* bank) {
  const CodecConfig config = ConfigFromHeader(header, bank);
  RequireBank(config);
  const RdParams rd = RdParamsForQp(header.qp);
  BitReader in(payload.bytes, payload.bit_count);
  DecodedFrame out;
  out.plane = LumaPlane(header.width, header.height);
  for (int y = 0; y < header.height; y += kBlockSide) {
    for (int x = 0; x < header.width; x += kBlockSide) {
      const uint64_t at = in.position();
      const int mode = static_cast<int>(in.GetBits(kModeFieldBits));
      if (mode >= kNumIntraModes) {
        throw Error(ErrorKind::kFormat, "invalid intra mode " + std::to_string(mode) +
                                            " at bit " + std::to_string(at));
      }
      const CandidateSet cands = CandidatesFor(header.strategy, mode);
      TransformType t = cands.sbt && !cands.dct ? TransformType::kSbt : TransformType::kDct;
      if (cands.flag) {
        t = in.GetBit() ? TransformType::kSbt : TransformType::kDct;
        ++out.n_flags;
      }
      const Levels levels = FromScan(DecodeLevels(in), ScanFor(t));
      const PixelBlock pred = IntraPredict(out.plane, {x, y}, mode, header.intra);
      out.plane.PutBlock(x, y, ReconstructBlock(pred, levels, t, mode, rd.q_step, config));
      ++out.n_total;
      if (t == TransformType::kSbt) ++out.n_saab;
    }
  }
  if (in.remaining() != 0) {
    throw Error(ErrorKind::kFormat, std::to_string(in.remaining()) +
                                        " unread bits at end of frame payload");
  }
  return out;
}

std::vector<DecodedFrame> DecodeStream(const Bitstream& stream, const KernelBank* bank) {
  const StreamHeader& h = stream.header;
  if (h.strategy != Strategy::kDctOnly) {
    if (bank == nullptr)
      throw Error(ErrorKind::kMismatch, "stream needs a kernel bank");
    if (BankDigest(*bank) != h.bank_digest)
      throw Error(ErrorKind::kMismatch, "kernel bank digest does not match the stream");
  }
  std::vector<DecodedFrame> frames;
  frames.reserve(stream.frames.size());
  for (const FramePayload& payload : stream.frames)
    frames.push_back(DecodeFramePayload(payload, h, bank));
  return frames;
}

LumaPlane DecodeFrame(const Bitstream& stream, const KernelBank* bank) {
  if (stream.frames.empty()) throw Error(ErrorKind::kFormat, "stream has no frames");
  Bitstream first{stream.header, {stream.frames.front()}};
  return std::move(DecodeStream(first, bank).front().plane);
}

std::vector<uint8_t> SerializeBitstream(const Bitstream& stream) {
  const StreamHeader& h = stream.header;
  ByteWriter w;
  w.PutTag(kStreamMagic);
  w.PutU8(kStreamVersion);
  w.PutU16(static_cast<uint16_t>(h.width));
  w.PutU16(static_cast<uint16_t>(h.height));
  w.PutU8(static_cast<uint8_t>(h.qp));
  w.PutU8(static_cast<uint8_t>(h.strategy));
  w.PutU8(static_cast<uint8_t>(h.bias_mode));
  w.PutU8(PackIntra(h.intra));
  w.PutU64(h.bank_digest);
  w.PutU32(static_cast<uint32_t>(stream.frames.size()));
  for (const FramePayload& f : stream.frames) {
    w.PutU32(static_cast<uint32_t>(f.bit_count));
    w.PutBytes(f.bytes);
  }
  return w.Take();
}

Bitstream ParseBitstream(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag(kStreamMagic);
  const uint8_t version = r.GetU8();
  if (version != kStreamVersion)
    throw Error(ErrorKind::kFormat, "unsupported stream version " + std::to_string(version));
  Bitstream s;
  StreamHeader& h = s.header;
  h.width = r.GetU16();
  h.height = r.GetU16();
  h.qp = r.GetU8();
  const uint8_t strategy = r.GetU8();
  if (strategy > static_cast<uint8_t>(Strategy::kS3))
    throw Error(ErrorKind::kFormat, "unknown strategy code " + std::to_string(strategy));
  h.strategy = static_cast<Strategy>(strategy);
  const uint8_t bias = r.GetU8();
  if (bias > static_cast<uint8_t>(BiasMode::kCentered))
    throw Error(ErrorKind::kFormat, "unknown bias mode " + std::to_string(bias));
  h.bias_mode = static_cast<BiasMode>(bias);
  h.intra = UnpackIntra(r.GetU8());
  h.bank_digest = r.GetU64();
  if (h.width == 0 || h.height == 0 || h.width % kBlockSide || h.height % kBlockSide ||
      h.qp > 51) {
    throw Error(ErrorKind::kFormat, "invalid stream header");
  }
  const uint32_t frames = r.GetU32();
  for (uint32_t i = 0; i < frames; ++i) {
    FramePayload f;
    f.bit_count = r.GetU32();
    const auto payload = r.GetBytes((f.bit_count + 7) / 8);
    f.bytes.assign(payload.begin(), payload.end());
    s.frames.push_back(std::move(f));
  }
  if (!r.done()) throw Error(ErrorKind::kFormat, "trailing bytes after last frame");
  return s;
}

}  // namespace saabcodec
