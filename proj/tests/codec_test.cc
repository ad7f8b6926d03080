#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "saabcodec/codec.h"
#include "saabcodec/coefficient_coding.h"
#include "saabcodec/dct.h"
#include "saabcodec/error.h"
#include "saabcodec/mode_groups.h"
#include "saabcodec/rd_params.h"
#include "test_util.h"

namespace saabcodec {
namespace {

using testing::MakePan;

const KernelBank& Bank() {
  static const KernelBank bank = testing::SmallBank();
  return bank;
}

CodecConfig Config(Strategy s) {
  CodecConfig c;
  c.strategy = s;
  if (s != Strategy::kDctOnly) c.bank = &Bank();
  return c;
}

constexpr Strategy kAllStrategies[] = {Strategy::kDctOnly, Strategy::kS1, Strategy::kS2,
                                       Strategy::kS3};

TEST(RdParams, HevcConventions) {
  const RdParams p22 = RdParamsForQp(22);
  EXPECT_DOUBLE_EQ(p22.q_step, 8.0);
  EXPECT_NEAR(p22.lambda, 0.57 * std::pow(2.0, 10.0 / 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(RdParamsForQp(4).q_step, 1.0);
  EXPECT_THROW(RdParamsForQp(-1), Error);
  EXPECT_THROW(RdParamsForQp(52), Error);
  EXPECT_DOUBLE_EQ(RdCost(10, 100, 2.0), 120.0);
  EXPECT_DOUBLE_EQ(RdCost(0, 0, 5.0), 0.0);
}

TEST(Quantize, DeadzoneExamples) {
  const double q = 10.0;
  CoeffBlock y{};
  y[0] = 0.0;
  y[1] = q;
  y[2] = -q;
  y[3] = 0.66 * q;
  y[4] = 0.67 * q;
  y[5] = 2.5 * q;
  const Levels l = Quantize(y, q);
  EXPECT_EQ(l[0], 0);
  EXPECT_EQ(l[1], 1);
  EXPECT_EQ(l[2], -1);
  EXPECT_EQ(l[3], 0);
  EXPECT_EQ(l[4], 1);
  EXPECT_EQ(l[5], 2);
  EXPECT_DOUBLE_EQ(Dequantize(l, q)[5], 20.0);
}

TEST(Quantize, ErrorBelowStep) {
  SeededRng rng(9);
  for (int trial = 0; trial < 1000000 / kBlockArea; ++trial) {
    const double q = 0.5 + rng.Uniform() * 60.0;
    const CoeffBlock y = testing::RandomSamples(rng, 2000.0);
    const CoeffBlock back = Dequantize(Quantize(y, q), q);
    for (int i = 0; i < kBlockArea; ++i) ASSERT_LT(std::abs(y[i] - back[i]), q);
  }
}

TEST(Scan, ZigzagIsAPermutationStartingAtDc) {
  std::vector<bool> seen(kBlockArea);
  for (int r : kZigzag) seen.at(r) = true;
  for (bool b : seen) EXPECT_TRUE(b);
  EXPECT_EQ(kZigzag[0], 0);
  EXPECT_EQ(kZigzag[1], 1);
  EXPECT_EQ(kZigzag[2], 8);
  EXPECT_EQ(kZigzag[63], 63);
  Levels l{};
  for (int i = 0; i < kBlockArea; ++i) l[i] = i * 3 - 50;
  EXPECT_EQ(FromScan(ToScan(l, ScanOrder::kZigzag), ScanOrder::kZigzag), l);
  EXPECT_EQ(ToScan(l, ScanOrder::kIdentity), l);
}

int CodedLength(const Levels& l) {
  BitWriter w;
  EncodeLevels(l, w);
  return static_cast<int>(w.bit_count());
}

TEST(EncodeLevels, SmallBlocks) {
  Levels zero{};
  EXPECT_EQ(CodedLength(zero), 1);
  Levels one{};
  one[0] = 1;
  EXPECT_EQ(CodedLength(one), 9);  // flag, last_pos, abs-1 = 0, sign
  Levels tail{};
  tail[63] = -3;
  // flag, last_pos, |3|-1 = 2 -> 3 bits, sign, 63 sig flags
  EXPECT_EQ(CodedLength(tail), 1 + 6 + 3 + 1 + 63);
}

TEST(EncodeLevels, FuzzRoundTrip) {
  SeededRng rng(77);
  BitWriter w;
  std::vector<Levels> blocks;
  for (int b = 0; b < 100000; ++b) {
    Levels l{};
    const int density = static_cast<int>(rng.Below(5));
    for (int& v : l) {
      if (rng.Below(8) < static_cast<uint64_t>(density)) {
        const int mag = rng.Below(10) == 0 ? static_cast<int>(rng.Below(5000)) + 1
                                           : static_cast<int>(rng.Below(4)) + 1;
        v = rng.Below(2) ? mag : -mag;
      }
    }
    const uint64_t before = w.bit_count();
    EncodeLevels(l, w);
    ASSERT_EQ(w.bit_count() - before, static_cast<uint64_t>(CountLevelBits(l)));
    blocks.push_back(l);
  }
  const uint64_t bits = w.bit_count();
  const std::vector<uint8_t> bytes = w.Take();
  BitReader r(bytes, bits);
  for (const Levels& l : blocks) ASSERT_EQ(DecodeLevels(r), l);
  EXPECT_EQ(r.remaining(), 0u);
}

TEST(DecodeLevels, MalformedInput) {
  {
    const std::vector<uint8_t> empty;
    BitReader r(empty, 0);
    EXPECT_THROW(DecodeLevels(r), Error);
  }
  {
    // flag set, last_pos = 63, then the stream ends.
    BitWriter w;
    w.PutBit(true);
    w.PutBits(63, 6);
    const uint64_t bits = w.bit_count();
    const auto bytes = w.Take();
    BitReader r(bytes, bits);
    try {
      DecodeLevels(r);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kFormat);
    }
  }
  {
    // Exp-Golomb prefix longer than any valid level.
    BitWriter w;
    w.PutBit(true);
    w.PutBits(0, 6);
    w.PutBits(0, 32);
    w.PutBits(0, 8);
    w.PutBit(true);
    const uint64_t bits = w.bit_count();
    const auto bytes = w.Take();
    BitReader r(bytes, bits);
    EXPECT_THROW(DecodeLevels(r), Error);
  }
}

TEST(Candidates, PerStrategy) {
  for (int m = 0; m < kNumIntraModes; ++m) {
    const bool near = IsNearHorVerMode(m);
    const CandidateSet d = CandidatesFor(Strategy::kDctOnly, m);
    EXPECT_TRUE(d.dct && !d.sbt && !d.flag);
    const CandidateSet s1 = CandidatesFor(Strategy::kS1, m);
    EXPECT_EQ(s1.dct, near);
    EXPECT_EQ(s1.sbt, !near);
    EXPECT_FALSE(s1.flag);
    const CandidateSet s2 = CandidatesFor(Strategy::kS2, m);
    EXPECT_TRUE(s2.dct);
    EXPECT_EQ(s2.sbt, !near);
    EXPECT_EQ(s2.flag, !near);
    const CandidateSet s3 = CandidatesFor(Strategy::kS3, m);
    EXPECT_TRUE(s3.dct && s3.sbt && s3.flag);
  }
  EXPECT_EQ(ParseStrategy("s2"), Strategy::kS2);
  EXPECT_STREQ(StrategyName(Strategy::kDctOnly), "dct_only");
  EXPECT_THROW(ParseStrategy("s4"), Error);
}

TEST(EncodeFrame, MidGrayIsLosslessAndCheap) {
  const LumaPlane gray(32, 32, 128);
  for (Strategy s : kAllStrategies) {
    const EncodeResult r = EncodeFrame(gray, 37, Config(s));
    EXPECT_EQ(r.stats.sse, 0);
    EXPECT_TRUE(std::isinf(r.stats.psnr));
    EXPECT_EQ(r.recon, gray);
    // Per block: mode field, optional flag, coded_block_flag.
    EXPECT_EQ(r.stats.total_bits, 16 * (kModeFieldBits + 1) + r.stats.n_flags) << StrategyName(s);
    EXPECT_EQ(r.stats.n_total, 16);
    EXPECT_EQ(DecodeFrame(r.stream, s == Strategy::kDctOnly ? nullptr : &Bank()), gray);
  }
}

TEST(EncodeFrame, RejectsBadInput) {
  EXPECT_THROW(EncodeFrame(LumaPlane(12, 16), 22, Config(Strategy::kDctOnly)), Error);
  EXPECT_THROW(EncodeFrame(LumaPlane(16, 16), 22, [] {
                 CodecConfig c;
                 c.strategy = Strategy::kS3;
                 return c;
               }()), Error);
}

TEST(Codec, DecoderMirrorsEncoder) {
  const std::vector<Clip> clips = {MakePan("camera", 10, 10, 1, 1, 2, 64),
                                   MakePan("rocket", 100, 200, 1, 0, 2, 64),
                                   MakePan("chelsea", 50, 30, 0, 1, 2, 64)};
  for (const Clip& clip : clips) {
    for (int qp : kDefaultQps) {
      for (Strategy s : kAllStrategies) {
        const CodecConfig cfg = Config(s);
        Bitstream stream;
        stream.header = MakeHeader(clip.frames[0], qp, cfg);
        std::vector<EncodedFrame> encoded;
        for (const LumaPlane& f : clip.frames) {
          encoded.push_back(EncodeFramePayload(f, qp, cfg));
          stream.frames.push_back(encoded.back().payload);
          EXPECT_EQ(encoded.back().payload.bit_count,
                    static_cast<uint64_t>(encoded.back().stats.total_bits));
        }
        const Bitstream parsed = ParseBitstream(SerializeBitstream(stream));
        const auto decoded = DecodeStream(parsed, cfg.bank);
        ASSERT_EQ(decoded.size(), encoded.size());
        for (std::size_t f = 0; f < decoded.size(); ++f) {
          EXPECT_EQ(decoded[f].plane, encoded[f].recon)
              << clip.name << " qp " << qp << " " << StrategyName(s);
          EXPECT_EQ(decoded[f].n_saab, encoded[f].stats.n_saab);
          EXPECT_EQ(decoded[f].n_flags, encoded[f].stats.n_flags);
        }
      }
    }
  }
}

TEST(Codec, BlockAccounting) {
  const Clip clip = MakePan("coffee", 80, 40, 1, 0, 1, 64);
  for (Strategy s : kAllStrategies) {
    const RdParams rd = RdParamsForQp(27);
    const EncodeResult r = EncodeFrame(clip.frames[0], 27, Config(s));
    int64_t bits = 0, sse = 0;
    int n_saab = 0, n_flags = 0;
    for (const BlockRecord& b : r.stats.blocks) {
      bits += b.bits;
      sse += b.sse;
      const CandidateSet c = CandidatesFor(s, b.mode);
      n_flags += c.flag;
      n_saab += b.transform == TransformType::kSbt;
      EXPECT_TRUE(b.transform == TransformType::kSbt ? c.sbt : c.dct);
      EXPECT_NEAR(b.cost, RdCost(b.bits, static_cast<double>(b.sse), rd.lambda), 1e-9);
      // The chosen J minimizes over a superset of the DCT candidates.
      EXPECT_LE(b.cost, b.best_dct_cost);
      if (s == Strategy::kDctOnly) {
        EXPECT_EQ(b.cost, b.best_dct_cost);
      }
    }
    EXPECT_EQ(bits, r.stats.total_bits);
    EXPECT_EQ(sse, r.stats.sse);
    EXPECT_EQ(n_saab, r.stats.n_saab);
    EXPECT_EQ(n_flags, r.stats.n_flags);
    if (s == Strategy::kDctOnly) {
      EXPECT_EQ(n_saab, 0);
    }
    if (s == Strategy::kS3) {
      EXPECT_EQ(n_flags, r.stats.n_total);
    }
  }
}

TEST(Codec, BankDigestMismatch) {
  const Clip clip = MakePan("camera", 0, 0, 1, 0, 1, 32);
  const EncodeResult r = EncodeFrame(clip.frames[0], 32, Config(Strategy::kS2));
  const KernelBank other = RoundBank(Bank(), 4);
  for (const KernelBank* b : {static_cast<const KernelBank*>(nullptr), &other}) {
    try {
      DecodeStream(r.stream, b);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kMismatch);
    }
  }
  // The anchor never needs a bank.
  const EncodeResult a = EncodeFrame(clip.frames[0], 32, Config(Strategy::kDctOnly));
  EXPECT_EQ(a.stream.header.bank_digest, 0u);
  EXPECT_NO_THROW(DecodeStream(a.stream, &other));
}

TEST(Codec, TruncatedStreams) {
  const Clip clip = MakePan("rocket", 0, 100, 1, 0, 1, 32);
  const EncodeResult r = EncodeFrame(clip.frames[0], 22, Config(Strategy::kS3));
  std::vector<uint8_t> bytes = SerializeBitstream(r.stream);
  for (std::size_t cut : {std::size_t{1}, std::size_t{5}, bytes.size() / 2}) {
    std::vector<uint8_t> t(bytes.begin(), bytes.end() - cut);
    EXPECT_THROW(ParseBitstream(t), Error);
  }
  std::vector<uint8_t> bad = bytes;
  bad[0] ^= 0xff;
  EXPECT_THROW(ParseBitstream(bad), Error);
  // Payload cut short but still self-consistent: decoding runs out of bits.
  Bitstream cut = r.stream;
  cut.frames[0].bit_count /= 2;
  cut.frames[0].bytes.resize((cut.frames[0].bit_count + 7) / 8);
  try {
    DecodeStream(cut, &Bank());
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
  }
}

TEST(Codec, RateFallsAndDistortionRisesWithQp) {
  const Clip clip = MakePan("motorcycle", 120, 90, 1, 0, 1, 64);
  for (Strategy s : kAllStrategies) {
    int64_t prev_bits = std::numeric_limits<int64_t>::max();
    double prev_psnr = std::numeric_limits<double>::infinity();
    for (int qp : kDefaultQps) {
      const EncodeResult r = EncodeFrame(clip.frames[0], qp, Config(s));
      EXPECT_LT(r.stats.total_bits, prev_bits);
      EXPECT_LT(r.stats.psnr, prev_psnr);
      prev_bits = r.stats.total_bits;
      prev_psnr = r.stats.psnr;
    }
  }
}

TEST(ReconstructBlock, ClipsToPixelRange) {
  const CodecConfig cfg = Config(Strategy::kDctOnly);
  const double q = RdParamsForQp(22).q_step;  // 8
  PixelBlock bright;
  bright.fill(250);
  Levels up{};
  up[0] = 10;  // +10 on every sample
  for (uint8_t v : ReconstructBlock(bright, up, TransformType::kDct, 0, q, cfg)) EXPECT_EQ(v, 255);
  PixelBlock dark;
  dark.fill(5);
  Levels down{};
  down[0] = -40;
  for (uint8_t v : ReconstructBlock(dark, down, TransformType::kDct, 0, q, cfg)) EXPECT_EQ(v, 0);
  Levels mid{};
  mid[0] = 2;  // +2 exactly
  for (uint8_t v : ReconstructBlock(dark, mid, TransformType::kDct, 0, q, cfg)) EXPECT_EQ(v, 7);
}

}  // namespace
}  // namespace saabcodec
