#include "saabcodec/intra_prediction.h"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "saabcodec/error.h"

namespace saabcodec {
namespace {

constexpr int kN = kBlockSide;
constexpr int kLog2N = 3;
constexpr int kSmoothingThreshold = 7;  // intraHorVerDistThres for 8x8

// intraPredAngle for modes 2..34.
constexpr std::array<int, 33> kAngles = {
    32,  26,  21,  17,  13,  9,  5,  2,  0,  -2, -5, -9, -13, -17, -21, -26, -32,
    -26, -21, -17, -13, -9, -5, -2, 0,  2,   5,  9,  13, 17,  21,  26,  32};

// invAngle for modes 11..25.
constexpr std::array<int, 15> kInverseAngles = {
    -4096, -1638, -910, -630, -482, -390, -315, -256,
    -315,  -390,  -482, -630, -910, -1638, -4096};

uint8_t Clip8(int v) { return static_cast<uint8_t>(std::clamp(v, 0, 255)); }

bool IsAvailable(const LumaPlane& recon, BlockPos pos, int x, int y) {
  if (x < 0 || y < 0 || x >= recon.width || y >= recon.height) return false;
  const int bx = x / kN, by = y / kN;
  const int cx = pos.x / kN, cy = pos.y / kN;
  return by < cy || (by == cy && bx < cx);
}

// pred(x, y) stored at row y, column x.
void Set(PixelBlock& pred, int x, int y, int v) { pred[y * kN + x] = Clip8(v); }

PixelBlock PredictPlanar(const ReferenceSamples& p) {
  PixelBlock pred{};
  for (int y = 0; y < kN; ++y) {
    for (int x = 0; x < kN; ++x) {
      const int v = ((kN - 1 - x) * p.Left(y) + (x + 1) * p.Top(kN) +
                     (kN - 1 - y) * p.Top(x) + (y + 1) * p.Left(kN) + kN) >>
                    (kLog2N + 1);
      Set(pred, x, y, v);
    }
  }
  return pred;
}

PixelBlock PredictDc(const ReferenceSamples& p, bool edge_filter) {
  int sum = kN;
  for (int i = 0; i < kN; ++i) sum += p.Top(i) + p.Left(i);
  const int dc = sum >> (kLog2N + 1);
  PixelBlock pred{};
  pred.fill(static_cast<uint8_t>(dc));
  if (edge_filter) {
    Set(pred, 0, 0, (p.Left(0) + 2 * dc + p.Top(0) + 2) >> 2);
    for (int x = 1; x < kN; ++x) Set(pred, x, 0, (p.Top(x) + 3 * dc + 2) >> 2);
    for (int y = 1; y < kN; ++y) Set(pred, 0, y, (p.Left(y) + 3 * dc + 2) >> 2);
  }
  return pred;
}

PixelBlock PredictAngular(const ReferenceSamples& p, int mode, bool edge_filter) {
  const int angle = kAngles[mode - 2];
  const bool vertical = mode >= 18;
  // main(i) runs along the prediction direction's reference edge with
  // main(0) = corner; side(i) is the perpendicular edge.
  auto main_ref = [&](int i) { return i == 0 ? p.Corner() : (vertical ? p.Top(i - 1) : p.Left(i - 1)); };
  auto side_ref = [&](int i) { return i == 0 ? p.Corner() : (vertical ? p.Left(i - 1) : p.Top(i - 1)); };

  // ref[i] for i in [-N, 2N], offset by N.
  std::array<int, 3 * kN + 1> ref{};
  auto at = [&ref](int i) -> int& { return ref[i + kN]; };
  for (int i = 0; i <= kN; ++i) at(i) = main_ref(i);
  if (angle < 0) {
    const int last = (kN * angle) >> 5;
    if (last < -1) {
      const int inv = kInverseAngles[mode - 11];
      for (int i = last; i <= -1; ++i) at(i) = side_ref((i * inv + 128) >> 8);
    }
  } else {
    for (int i = kN + 1; i <= 2 * kN; ++i) at(i) = main_ref(i);
  }

  PixelBlock pred{};
  for (int j = 0; j < kN; ++j) {      // distance from the reference edge
    const int idx = ((j + 1) * angle) >> 5;
    const int fact = ((j + 1) * angle) & 31;
    for (int i = 0; i < kN; ++i) {    // position along the edge
      const int v = fact != 0
                        ? ((32 - fact) * at(i + idx + 1) + fact * at(i + idx + 2) + 16) >> 5
                        : at(i + idx + 1);
      if (vertical) Set(pred, i, j, v); else Set(pred, j, i, v);
    }
  }

  if (edge_filter && angle == 0) {
    for (int j = 0; j < kN; ++j) {
      if (vertical) {
        Set(pred, 0, j, p.Top(0) + ((p.Left(j) - p.Corner()) >> 1));
      } else {
        Set(pred, j, 0, p.Left(0) + ((p.Top(j) - p.Corner()) >> 1));
      }
    }
  }
  return pred;
}

void CheckMode(int mode) {
  if (mode < 0 || mode >= kNumIntraModes)
    throw Error(ErrorKind::kInvalidInput, "intra mode out of range: " + std::to_string(mode));
}

PixelBlock PredictChecked(const ReferenceSamples& refs,
                          const ReferenceSamples& smoothed, int mode,
                          const IntraOptions& options) {
  const ReferenceSamples& p =
      options.reference_smoothing && UsesSmoothedReferences(mode) ? smoothed : refs;
  if (mode == kPlanarMode) return PredictPlanar(p);
  if (mode == kDcMode) return PredictDc(p, options.boundary_filters);
  return PredictAngular(p, mode, options.boundary_filters);
}

}  // namespace

ReferenceSamples BuildReferences(const LumaPlane& recon, BlockPos pos) {
  if (pos.x < 0 || pos.y < 0 || pos.x % kN != 0 || pos.y % kN != 0 ||
      pos.x + kN > recon.width || pos.y + kN > recon.height) {
    throw Error(ErrorKind::kInvalidInput,
                "block position (" + std::to_string(pos.x) + ", " +
                    std::to_string(pos.y) + ") is off the 8x8 grid");
  }
  ReferenceSamples refs;
  std::array<bool, ReferenceSamples::kCount> avail{};
  auto coord = [&pos](int i) {
    // Scan index to picture coordinate.
    if (i < ReferenceSamples::kCorner)
      return std::pair{pos.x - 1, pos.y + (ReferenceSamples::kCorner - 1 - i)};
    if (i == ReferenceSamples::kCorner) return std::pair{pos.x - 1, pos.y - 1};
    return std::pair{pos.x + (i - ReferenceSamples::kCorner - 1), pos.y - 1};
  };
  bool any = false;
  for (int i = 0; i < ReferenceSamples::kCount; ++i) {
    const auto [x, y] = coord(i);
    avail[i] = IsAvailable(recon, pos, x, y);
    if (avail[i]) {
      refs.scan[i] = recon.at(x, y);
      any = true;
    }
  }
  if (!any) {
    refs.scan.fill(128);
    return refs;
  }
  if (!avail[0]) {
    int first = 1;
    while (!avail[first]) ++first;
    refs.scan[0] = refs.scan[first];
  }
  for (int i = 1; i < ReferenceSamples::kCount; ++i)
    if (!avail[i]) refs.scan[i] = refs.scan[i - 1];
  return refs;
}

ReferenceSamples SmoothReferences(const ReferenceSamples& refs) {
  ReferenceSamples out = refs;
  for (int i = 1; i < ReferenceSamples::kCount - 1; ++i)
    out.scan[i] = (refs.scan[i - 1] + 2 * refs.scan[i] + refs.scan[i + 1] + 2) >> 2;
  return out;
}

bool UsesSmoothedReferences(int mode) {
  if (mode == kDcMode) return false;
  const int dist = std::min(std::abs(mode - kVerticalMode), std::abs(mode - kHorizontalMode));
  return dist > kSmoothingThreshold;
}

PixelBlock PredictFromReferences(const ReferenceSamples& refs, int mode,
                                 const IntraOptions& options) {
  CheckMode(mode);
  return PredictChecked(refs, SmoothReferences(refs), mode, options);
}

PixelBlock IntraPredict(const LumaPlane& recon, BlockPos pos, int mode,
                        const IntraOptions& options) {
  return PredictFromReferences(BuildReferences(recon, pos), mode, options);
}

std::array<PixelBlock, kNumIntraModes> PredictAllModes(const LumaPlane& recon,
                                                       BlockPos pos,
                                                       const IntraOptions& options) {
  const ReferenceSamples refs = BuildReferences(recon, pos);
  const ReferenceSamples smoothed = SmoothReferences(refs);
  std::array<PixelBlock, kNumIntraModes> out;
  for (int mode = 0; mode < kNumIntraModes; ++mode)
    out[mode] = PredictChecked(refs, smoothed, mode, options);
  return out;
}

}  // namespace saabcodec
