#ifndef SAABCODEC_INTRA_PREDICTION_H_
#define SAABCODEC_INTRA_PREDICTION_H_

#include <array>

#include "saabcodec/block.h"
#include "saabcodec/luma_plane.h"
#include "saabcodec/mode_groups.h"

namespace saabcodec {

struct BlockPos {
  int x = 0;  // luma column of the top-left sample, multiple of 8
  int y = 0;
};

struct IntraOptions {
  // [1 2 1] reference filtering for the 8x8 modes HEVC selects.
  bool reference_smoothing = true;
  // DC edge smoothing and the first-row/column gradient filter on pure
  // horizontal and vertical prediction.
  bool boundary_filters = true;
};

// The 4N + 1 neighbours of an N x N block in substitution-scan order:
// left column bottom to top (index 0 = p[-1][2N-1]), corner at index 2N,
// then the top row left to right (index 2N + 1 + x = p[x][-1]).
struct ReferenceSamples {
  static constexpr int kCount = 4 * kBlockSide + 1;
  static constexpr int kCorner = 2 * kBlockSide;

  std::array<int, kCount> scan{};

  int Corner() const { return scan[kCorner]; }
  int Top(int x) const { return scan[kCorner + 1 + x]; }    // p[x][-1]
  int Left(int y) const { return scan[kCorner - 1 - y]; }   // p[-1][y]
  void SetTop(int x, int v) { scan[kCorner + 1 + x] = v; }
  void SetLeft(int y, int v) { scan[kCorner - 1 - y] = v; }
  void SetCorner(int v) { scan[kCorner] = v; }
};

// Gathers neighbours from the reconstructed picture. A sample counts as
// available when it lies inside the picture in an 8x8 block that precedes
// `pos` in raster order, so nothing right of or below the causal region is
// read. Missing samples are substituted as in HEVC: the scan start copies
// the first available sample, later gaps copy their predecessor, and with
// nothing available every entry is 128. Throws kInvalidInput for a position
// off the 8x8 grid.
ReferenceSamples BuildReferences(const LumaPlane& recon, BlockPos pos);

// [1 2 1] over the scan, endpoints unchanged.
ReferenceSamples SmoothReferences(const ReferenceSamples& refs);

// True when HEVC filters references of an 8x8 block for this mode.
bool UsesSmoothedReferences(int mode);

// Prediction from already-gathered references. Smoothing (if enabled and
// applicable to the mode) happens inside.
PixelBlock PredictFromReferences(const ReferenceSamples& refs, int mode,
                                 const IntraOptions& options = {});

PixelBlock IntraPredict(const LumaPlane& recon, BlockPos pos, int mode,
                        const IntraOptions& options = {});

// All 35 predictions for one block, sharing the reference gathering.
std::array<PixelBlock, kNumIntraModes> PredictAllModes(
    const LumaPlane& recon, BlockPos pos, const IntraOptions& options = {});

}  // namespace saabcodec

#endif  // SAABCODEC_INTRA_PREDICTION_H_
