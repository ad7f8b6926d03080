#ifndef SAABCODEC_MODE_GROUPS_H_
#define SAABCODEC_MODE_GROUPS_H_

#include <array>
#include <vector>

namespace saabcodec {

inline constexpr int kNumIntraModes = 35;
inline constexpr int kNumKernels = 24;

inline constexpr int kPlanarMode = 0;
inline constexpr int kDcMode = 1;
inline constexpr int kHorizontalMode = 10;
inline constexpr int kVerticalMode = 26;

// Which residuals train each kernel and which kernel each mode applies.
struct ModeGroupTable {
  // train_groups[k]: modes whose residuals train kernel k.
  std::array<std::vector<int>, kNumKernels> train_groups;
  // apply_map[mode]: kernel used for residuals of that mode.
  std::array<int, kNumIntraModes> apply_map{};

  friend bool operator==(const ModeGroupTable&, const ModeGroupTable&) = default;
};

// The 24-kernel arrangement: fine-grained pairs (i-1, i) applied to both
// modes, coarse-grained pairs applied to mode i only, Planar and DC alone.
ModeGroupTable CanonicalModeGroupTable();

// Throws kInvalidInput unless apply_map covers 0..34 with kernels 0..23,
// every kernel is used and every training group is non-empty.
void ValidateModeGroupTable(const ModeGroupTable& table);

// Modes 8..12 and 24..28 (near horizontal and vertical).
bool IsNearHorVerMode(int mode);

}  // namespace saabcodec

#endif  // SAABCODEC_MODE_GROUPS_H_
