#include "saabcodec/mode_groups.h"

#include <string>

#include "saabcodec/error.h"

namespace saabcodec {

ModeGroupTable CanonicalModeGroupTable() {
  ModeGroupTable table;
  table.apply_map = {0,  1,  2,  2,  3,  3,  4,  4,  5,  6,  7,  8,
                     9,  10, 10, 11, 11, 12, 12, 13, 13, 14, 14, 15,
                     16, 17, 18, 19, 20, 21, 21, 22, 22, 23, 23};
  table.train_groups = {{{0},      {1},      {2, 3},   {4, 5},   {6, 7},
                         {7, 8},   {8, 9},   {9, 10},  {10, 11}, {11, 12},
                         {13, 14}, {15, 16}, {17, 18}, {19, 20}, {21, 22},
                         {22, 23}, {23, 24}, {24, 25}, {25, 26}, {26, 27},
                         {27, 28}, {29, 30}, {31, 32}, {33, 34}}};
  return table;
}

void ValidateModeGroupTable(const ModeGroupTable& table) {
  std::array<bool, kNumKernels> used{};
  for (int mode = 0; mode < kNumIntraModes; ++mode) {
    const int k = table.apply_map[mode];
    if (k < 0 || k >= kNumKernels) {
      throw Error(ErrorKind::kInvalidInput,
                  "mode " + std::to_string(mode) + " maps to kernel " +
                      std::to_string(k));
    }
    used[k] = true;
  }
  for (int k = 0; k < kNumKernels; ++k) {
    if (!used[k]) {
      throw Error(ErrorKind::kInvalidInput,
                  "kernel " + std::to_string(k) + " is never applied");
    }
    if (table.train_groups[k].empty()) {
      throw Error(ErrorKind::kInvalidInput,
                  "kernel " + std::to_string(k) + " has no training modes");
    }
    for (int mode : table.train_groups[k]) {
      if (mode < 0 || mode >= kNumIntraModes) {
        throw Error(ErrorKind::kInvalidInput,
                    "training mode out of range: " + std::to_string(mode));
      }
    }
  }
}

bool IsNearHorVerMode(int mode) {
  return (mode >= 8 && mode <= 12) || (mode >= 24 && mode <= 28);
}

}  // namespace saabcodec
