#include "saabcodec/dct.h"

#include <array>
#include <cmath>
#include <numbers>

namespace saabcodec {
namespace {

using Basis = std::array<std::array<double, kBlockSide>, kBlockSide>;

Basis MakeBasis() {
  Basis b{};
  for (int u = 0; u < kBlockSide; ++u) {
    const double alpha = u == 0 ? std::sqrt(1.0 / kBlockSide)
                                : std::sqrt(2.0 / kBlockSide);
    for (int x = 0; x < kBlockSide; ++x) {
      b[u][x] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi /
                                 (2.0 * kBlockSide));
    }
  }
  return b;
}

const Basis& GetBasis() {
  static const Basis basis = MakeBasis();
  return basis;
}

}  // namespace

double DctBasis(int u, int x) { return GetBasis()[u][x]; }

CoeffBlock DctForward(const SampleBlock& block) {
  const Basis& b = GetBasis();
  std::array<double, kBlockArea> rows{};
  // Horizontal pass: rows[r][v] = sum_c x[r][c] b[v][c].
  for (int r = 0; r < kBlockSide; ++r) {
    for (int v = 0; v < kBlockSide; ++v) {
      double acc = 0.0;
      for (int c = 0; c < kBlockSide; ++c)
        acc += block[r * kBlockSide + c] * b[v][c];
      rows[r * kBlockSide + v] = acc;
    }
  }
  CoeffBlock out{};
  for (int u = 0; u < kBlockSide; ++u) {
    for (int v = 0; v < kBlockSide; ++v) {
      double acc = 0.0;
      for (int r = 0; r < kBlockSide; ++r)
        acc += b[u][r] * rows[r * kBlockSide + v];
      out[u * kBlockSide + v] = acc;
    }
  }
  return out;
}

CoeffBlock DctForward(const ResidualBlock& block) {
  return DctForward(ToSamples(block));
}

SampleBlock DctInverse(const CoeffBlock& coeffs) {
  const Basis& b = GetBasis();
  std::array<double, kBlockArea> cols{};
  // Vertical pass: cols[r][v] = sum_u b[u][r] Y[u][v].
  for (int r = 0; r < kBlockSide; ++r) {
    for (int v = 0; v < kBlockSide; ++v) {
      double acc = 0.0;
      for (int u = 0; u < kBlockSide; ++u)
        acc += b[u][r] * coeffs[u * kBlockSide + v];
      cols[r * kBlockSide + v] = acc;
    }
  }
  SampleBlock out{};
  for (int r = 0; r < kBlockSide; ++r) {
    for (int c = 0; c < kBlockSide; ++c) {
      double acc = 0.0;
      for (int v = 0; v < kBlockSide; ++v)
        acc += cols[r * kBlockSide + v] * b[v][c];
      out[r * kBlockSide + c] = acc;
    }
  }
  return out;
}

}  // namespace saabcodec
