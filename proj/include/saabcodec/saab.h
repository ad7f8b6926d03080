#ifndef SAABCODEC_SAAB_H_
#define SAABCODEC_SAAB_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "saabcodec/block.h"
#include "saabcodec/matrix.h"

namespace saabcodec {

enum class KernelKind : uint8_t { kDct = 0, kKlt = 1, kSaab1 = 2, kSaab2 = 3 };

// kRaw adds the learned bias to every output (y_k = a_k^T z' + b_k).
// kCentered leaves it out, so outputs equal matrix * x. Round trips hold in
// either mode as long as the inverse uses the same one.
enum class BiasMode : uint8_t { kRaw = 0, kCentered = 1 };

inline constexpr int kMinTrainingSamples = 64;

// One learned 64-point transform. Row k of `matrix` is kernel a_k.
struct SaabKernel {
  Mat64 matrix;
  Vec64 bias{};
  KernelKind kind = KernelKind::kSaab1;
  std::vector<int> trained_modes;
  // Set when the entries were rounded to this many decimal digits.
  std::optional<int> decimal_digits;

  friend bool operator==(const SaabKernel&, const SaabKernel&) = default;
};

// A single learned Saab stage over N-dimensional inputs: fixed DC kernel
// (1/sqrt(N)) 1, AC kernels from the DC-removed second-moment matrix, shared
// AC bias max ||d||_2.
template <int N>
struct SaabStage {
  SquareMatrix<N> matrix;
  Vec<N> bias{};

  friend bool operator==(const SaabStage&, const SaabStage&) = default;
};

template <int N>
SaabStage<N> LearnSaabStage(std::span<const Vec<N>> samples);

template <int N>
Vec<N> SaabStageForward(const SaabStage<N>& stage, const Vec<N>& x,
                        BiasMode mode);

template <int N>
Vec<N> SaabStageInverse(const SaabStage<N>& stage, const Vec<N>& y,
                        BiasMode mode);

// Eigenbasis of the mean-removed sample covariance, zero bias.
// Throws kInsufficientData below 64 samples.
SaabKernel LearnKlt(std::span<const SampleBlock> samples);
SaabKernel LearnKlt(std::span<const ResidualBlock> samples);

// One-stage 8x8 Saab. Throws kInsufficientData below 64 samples and
// kInvalidInput on non-finite samples.
SaabKernel LearnSaab1(std::span<const SampleBlock> samples);
SaabKernel LearnSaab1(std::span<const ResidualBlock> samples);

// Applies a learned 64-point kernel. For kSaab1 the DC coefficient is
// computed from x and the AC coefficients from the DC-removed x'; every other
// kind is a plain matrix product plus (raw mode) the bias.
CoeffBlock KernelForward(const SaabKernel& kernel, const SampleBlock& x,
                         BiasMode mode);
CoeffBlock KernelForward(const SaabKernel& kernel, const ResidualBlock& x,
                         BiasMode mode);
SampleBlock KernelInverse(const SaabKernel& kernel, const CoeffBlock& y,
                          BiasMode mode);

// Rounds matrix and bias entries to `digits` decimal places. The result is
// not re-orthonormalized. Doubles carry about 17 significant digits, so
// digits >= 17 leaves the values untouched and only records the setting.
SaabKernel RoundKernel(const SaabKernel& kernel, int digits);

// Two-stage [4x4, 2x2] Saab. Stage one is a 16-point Saab shared by the four
// 4x4 sub-blocks; stage two is a 4-point Saab per stage-one channel, applied
// over the 2x2 grid of that channel's responses. Output index 4 * ch + j
// holds component j of channel ch.
struct TwoStageSaabKernel {
  SaabStage<16> stage1;
  std::array<SaabStage<4>, 16> stage2;
  std::vector<int> trained_modes;
};

TwoStageSaabKernel LearnSaab2(std::span<const SampleBlock> samples);
TwoStageSaabKernel LearnSaab2(std::span<const ResidualBlock> samples);
CoeffBlock Saab2Forward(const TwoStageSaabKernel& kernel, const SampleBlock& x,
                        BiasMode mode);
SampleBlock Saab2Inverse(const TwoStageSaabKernel& kernel,
                         const CoeffBlock& y, BiasMode mode);

}  // namespace saabcodec

#endif  // SAABCODEC_SAAB_H_
