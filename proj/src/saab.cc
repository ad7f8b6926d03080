#include "saabcodec/saab.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "saabcodec/error.h"
#include "saabcodec/symmetric_eigen.h"

namespace saabcodec {
namespace {

constexpr int kSubBlockSide = 4;
constexpr int kExactDigits = 17;

template <int N>
void CheckTrainingSet(std::span<const Vec<N>> samples, std::size_t minimum) {
  if (samples.size() < minimum) {
    throw Error(ErrorKind::kInsufficientData,
                "need at least " + std::to_string(minimum) +
                    " training samples, got " + std::to_string(samples.size()));
  }
  for (const Vec<N>& d : samples) {
    for (double v : d) {
      if (!std::isfinite(v))
        throw Error(ErrorKind::kInvalidInput, "non-finite training sample");
    }
  }
}

// Modified Gram-Schmidt over rows [first, N), each row also made orthogonal
// to every earlier row.
template <int N>
void Orthonormalize(SquareMatrix<N>& m, int first) {
  for (int k = first; k < N; ++k) {
    auto row = m.Row(k);
    for (int j = 0; j < k; ++j) {
      const double proj = Dot<N>(m.Row(j), row);
      const auto prev = m.Row(j);
      for (int i = 0; i < N; ++i) row[i] -= proj * prev[i];
    }
    const double norm = std::sqrt(Dot<N>(row, row));
    for (int i = 0; i < N; ++i) row[i] /= norm;
  }
}

template <int N>
Vec<N> ApplyForward(const SquareMatrix<N>& a, const Vec<N>& bias,
                    const Vec<N>& x, BiasMode mode) {
  const double unit = 1.0 / std::sqrt(static_cast<double>(N));
  const double dc = Dot<N>(a.Row(0), x) + bias[0];
  Vec<N> shifted{};
  for (int j = 0; j < N; ++j) shifted[j] = x[j] - dc * unit;
  Vec<N> y{};
  y[0] = mode == BiasMode::kRaw ? dc : dc - bias[0];
  for (int k = 1; k < N; ++k) {
    y[k] = Dot<N>(a.Row(k), shifted);
    if (mode == BiasMode::kRaw) y[k] += bias[k];
  }
  return y;
}

template <int N>
Vec<N> ApplyInverse(const SquareMatrix<N>& a, const Vec<N>& bias,
                    const Vec<N>& y, BiasMode mode) {
  if (mode == BiasMode::kCentered) return MultiplyTransposed<N>(a, y);
  Vec<N> unbiased{};
  for (int k = 0; k < N; ++k) unbiased[k] = y[k] - bias[k];
  return MultiplyTransposed<N>(a, unbiased);
}

template <int N>
double MaxNorm(std::span<const Vec<N>> samples) {
  double best = 0.0;
  for (const Vec<N>& d : samples)
    best = std::max(best, std::sqrt(Dot<N>(d, d)));
  return best;
}

std::vector<SampleBlock> ToSampleBlocks(std::span<const ResidualBlock> blocks) {
  std::vector<SampleBlock> out;
  out.reserve(blocks.size());
  for (const ResidualBlock& b : blocks) out.push_back(ToSamples(b));
  return out;
}

Vec<16> SubBlock(const SampleBlock& x, int s) {
  const int r0 = (s / 2) * kSubBlockSide;
  const int c0 = (s % 2) * kSubBlockSide;
  Vec<16> out{};
  for (int r = 0; r < kSubBlockSide; ++r)
    for (int c = 0; c < kSubBlockSide; ++c)
      out[r * kSubBlockSide + c] = x[(r0 + r) * kBlockSide + c0 + c];
  return out;
}

void PutSubBlock(SampleBlock& x, int s, const Vec<16>& v) {
  const int r0 = (s / 2) * kSubBlockSide;
  const int c0 = (s % 2) * kSubBlockSide;
  for (int r = 0; r < kSubBlockSide; ++r)
    for (int c = 0; c < kSubBlockSide; ++c)
      x[(r0 + r) * kBlockSide + c0 + c] = v[r * kSubBlockSide + c];
}

double RoundTo(double v, double factor) { return std::round(v * factor) / factor; }

}  // namespace

template <int N>
SaabStage<N> LearnSaabStage(std::span<const Vec<N>> samples) {
  CheckTrainingSet<N>(samples, std::max<std::size_t>(2, N));
  const double unit = 1.0 / std::sqrt(static_cast<double>(N));

  std::vector<Vec<N>> ac_parts;
  ac_parts.reserve(samples.size());
  for (const Vec<N>& d : samples) {
    double dc = 0.0;
    for (double v : d) dc += unit * v;
    Vec<N> z{};
    for (int j = 0; j < N; ++j) z[j] = d[j] - dc * unit;
    ac_parts.push_back(z);
  }
  SquareMatrix<N> c = SecondMoment<N>(ac_parts);

  // The DC direction spans the null space of c. Pushing it to a strictly
  // negative eigenvalue sorts it last, leaving the N - 1 AC eigenvectors on
  // top with their natural order.
  double trace = 0.0;
  for (int i = 0; i < N; ++i) trace += c(i, i);
  const double shift = (trace + 1.0) / N;
  for (int r = 0; r < N; ++r)
    for (int k = 0; k < N; ++k) c(r, k) -= shift;

  const EigenResult<N> eig = SymmetricEigen<N>(c);

  SaabStage<N> stage;
  for (int j = 0; j < N; ++j) stage.matrix(0, j) = unit;
  for (int k = 1; k < N; ++k) {
    const auto src = eig.eigenvectors.Row(k - 1);
    auto dst = stage.matrix.Row(k);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  Orthonormalize(stage.matrix, 1);

  const double bias = MaxNorm<N>(samples);
  for (int k = 1; k < N; ++k) stage.bias[k] = bias;
  return stage;
}

template <int N>
Vec<N> SaabStageForward(const SaabStage<N>& stage, const Vec<N>& x,
                        BiasMode mode) {
  return ApplyForward<N>(stage.matrix, stage.bias, x, mode);
}

template <int N>
Vec<N> SaabStageInverse(const SaabStage<N>& stage, const Vec<N>& y,
                        BiasMode mode) {
  return ApplyInverse<N>(stage.matrix, stage.bias, y, mode);
}

template SaabStage<4> LearnSaabStage<4>(std::span<const Vec<4>>);
template SaabStage<16> LearnSaabStage<16>(std::span<const Vec<16>>);
template SaabStage<64> LearnSaabStage<64>(std::span<const Vec<64>>);
template Vec<4> SaabStageForward<4>(const SaabStage<4>&, const Vec<4>&, BiasMode);
template Vec<16> SaabStageForward<16>(const SaabStage<16>&, const Vec<16>&, BiasMode);
template Vec<64> SaabStageForward<64>(const SaabStage<64>&, const Vec<64>&, BiasMode);
template Vec<4> SaabStageInverse<4>(const SaabStage<4>&, const Vec<4>&, BiasMode);
template Vec<16> SaabStageInverse<16>(const SaabStage<16>&, const Vec<16>&, BiasMode);
template Vec<64> SaabStageInverse<64>(const SaabStage<64>&, const Vec<64>&, BiasMode);

SaabKernel LearnKlt(std::span<const SampleBlock> samples) {
  CheckTrainingSet<64>(samples, kMinTrainingSamples);
  const EigenResult<64> eig = SymmetricEigen<64>(CenteredCovariance<64>(samples));
  SaabKernel kernel;
  kernel.kind = KernelKind::kKlt;
  kernel.matrix = eig.eigenvectors;
  return kernel;
}

SaabKernel LearnKlt(std::span<const ResidualBlock> samples) {
  return LearnKlt(std::span<const SampleBlock>(ToSampleBlocks(samples)));
}

SaabKernel LearnSaab1(std::span<const SampleBlock> samples) {
  CheckTrainingSet<64>(samples, kMinTrainingSamples);
  SaabStage<64> stage = LearnSaabStage<64>(samples);
  SaabKernel kernel;
  kernel.kind = KernelKind::kSaab1;
  kernel.matrix = std::move(stage.matrix);
  kernel.bias = stage.bias;
  return kernel;
}

SaabKernel LearnSaab1(std::span<const ResidualBlock> samples) {
  return LearnSaab1(std::span<const SampleBlock>(ToSampleBlocks(samples)));
}

CoeffBlock KernelForward(const SaabKernel& kernel, const SampleBlock& x,
                         BiasMode mode) {
  if (kernel.kind == KernelKind::kSaab1)
    return ApplyForward<64>(kernel.matrix, kernel.bias, x, mode);
  CoeffBlock y = Multiply<64>(kernel.matrix, x);
  if (mode == BiasMode::kRaw)
    for (int k = 0; k < kBlockArea; ++k) y[k] += kernel.bias[k];
  return y;
}

CoeffBlock KernelForward(const SaabKernel& kernel, const ResidualBlock& x,
                         BiasMode mode) {
  return KernelForward(kernel, ToSamples(x), mode);
}

SampleBlock KernelInverse(const SaabKernel& kernel, const CoeffBlock& y,
                          BiasMode mode) {
  return ApplyInverse<64>(kernel.matrix, kernel.bias, y, mode);
}

SaabKernel RoundKernel(const SaabKernel& kernel, int digits) {
  if (digits < 0)
    throw Error(ErrorKind::kInvalidInput, "decimal digits must be >= 0");
  SaabKernel out = kernel;
  out.decimal_digits = digits;
  if (digits >= kExactDigits) return out;
  const double factor = std::pow(10.0, digits);
  for (double& v : out.matrix.Data()) v = RoundTo(v, factor);
  for (double& v : out.bias) v = RoundTo(v, factor);
  return out;
}

TwoStageSaabKernel LearnSaab2(std::span<const SampleBlock> samples) {
  CheckTrainingSet<64>(samples, kMinTrainingSamples);
  std::vector<Vec<16>> patches;
  patches.reserve(samples.size() * 4);
  for (const SampleBlock& x : samples)
    for (int s = 0; s < 4; ++s) patches.push_back(SubBlock(x, s));

  TwoStageSaabKernel kernel;
  kernel.stage1 = LearnSaabStage<16>(patches);

  std::array<std::vector<Vec<4>>, 16> channels;
  for (auto& ch : channels) ch.reserve(samples.size());
  for (std::size_t t = 0; t < samples.size(); ++t) {
    std::array<Vec<16>, 4> responses;
    for (int s = 0; s < 4; ++s) {
      responses[s] = SaabStageForward<16>(kernel.stage1, patches[t * 4 + s],
                                          BiasMode::kCentered);
    }
    for (int ch = 0; ch < 16; ++ch) {
      channels[ch].push_back(Vec<4>{responses[0][ch], responses[1][ch],
                                    responses[2][ch], responses[3][ch]});
    }
  }
  for (int ch = 0; ch < 16; ++ch)
    kernel.stage2[ch] = LearnSaabStage<4>(channels[ch]);
  return kernel;
}

TwoStageSaabKernel LearnSaab2(std::span<const ResidualBlock> samples) {
  return LearnSaab2(std::span<const SampleBlock>(ToSampleBlocks(samples)));
}

CoeffBlock Saab2Forward(const TwoStageSaabKernel& kernel, const SampleBlock& x,
                        BiasMode mode) {
  std::array<Vec<16>, 4> responses;
  for (int s = 0; s < 4; ++s)
    responses[s] = SaabStageForward<16>(kernel.stage1, SubBlock(x, s), mode);
  CoeffBlock y{};
  for (int ch = 0; ch < 16; ++ch) {
    const Vec<4> grid{responses[0][ch], responses[1][ch], responses[2][ch],
                      responses[3][ch]};
    const Vec<4> out = SaabStageForward<4>(kernel.stage2[ch], grid, mode);
    for (int j = 0; j < 4; ++j) y[4 * ch + j] = out[j];
  }
  return y;
}

SampleBlock Saab2Inverse(const TwoStageSaabKernel& kernel, const CoeffBlock& y,
                         BiasMode mode) {
  std::array<Vec<16>, 4> responses{};
  for (int ch = 0; ch < 16; ++ch) {
    const Vec<4> coeffs{y[4 * ch], y[4 * ch + 1], y[4 * ch + 2], y[4 * ch + 3]};
    const Vec<4> grid = SaabStageInverse<4>(kernel.stage2[ch], coeffs, mode);
    for (int s = 0; s < 4; ++s) responses[s][ch] = grid[s];
  }
  SampleBlock x{};
  for (int s = 0; s < 4; ++s)
    PutSubBlock(x, s, SaabStageInverse<16>(kernel.stage1, responses[s], mode));
  return x;
}

}  // namespace saabcodec
