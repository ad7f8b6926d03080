#ifndef SAABCODEC_METRICS_H_
#define SAABCODEC_METRICS_H_

#include <array>
#include <cstddef>
#include <span>

#include "saabcodec/block.h"
#include "saabcodec/matrix.h"
#include "saabcodec/rd_params.h"

namespace saabcodec {

// Per-sample population variance over every sample of every block. This is
// the scalar input variance the compaction curve is normalized by.
double InputVariance(std::span<const SampleBlock> blocks);
double InputVariance(std::span<const ResidualBlock> blocks);

// values[i - 1] = E(i): the mean energy held by the i highest-energy
// coefficient positions, over 64 * input_variance. Positions are ranked by
// average energy on this set (ties by index), so E(64) is the total energy
// ratio, about 1 for mean-free data under an orthonormal transform.
struct CompactionCurve {
  std::array<double, kBlockArea> values{};
  std::array<int, kBlockArea> order{};
  std::size_t sample_count = 0;
};

// Throws kInvalidInput on an empty set, kDegenerate when input_variance <= 0.
CompactionCurve EnergyCompaction(std::span<const CoeffBlock> coeffs,
                                 double input_variance);

// sum over i != j of |E{y_i y_j}|, coefficient means taken as zero. Throws
// kInsufficientData below two blocks.
double DecorrelationCost(std::span<const CoeffBlock> coeffs);

struct CoeffStats {
  Vec64 mean{};
  Vec64 variance{};
  Mat64 covariance;
  std::size_t sample_count = 0;
};

// Population statistics per coefficient position. Throws kInsufficientData
// below two blocks.
CoeffStats ComputeCoeffStats(std::span<const CoeffBlock> coeffs);

enum class Distribution { kLaplace, kGauss };

struct DistributionFit {
  double laplace_mu = 0.0;
  double laplace_b = 0.0;
  double gauss_mu = 0.0;
  double gauss_sigma = 0.0;
  double laplace_nll = 0.0;
  double gauss_nll = 0.0;
  Distribution better = Distribution::kLaplace;
};

inline constexpr std::size_t kMinFitSamples = 30;

// Maximum-likelihood Laplace and Gaussian fits; `better` has the lower
// negative log-likelihood. Throws kInsufficientData below 30 samples and
// kDegenerate when every sample is equal.
DistributionFit FitCoefficientDistribution(std::span<const double> values);

// RD cost proxy for a Laplacian coefficient of standard deviation sigma
// under uniform quantization:
//   D = sigma^2 Q^2 / (12 sigma^2 + Q^2)
//   R = log2(sqrt(2) e sigma / Q) when sigma > Q / (sqrt(2) e), else 0
//   kappa = D + lambda R
double Kappa(double sigma, const RdParams& params);

struct PositionComparison {
  double kappa_saab = 0.0;
  double kappa_dct = 0.0;
  double sigma2_saab = 0.0;
  double sigma2_dct = 0.0;
};

// Aggregates are means over the 64 coefficient positions; negative values
// favour the learned transform.
struct TransformComparison {
  double kappa_saab = 0.0;
  double kappa_dct = 0.0;
  double delta_kappa = 0.0;
  double sigma2_saab = 0.0;
  double sigma2_dct = 0.0;
  double delta_sigma2 = 0.0;
  std::array<PositionComparison, kBlockArea> positions{};
};

// Throws kMismatch when the two sets have different sample counts.
TransformComparison CompareTransforms(const CoeffStats& saab,
                                      const CoeffStats& dct,
                                      const RdParams& params);

}  // namespace saabcodec

#endif  // SAABCODEC_METRICS_H_
