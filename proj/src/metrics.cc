#include "saabcodec/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "saabcodec/error.h"

namespace saabcodec {
namespace {

void RequireBlocks(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    throw Error(minimum <= 1 ? ErrorKind::kInvalidInput : ErrorKind::kInsufficientData,
                std::string(what) + " needs at least " + std::to_string(minimum) +
                    " blocks, got " + std::to_string(n));
  }
}

}  // namespace

double InputVariance(std::span<const SampleBlock> blocks) {
  RequireBlocks(blocks.size(), 1, "input variance");
  double sum = 0.0;
  for (const SampleBlock& b : blocks)
    for (double v : b) sum += v;
  const double n = static_cast<double>(blocks.size()) * kBlockArea;
  const double mean = sum / n;
  double acc = 0.0;
  for (const SampleBlock& b : blocks)
    for (double v : b) acc += (v - mean) * (v - mean);
  return acc / n;
}

double InputVariance(std::span<const ResidualBlock> blocks) {
  std::vector<SampleBlock> samples;
  samples.reserve(blocks.size());
  for (const ResidualBlock& b : blocks) samples.push_back(ToSamples(b));
  return InputVariance(samples);
}

CompactionCurve EnergyCompaction(std::span<const CoeffBlock> coeffs,
                                 double input_variance) {
  RequireBlocks(coeffs.size(), 1, "energy compaction");
  if (!(input_variance > 0.0)) {
    throw Error(ErrorKind::kDegenerate, "energy compaction needs a positive input variance");
  }
  std::array<double, kBlockArea> energy{};
  for (const CoeffBlock& y : coeffs)
    for (int k = 0; k < kBlockArea; ++k) energy[k] += y[k] * y[k];
  for (double& e : energy) e /= static_cast<double>(coeffs.size());

  CompactionCurve curve;
  curve.sample_count = coeffs.size();
  std::iota(curve.order.begin(), curve.order.end(), 0);
  std::stable_sort(curve.order.begin(), curve.order.end(),
                   [&energy](int a, int b) { return energy[a] > energy[b]; });
  const double norm = kBlockArea * input_variance;
  double running = 0.0;
  for (int i = 0; i < kBlockArea; ++i) {
    running += energy[curve.order[i]];
    curve.values[i] = running / norm;
  }
  return curve;
}

double DecorrelationCost(std::span<const CoeffBlock> coeffs) {
  RequireBlocks(coeffs.size(), 2, "decorrelation cost");
  std::vector<double> moment(kBlockArea * kBlockArea, 0.0);
  for (const CoeffBlock& y : coeffs)
    for (int i = 0; i < kBlockArea; ++i)
      for (int j = i + 1; j < kBlockArea; ++j) moment[i * kBlockArea + j] += y[i] * y[j];
  const double n = static_cast<double>(coeffs.size());
  double cost = 0.0;
  for (int i = 0; i < kBlockArea; ++i)
    for (int j = i + 1; j < kBlockArea; ++j) cost += 2.0 * std::abs(moment[i * kBlockArea + j] / n);
  return cost;
}

CoeffStats ComputeCoeffStats(std::span<const CoeffBlock> coeffs) {
  RequireBlocks(coeffs.size(), 2, "coefficient statistics");
  CoeffStats stats;
  stats.sample_count = coeffs.size();
  const double n = static_cast<double>(coeffs.size());
  for (const CoeffBlock& y : coeffs)
    for (int k = 0; k < kBlockArea; ++k) stats.mean[k] += y[k];
  for (double& m : stats.mean) m /= n;
  for (const CoeffBlock& y : coeffs) {
    for (int i = 0; i < kBlockArea; ++i) {
      const double di = y[i] - stats.mean[i];
      for (int j = i; j < kBlockArea; ++j) stats.covariance(i, j) += di * (y[j] - stats.mean[j]);
    }
  }
  for (int i = 0; i < kBlockArea; ++i) {
    for (int j = i; j < kBlockArea; ++j) {
      stats.covariance(i, j) /= n;
      stats.covariance(j, i) = stats.covariance(i, j);
    }
    stats.variance[i] = stats.covariance(i, i);
  }
  return stats;
}

DistributionFit FitCoefficientDistribution(std::span<const double> values) {
  if (values.size() < kMinFitSamples) {
    throw Error(ErrorKind::kInsufficientData,
                "distribution fit needs at least 30 samples, got " +
                    std::to_string(values.size()));
  }
  if (std::all_of(values.begin(), values.end(),
                  [&values](double v) { return v == values.front(); })) {
    throw Error(ErrorKind::kDegenerate, "all samples are equal (point mass)");
  }
  const double n = static_cast<double>(values.size());
  DistributionFit fit;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  fit.laplace_mu = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  double abs_dev = 0.0;
  for (double v : values) abs_dev += std::abs(v - fit.laplace_mu);
  fit.laplace_b = abs_dev / n;
  fit.laplace_nll = n * (std::log(2.0 * fit.laplace_b) + 1.0);

  fit.gauss_mu = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - fit.gauss_mu) * (v - fit.gauss_mu);
  const double var = sq / n;
  fit.gauss_sigma = std::sqrt(var);
  fit.gauss_nll = 0.5 * n * (std::log(2.0 * std::numbers::pi * var) + 1.0);

  fit.better = fit.laplace_nll <= fit.gauss_nll ? Distribution::kLaplace : Distribution::kGauss;
  return fit;
}

double Kappa(double sigma, const RdParams& params) {
  if (!(sigma > 0.0)) return 0.0;
  const double q = params.q_step;
  const double s2 = sigma * sigma;
  const double distortion = s2 * q * q / (12.0 * s2 + q * q);
  const double threshold = q / (std::numbers::sqrt2 * std::numbers::e);
  if (sigma <= threshold) return distortion;
  return distortion +
         params.lambda * std::log2(std::numbers::sqrt2 * std::numbers::e * sigma / q);
}

TransformComparison CompareTransforms(const CoeffStats& saab, const CoeffStats& dct,
                                      const RdParams& params) {
  if (saab.sample_count != dct.sample_count) {
    throw Error(ErrorKind::kMismatch,
                "coefficient statistics come from different sample counts (" +
                    std::to_string(saab.sample_count) + " vs " +
                    std::to_string(dct.sample_count) + ")");
  }
  TransformComparison out;
  for (int k = 0; k < kBlockArea; ++k) {
    PositionComparison& p = out.positions[k];
    p.sigma2_saab = saab.variance[k];
    p.sigma2_dct = dct.variance[k];
    p.kappa_saab = Kappa(std::sqrt(p.sigma2_saab), params);
    p.kappa_dct = Kappa(std::sqrt(p.sigma2_dct), params);
    out.kappa_saab += p.kappa_saab;
    out.kappa_dct += p.kappa_dct;
    out.sigma2_saab += p.sigma2_saab;
    out.sigma2_dct += p.sigma2_dct;
  }
  out.kappa_saab /= kBlockArea;
  out.kappa_dct /= kBlockArea;
  out.sigma2_saab /= kBlockArea;
  out.sigma2_dct /= kBlockArea;
  out.delta_kappa = out.kappa_saab - out.kappa_dct;
  out.delta_sigma2 = out.sigma2_saab - out.sigma2_dct;
  return out;
}

}  // namespace saabcodec
