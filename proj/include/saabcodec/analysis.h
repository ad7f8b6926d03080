#ifndef SAABCODEC_ANALYSIS_H_
#define SAABCODEC_ANALYSIS_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "saabcodec/error.h"
#include "saabcodec/kernel_bank.h"
#include "saabcodec/luma_plane.h"
#include "saabcodec/metrics.h"
#include "saabcodec/residual_pipeline.h"

namespace saabcodec {

// Lossless reconstructions report +infinity, which is excluded from curves.
double Psnr(const LumaPlane& reference, const LumaPlane& test);
inline bool IsLossless(double psnr) { return std::isinf(psnr) && psnr > 0; }

struct RdPoint {
  double bitrate = 0.0;  // bits per frame
  double psnr = 0.0;
};

struct BdResult {
  double bdbr_percent = 0.0;
  double bdpsnr_db = 0.0;
};

class NoOverlapError : public Error {
 public:
  explicit NoOverlapError(const std::string& what)
      : Error(ErrorKind::kInvalidInput, what) {}
};

// Bjontegaard deltas from cubic least-squares fits, log10(rate) against PSNR
// for the rate delta and the reverse for the PSNR delta, averaged over the
// overlap of the two curves. Negative bdbr means `test` needs fewer bits.
// Each curve needs at least four points with positive rate and finite PSNR;
// order does not matter. Throws NoOverlapError when the ranges are disjoint.
BdResult BdRate(std::span<const RdPoint> anchor, std::span<const RdPoint> test);

struct UsageCount {
  int qp = 0;
  int64_t n_saab = 0;
  int64_t n_total = 0;
};

struct SaabUsage {
  std::vector<int> qps;
  std::vector<double> percent;  // per QP, in input order
  double average = 0.0;         // arithmetic mean over QPs
};

// P = 100 * n_saab / n_total per QP. Throws on an empty list or n_total <= 0.
SaabUsage ComputeSaabUsage(std::span<const UsageCount> counts);

struct QpTiming {
  int qp = 0;
  double encode_seconds = 0.0;
  double decode_seconds = 0.0;
};

struct TimingRatios {
  double encr_percent = 0.0;
  double decr_percent = 0.0;
};

// Mean over QPs of test/anchor time, in percent. Both lists must cover the
// same QP set (any order). Throws kMismatch otherwise.
TimingRatios TimingRatio(std::span<const QpTiming> test,
                         std::span<const QpTiming> anchor);

struct TransformResult {
  std::string name;
  CompactionCurve curve;
  double decorrelation_cost = 0.0;
  double total_variance = 0.0;  // sum of coefficient variances
};

struct TransformAnalysis {
  std::size_t train_count = 0;
  std::size_t eval_count = 0;
  double input_variance = 0.0;
  std::vector<TransformResult> transforms;  // dct, klt, saab1, saab2
};

// saab1 and saab2 are learned on `train`; klt is the oracle eigenbasis of
// `eval` itself. All four are applied to `eval` in centered mode.
TransformAnalysis AnalyzeTransforms(std::span<const ResidualBlock> train,
                                    std::span<const ResidualBlock> eval);

struct RdModelRow {
  int mode = 0;
  int qp = 0;
  std::size_t samples = 0;
  TransformComparison comparison;
};

// Per (mode, QP) comparison of the bank kernel for that mode against DCT,
// both in centered mode, over the corpus residuals. Cells with fewer than
// two residuals are skipped.
std::vector<RdModelRow> AnalyzeRdModel(const ResidualCorpus& corpus,
                                       const KernelBank& bank,
                                       std::span<const int> modes,
                                       std::span<const int> qps);

std::string CompactionCsv(const TransformAnalysis& analysis);
std::string DecorrelationCsv(const TransformAnalysis& analysis);
std::string KappaCsv(std::span<const RdModelRow> rows);
std::string SigmaCsv(std::span<const RdModelRow> rows);

// Round-trippable decimal formatting used by every CSV writer.
std::string FormatDouble(double v);

}  // namespace saabcodec

#endif  // SAABCODEC_ANALYSIS_H_
