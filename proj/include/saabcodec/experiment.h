#ifndef SAABCODEC_EXPERIMENT_H_
#define SAABCODEC_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saabcodec/analysis.h"
#include "saabcodec/codec.h"
#include "saabcodec/kernel_bank.h"
#include "saabcodec/residual_pipeline.h"

namespace saabcodec {

struct ExperimentOptions {
  std::vector<int> qps = kDefaultQps;
  // dct_only is always run as the anchor whether listed or not.
  std::vector<Strategy> strategies = {Strategy::kS1, Strategy::kS2, Strategy::kS3};
  // Encode/decode repetitions per point; the median time is reported.
  // 0 skips timing altogether.
  int timing_runs = 3;
  // Bank rounding sweep, run with precision_strategy.
  std::vector<int> precision_digits;
  Strategy precision_strategy = Strategy::kS3;
  IntraOptions intra;
  BiasMode bias_mode = BiasMode::kCentered;
};

struct ClipSource {
  std::string name;
  std::string path;  // planar 4:2:0
  int width = 0;
  int height = 0;
  FrameRange frames;
};

struct ExperimentManifest {
  std::vector<ClipSource> clips;
  std::string bank_path;  // may be empty for an anchor-only run
  uint64_t seed = 0;
  std::string output_dir;
  ExperimentOptions options;
};

// Relative paths are resolved against base_dir. Throws kInvalidInput on
// missing or ill-typed fields.
ExperimentManifest ParseManifest(const std::string& json_text,
                                 const std::string& base_dir = "");
ExperimentManifest LoadManifest(const std::string& path);
std::string ManifestToJson(const ExperimentManifest& manifest);

// digits == -1 marks the unrounded bank.
struct RdRow {
  std::string clip;
  Strategy strategy = Strategy::kDctOnly;
  int digits = -1;
  int qp = 0;
  int frames = 0;
  int64_t total_bits = 0;
  double bits_per_frame = 0.0;
  int64_t sse = 0;
  double psnr = 0.0;  // sequence PSNR from the pooled MSE
  int64_t n_saab = 0;
  int64_t n_total = 0;
  int64_t n_flags = 0;
  int64_t decoded_n_saab = 0;
  int64_t decoded_n_flags = 0;
  bool decode_matches = false;
  uint64_t stream_bytes = 0;
  double encode_seconds = 0.0;
  double decode_seconds = 0.0;
};

struct BdRow {
  std::string clip;
  Strategy strategy = Strategy::kDctOnly;
  int digits = -1;
  std::string status;  // "ok" or the reason no value was computed
  double bdbr_percent = 0.0;
  double bdpsnr_db = 0.0;
};

// qp == nullopt is the per-QP average.
struct UsageRow {
  std::string clip;
  Strategy strategy = Strategy::kDctOnly;
  int digits = -1;
  std::optional<int> qp;
  double p_saab = 0.0;
  double p_saab_decoded = 0.0;
};

struct TimingRow {
  std::string clip;
  Strategy strategy = Strategy::kDctOnly;
  double encr_percent = 0.0;
  double decr_percent = 0.0;
};

struct ExperimentReport {
  std::string manifest_json;
  std::vector<RdRow> rd;
  std::vector<BdRow> bd;
  std::vector<UsageRow> usage;
  std::vector<TimingRow> timing;

  const RdRow* FindRd(const std::string& clip, Strategy s, int digits, int qp) const;
  const BdRow* FindBd(const std::string& clip, Strategy s, int digits) const;
};

// Encodes every clip at every QP under the anchor, each strategy, and each
// precision setting; decodes every stream and checks it against the encoder
// reconstruction. Failures are rethrown with the clip, QP and strategy in
// the message. `bank` may be null only when nothing but the anchor runs.
ExperimentReport RunExperiment(std::span<const Clip> clips, const KernelBank* bank,
                               const ExperimentOptions& options);

// Loads clips and bank named by the manifest, then runs the above.
ExperimentReport RunExperiment(const ExperimentManifest& manifest);

std::string RdPointsCsv(const ExperimentReport& report);
std::string BdCsv(const ExperimentReport& report);
std::string UsageCsv(const ExperimentReport& report);
std::string TimingCsv(const ExperimentReport& report);
std::string ReportJson(const ExperimentReport& report);

// rd_points.csv, bd.csv, usage.csv, timing.csv and report.json.
void WriteReport(const ExperimentReport& report, const std::string& dir);

}  // namespace saabcodec

#endif  // SAABCODEC_EXPERIMENT_H_
