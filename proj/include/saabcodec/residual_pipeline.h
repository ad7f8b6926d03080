#ifndef SAABCODEC_RESIDUAL_PIPELINE_H_
#define SAABCODEC_RESIDUAL_PIPELINE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saabcodec/codec.h"
#include "saabcodec/kernel_bank.h"
#include "saabcodec/luma_plane.h"

namespace saabcodec {

struct Clip {
  std::string name;
  std::vector<LumaPlane> frames;
};

struct ResidualRecord {
  ResidualBlock residual;
  int mode = 0;
  int qp = 0;
  int source = 0;  // index into the corpus source list
  int frame = 0;
  int x = 0;
  int y = 0;

  friend bool operator==(const ResidualRecord&, const ResidualRecord&) = default;
};

struct ResidualCorpus {
  std::vector<std::string> sources;
  std::vector<ResidualRecord> records;

  friend bool operator==(const ResidualCorpus&, const ResidualCorpus&) = default;
};

inline const std::vector<int> kDefaultQps = {22, 27, 32, 37};

// Encodes every frame of every clip at every QP with the DCT-only codec and
// keeps one record per coded block: the residual of the RDO-chosen mode.
// Only config.intra is taken from `config`; the strategy is forced to DCT.
// Frames are encoded in parallel; record order is clip, QP, frame, raster.
ResidualCorpus ExtractResiduals(std::span<const Clip> clips,
                                std::span<const int> qps,
                                const CodecConfig& config = {});

std::vector<uint8_t> SerializeCorpus(const ResidualCorpus& corpus);
ResidualCorpus ParseCorpus(std::span<const uint8_t> bytes);
void WriteCorpus(const std::string& path, const ResidualCorpus& corpus);
ResidualCorpus ReadCorpus(const std::string& path);

struct TrainingOptions {
  uint32_t samples_per_kernel = 80000;
  uint64_t seed = 0;
  std::optional<int> decimal_digits;
};

struct StarvedGroup {
  int kernel = 0;
  std::vector<int> modes;
  std::size_t available = 0;
};

struct BankTrainingResult {
  std::array<std::optional<SaabKernel>, kNumKernels> kernels;
  std::vector<StarvedGroup> starved;
  ModeGroupTable table;
  BankProvenance provenance;

  bool complete() const { return starved.empty(); }
  // Throws kInsufficientData naming every starved kernel and its modes.
  KernelBank ToBank() const;
};

// Trains one one-stage Saab kernel per group. Groups with more than
// samples_per_kernel residuals are subsampled uniformly without replacement
// from a generator seeded per kernel; groups under 64 residuals are reported
// as starved. Groups train in parallel; the result does not depend on
// scheduling.
BankTrainingResult TrainKernelBank(const ResidualCorpus& corpus,
                                   const ModeGroupTable& table,
                                   const TrainingOptions& options);

// Residuals of the given modes, in corpus order.
std::vector<ResidualBlock> SelectResiduals(const ResidualCorpus& corpus,
                                           std::span<const int> modes);

// Per-mode block counts.
std::array<std::size_t, kNumIntraModes> ModeHistogram(const ResidualCorpus& corpus);

}  // namespace saabcodec

#endif  // SAABCODEC_RESIDUAL_PIPELINE_H_
