#include "saabcodec/residual_pipeline.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "saabcodec/byte_io.h"
#include "saabcodec/error.h"
#include "saabcodec/parallel.h"
#include "saabcodec/random.h"

namespace saabcodec {
namespace {

constexpr char kCorpusMagic[] = "SBTRESID";
constexpr uint32_t kCorpusVersion = 1;

std::string JoinModes(const std::vector<int>& modes) {
  std::string out;
  for (int m : modes) out += (out.empty() ? "" : ",") + std::to_string(m);
  return out;
}

// Indices [0, n) when n <= cap, else a seeded uniform subset of size cap,
// returned in ascending order.
std::vector<std::size_t> Subsample(std::size_t n, std::size_t cap, uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (n <= cap) return idx;
  SeededRng rng(seed);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

ResidualCorpus ExtractResiduals(std::span<const Clip> clips,
                                std::span<const int> qps,
                                const CodecConfig& config) {
  CodecConfig dct = config;
  dct.strategy = Strategy::kDctOnly;
  dct.bank = nullptr;

  struct Job {
    int clip;
    int qp;
    int frame;
  };
  std::vector<Job> jobs;
  ResidualCorpus corpus;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    corpus.sources.push_back(clips[c].name);
    for (int qp : qps)
      for (std::size_t f = 0; f < clips[c].frames.size(); ++f)
        jobs.push_back({static_cast<int>(c), qp, static_cast<int>(f)});
  }

  std::vector<std::vector<ResidualRecord>> per_job(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const LumaPlane& plane = clips[job.clip].frames[job.frame];
    LumaPlane recon(plane.width, plane.height);
    std::vector<ResidualRecord>& out = per_job[j];
    for (int y = 0; y < plane.height; y += kBlockSide) {
      for (int x = 0; x < plane.width; x += kBlockSide) {
        const BlockResult block = EncodeBlock(plane, recon, {x, y}, job.qp, dct);
        recon.PutBlock(x, y, block.recon);
        out.push_back({block.residual, block.coded.mode, job.qp, job.clip,
                       job.frame, x, y});
      }
    }
  });
  for (auto& records : per_job)
    corpus.records.insert(corpus.records.end(), records.begin(), records.end());
  return corpus;
}

std::vector<uint8_t> SerializeCorpus(const ResidualCorpus& corpus) {
  ByteWriter w;
  w.PutTag(kCorpusMagic);
  w.PutU32(kCorpusVersion);
  w.PutU32(static_cast<uint32_t>(corpus.sources.size()));
  for (const std::string& s : corpus.sources) w.PutString(s);
  w.PutU64(corpus.records.size());
  for (const ResidualRecord& r : corpus.records) {
    w.PutU16(static_cast<uint16_t>(r.source));
    w.PutU32(static_cast<uint32_t>(r.frame));
    w.PutU16(static_cast<uint16_t>(r.x));
    w.PutU16(static_cast<uint16_t>(r.y));
    w.PutU8(static_cast<uint8_t>(r.mode));
    w.PutU8(static_cast<uint8_t>(r.qp));
    for (int16_t v : r.residual.samples()) w.PutI16(v);
  }
  return w.Take();
}

ResidualCorpus ParseCorpus(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag(kCorpusMagic);
  const uint32_t version = r.GetU32();
  if (version != kCorpusVersion)
    throw Error(ErrorKind::kFormat, "unsupported corpus version " + std::to_string(version));
  ResidualCorpus corpus;
  const uint32_t sources = r.GetU32();
  for (uint32_t i = 0; i < sources; ++i) corpus.sources.push_back(r.GetString());
  const uint64_t count = r.GetU64();
  constexpr std::size_t kRecordBytes = 2 + 4 + 2 + 2 + 1 + 1 + 2 * kBlockArea;
  if (count > r.remaining() / kRecordBytes)
    throw Error(ErrorKind::kFormat, "corpus record count exceeds file size");
  corpus.records.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    ResidualRecord rec;
    rec.source = r.GetU16();
    rec.frame = static_cast<int>(r.GetU32());
    rec.x = r.GetU16();
    rec.y = r.GetU16();
    rec.mode = r.GetU8();
    rec.qp = r.GetU8();
    if (rec.mode >= kNumIntraModes || rec.source >= static_cast<int>(sources))
      throw Error(ErrorKind::kFormat, "corpus record " + std::to_string(i) + " is invalid");
    std::array<int, kBlockArea> samples{};
    for (int& v : samples) v = r.GetI16();
    try {
      rec.residual = ResidualBlock::FromSamples(samples);
    } catch (const Error&) {
      throw Error(ErrorKind::kFormat, "corpus record " + std::to_string(i) +
                                          " has an out-of-range residual");
    }
    corpus.records.push_back(rec);
  }
  if (!r.done()) throw Error(ErrorKind::kFormat, "trailing bytes after corpus");
  return corpus;
}

void WriteCorpus(const std::string& path, const ResidualCorpus& corpus) {
  WriteFileBytes(path, SerializeCorpus(corpus));
}

ResidualCorpus ReadCorpus(const std::string& path) {
  return ParseCorpus(ReadFileBytes(path));
}

std::vector<ResidualBlock> SelectResiduals(const ResidualCorpus& corpus,
                                           std::span<const int> modes) {
  std::array<bool, kNumIntraModes> wanted{};
  for (int m : modes) wanted.at(m) = true;
  std::vector<ResidualBlock> out;
  for (const ResidualRecord& r : corpus.records)
    if (wanted[r.mode]) out.push_back(r.residual);
  return out;
}

std::array<std::size_t, kNumIntraModes> ModeHistogram(const ResidualCorpus& corpus) {
  std::array<std::size_t, kNumIntraModes> hist{};
  for (const ResidualRecord& r : corpus.records) ++hist[r.mode];
  return hist;
}

KernelBank BankTrainingResult::ToBank() const {
  if (!starved.empty()) {
    std::string msg = "kernel bank incomplete:";
    for (const StarvedGroup& g : starved) {
      msg += " kernel " + std::to_string(g.kernel) + " (modes " + JoinModes(g.modes) +
             ", " + std::to_string(g.available) + " residuals);";
    }
    throw Error(ErrorKind::kInsufficientData, msg);
  }
  KernelBank bank;
  bank.table = table;
  bank.provenance = provenance;
  for (const auto& k : kernels) bank.kernels.push_back(*k);
  return bank;
}

BankTrainingResult TrainKernelBank(const ResidualCorpus& corpus,
                                   const ModeGroupTable& table,
                                   const TrainingOptions& options) {
  ValidateModeGroupTable(table);
  BankTrainingResult result;
  result.table = table;
  result.provenance.clips = corpus.sources;
  std::vector<int> qps;
  for (const ResidualRecord& r : corpus.records)
    if (std::find(qps.begin(), qps.end(), r.qp) == qps.end()) qps.push_back(r.qp);
  std::sort(qps.begin(), qps.end());
  result.provenance.qps = qps;
  result.provenance.seed = options.seed;
  result.provenance.samples_per_kernel = options.samples_per_kernel;
  result.provenance.decimal_digits = options.decimal_digits;

  std::array<std::size_t, kNumKernels> available{};
  ParallelFor(kNumKernels, [&](std::size_t k) {
    const std::vector<int>& modes = table.train_groups[k];
    const std::vector<ResidualBlock> group = SelectResiduals(corpus, modes);
    available[k] = group.size();
    if (group.size() < static_cast<std::size_t>(kMinTrainingSamples)) return;
    const uint64_t seed = options.seed ^ (0x9e3779b97f4a7c15ULL * (k + 1));
    const std::vector<std::size_t> pick =
        Subsample(group.size(), options.samples_per_kernel, seed);
    std::vector<ResidualBlock> chosen;
    chosen.reserve(pick.size());
    for (std::size_t i : pick) chosen.push_back(group[i]);
    SaabKernel kernel = LearnSaab1(chosen);
    kernel.trained_modes = modes;
    if (options.decimal_digits) kernel = RoundKernel(kernel, *options.decimal_digits);
    result.kernels[k] = std::move(kernel);
  });
  for (int k = 0; k < kNumKernels; ++k) {
    if (!result.kernels[k])
      result.starved.push_back({k, table.train_groups[k], available[k]});
  }
  return result;
}

}  // namespace saabcodec
