// saabcodec command-line driver.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 data error
// (malformed files, too little data, mismatched inputs), 4 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "saabcodec/analysis.h"
#include "saabcodec/byte_io.h"
#include "saabcodec/clip_synth.h"
#include "saabcodec/codec.h"
#include "saabcodec/error.h"
#include "saabcodec/experiment.h"
#include "saabcodec/kernel_bank.h"
#include "saabcodec/residual_pipeline.h"

namespace saabcodec {
namespace {

using json = nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return kExitConfig;
    case ErrorKind::kInsufficientData:
    case ErrorKind::kDegenerate:
    case ErrorKind::kFormat:
    case ErrorKind::kMismatch:
    case ErrorKind::kIo:
      return kExitData;
  }
  return kExitInternal;
}

void WriteText(const std::string& path, const std::string& text) {
  WriteFileBytes(path, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()),
                                                text.size()));
}

void EmitJson(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    WriteText(path, j.dump(2) + "\n");
  }
}

// Options shared by every verb that reads raw video.
struct VideoInput {
  int width = 0;
  int height = 0;
  int first = 0;
  int frames = 0;  // 0: through the end

  void Add(CLI::App* app) {
    app->add_option("--width", width, "Luma width")->required();
    app->add_option("--height", height, "Luma height")->required();
    app->add_option("--first-frame", first, "First frame to read")->check(CLI::NonNegativeNumber);
    app->add_option("--frames", frames, "Frame count (0 = all)")->check(CLI::NonNegativeNumber);
  }

  FrameRange Range() const {
    FrameRange r;
    r.first = first;
    if (frames > 0) r.count = frames;
    return r;
  }

  std::vector<LumaPlane> Read(const std::string& path) const {
    return ReadYuv(path, width, height, Range());
  }
};

struct IntraFlags {
  bool no_smoothing = false;
  bool no_boundary_filters = false;

  void Add(CLI::App* app) {
    app->add_flag("--no-reference-smoothing", no_smoothing, "Disable [1 2 1] reference filtering");
    app->add_flag("--no-boundary-filters", no_boundary_filters,
                  "Disable DC/horizontal/vertical edge filters");
  }

  IntraOptions Options() const { return {!no_smoothing, !no_boundary_filters}; }
};

std::string ClipName(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

BiasMode ParseBias(const std::string& s) {
  if (s == "centered") return BiasMode::kCentered;
  if (s == "raw") return BiasMode::kRaw;
  throw Error(ErrorKind::kInvalidInput, "bias mode must be raw or centered");
}

std::vector<RdPoint> ParsePoints(const std::string& text) {
  // rate:psnr,rate:psnr,...
  std::vector<RdPoint> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorKind::kInvalidInput, "expected rate:psnr, got '" + item + "'");
    try {
      out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidInput, "bad number in '" + item + "'");
    }
  }
  return out;
}

void SetupIngest(CLI::App& root) {
  auto* app = root.add_subcommand("ingest", "Read raw 4:2:0 video, crop to the 8x8 grid, rewrite it");
  static std::string input, output, info;
  static VideoInput video;
  app->add_option("--input", input, "Planar 8-bit 4:2:0 file")->required();
  video.Add(app);
  app->add_option("--output", output, "Cropped 4:2:0 output (flat chroma)");
  app->add_option("--info", info, "Summary JSON path (default stdout)");
  app->callback([] {
    const auto planes = video.Read(input);
    if (!output.empty()) WriteYuv(output, planes);
    double sum = 0;
    for (const LumaPlane& p : planes)
      for (uint8_t v : p.samples) sum += v;
    const double n = planes.empty() ? 1.0 : static_cast<double>(planes.size()) *
                                                planes[0].samples.size();
    EmitJson({{"input", input},
              {"frames", planes.size()},
              {"width", planes.empty() ? 0 : planes[0].width},
              {"height", planes.empty() ? 0 : planes[0].height},
              {"mean_luma", sum / n}},
             info);
  });
}

void SetupMakeClip(CLI::App& root) {
  auto* app = root.add_subcommand("make-clip", "Synthesize a panning clip from a PGM picture");
  static std::string image, output;
  static PanSpec spec;
  app->add_option("--image", image, "Binary PGM source")->required();
  app->add_option("--output", output, "4:2:0 output file")->required();
  app->add_option("--width", spec.width)->capture_default_str();
  app->add_option("--height", spec.height)->capture_default_str();
  app->add_option("--frames", spec.frames)->capture_default_str();
  app->add_option("--start-x", spec.start_x)->capture_default_str();
  app->add_option("--start-y", spec.start_y)->capture_default_str();
  app->add_option("--dx", spec.dx, "Pixels per frame")->capture_default_str();
  app->add_option("--dy", spec.dy, "Pixels per frame")->capture_default_str();
  app->add_option("--noise", spec.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  app->add_option("--seed", spec.seed)->capture_default_str();
  app->callback([] { WriteYuv(output, SynthesizePan(ReadPgm(image), spec)); });
}

void SetupExtract(CLI::App& root) {
  auto* app = root.add_subcommand("extract-residuals",
                                  "Encode with the DCT-only codec and record per-block residuals");
  static std::vector<std::string> inputs;
  static std::string output;
  static std::vector<int> qps = kDefaultQps;
  static VideoInput video;
  static IntraFlags intra;
  app->add_option("--input", inputs, "Clips sharing the given dimensions")->required();
  video.Add(app);
  app->add_option("--qps", qps)->delimiter(',')->capture_default_str();
  app->add_option("--output", output, "Residual corpus file")->required();
  intra.Add(app);
  app->callback([] {
    std::vector<Clip> clips;
    for (const std::string& path : inputs) clips.push_back({ClipName(path), video.Read(path)});
    CodecConfig config;
    config.intra = intra.Options();
    const ResidualCorpus corpus = ExtractResiduals(clips, qps, config);
    WriteCorpus(output, corpus);
    std::cout << "wrote " << corpus.records.size() << " residuals to " << output << '\n';
  });
}

void SetupTrain(CLI::App& root) {
  auto* app = root.add_subcommand("train-bank", "Train the 24-kernel Saab bank from residual corpora");
  static std::vector<std::string> corpora;
  static std::string output, json_out;
  static TrainingOptions opt;
  static int digits = -1;
  app->add_option("--corpus", corpora, "Residual corpus files")->required();
  app->add_option("--output", output, "Bank file")->required();
  app->add_option("--samples-per-kernel", opt.samples_per_kernel)->capture_default_str();
  app->add_option("--seed", opt.seed)->capture_default_str();
  app->add_option("--digits", digits, "Round kernels to this many decimal digits");
  app->add_option("--json", json_out, "Also export the bank as JSON");
  app->callback([] {
    ResidualCorpus merged;
    for (const std::string& path : corpora) {
      ResidualCorpus c = ReadCorpus(path);
      const int offset = static_cast<int>(merged.sources.size());
      merged.sources.insert(merged.sources.end(), c.sources.begin(), c.sources.end());
      for (ResidualRecord& r : c.records) {
        r.source += offset;
        merged.records.push_back(r);
      }
    }
    BankTrainingResult result = TrainKernelBank(merged, CanonicalModeGroupTable(), opt);
    result.provenance.clips = merged.sources;
    KernelBank bank = result.ToBank();
    if (digits >= 0) bank = RoundBank(bank, digits);
    WriteBank(output, bank);
    if (!json_out.empty()) WriteText(json_out, BankToJson(bank));
    std::printf("bank digest %016llx\n", static_cast<unsigned long long>(BankDigest(bank)));
  });
}

void SetupEncode(CLI::App& root) {
  auto* app = root.add_subcommand("encode", "Encode a clip at one or more QPs");
  static std::string input, output, bank_path, stats, strategy = "dct_only", bias = "centered";
  static std::vector<int> qps;
  static VideoInput video;
  static IntraFlags intra;
  app->add_option("--input", input)->required();
  video.Add(app);
  app->add_option("--qp", qps, "One or more QPs")->delimiter(',')->required();
  app->add_option("--strategy", strategy, "dct_only, s1, s2 or s3")->capture_default_str();
  app->add_option("--bank", bank_path, "Kernel bank (required unless dct_only)");
  app->add_option("--bias-mode", bias)->capture_default_str();
  app->add_option("--output", output,
                  "Stream path; with several QPs, '{qp}' in the path is replaced by each QP")
      ->required();
  app->add_option("--stats", stats, "Statistics JSON path (default stdout)");
  intra.Add(app);
  app->callback([] {
    const auto frames = video.Read(input);
    CodecConfig config;
    config.strategy = ParseStrategy(strategy);
    config.bias_mode = ParseBias(bias);
    config.intra = intra.Options();
    KernelBank bank;
    if (config.strategy != Strategy::kDctOnly) {
      if (bank_path.empty()) throw Error(ErrorKind::kInvalidInput, "--bank is required for " + strategy);
      bank = ReadBank(bank_path);
      config.bank = &bank;
    }
    if (qps.size() > 1 && output.find("{qp}") == std::string::npos)
      throw Error(ErrorKind::kInvalidInput, "several QPs need '{qp}' in --output");
    json report = {{"input", input}, {"strategy", strategy}, {"points", json::array()}};
    for (int qp : qps) {
      Bitstream stream;
      stream.header = MakeHeader(frames.at(0), qp, config);
      int64_t bits = 0, sse = 0, n_saab = 0, n_total = 0, n_flags = 0;
      for (const LumaPlane& f : frames) {
        EncodedFrame e = EncodeFramePayload(f, qp, config);
        bits += e.stats.total_bits;
        sse += e.stats.sse;
        n_saab += e.stats.n_saab;
        n_total += e.stats.n_total;
        n_flags += e.stats.n_flags;
        stream.frames.push_back(std::move(e.payload));
      }
      std::string path = output;
      if (const auto at = path.find("{qp}"); at != std::string::npos)
        path.replace(at, 4, std::to_string(qp));
      const auto bytes = SerializeBitstream(stream);
      WriteFileBytes(path, bytes);
      const int64_t samples = static_cast<int64_t>(frames.size()) * frames[0].samples.size();
      report["points"].push_back(
          {{"qp", qp},
           {"stream", path},
           {"frames", frames.size()},
           {"total_bits", bits},
           {"bits_per_frame", static_cast<double>(bits) / frames.size()},
           {"stream_bytes", bytes.size()},
           {"psnr", FormatDouble(PsnrFromSse(sse, samples))},
           {"n_saab", n_saab},
           {"n_total", n_total},
           {"n_flags", n_flags},
           {"p_saab", n_total > 0 ? 100.0 * n_saab / n_total : 0.0}});
    }
    EmitJson(report, stats);
  });
}

void SetupDecode(CLI::App& root) {
  auto* app = root.add_subcommand("decode", "Decode a stream to 4:2:0 video");
  static std::string input, output, bank_path, reference, stats;
  app->add_option("--input", input, "Stream file")->required();
  app->add_option("--bank", bank_path, "Kernel bank the stream was coded with");
  app->add_option("--output", output, "4:2:0 output");
  app->add_option("--reference", reference, "Original 4:2:0 clip for PSNR");
  app->add_option("--stats", stats, "Statistics JSON path (default stdout)");
  app->callback([] {
    const Bitstream stream = ParseBitstream(ReadFileBytes(input));
    KernelBank bank;
    const KernelBank* bank_ptr = nullptr;
    if (!bank_path.empty()) {
      bank = ReadBank(bank_path);
      bank_ptr = &bank;
    }
    const auto decoded = DecodeStream(stream, bank_ptr);
    std::vector<LumaPlane> planes;
    int64_t n_saab = 0, n_total = 0, n_flags = 0;
    for (const DecodedFrame& d : decoded) {
      planes.push_back(d.plane);
      n_saab += d.n_saab;
      n_total += d.n_total;
      n_flags += d.n_flags;
    }
    if (!output.empty()) WriteYuv(output, planes);
    json j = {{"frames", planes.size()},
              {"qp", stream.header.qp},
              {"strategy", StrategyName(stream.header.strategy)},
              {"n_saab", n_saab},
              {"n_total", n_total},
              {"n_flags", n_flags},
              {"p_saab", n_total > 0 ? 100.0 * n_saab / n_total : 0.0}};
    if (!reference.empty()) {
      const auto ref = ReadYuv(reference, stream.header.width, stream.header.height,
                               {0, static_cast<int>(planes.size())});
      int64_t sse = 0;
      for (std::size_t f = 0; f < planes.size(); ++f)
        for (std::size_t i = 0; i < planes[f].samples.size(); ++i) {
          const int d = planes[f].samples[i] - ref[f].samples[i];
          sse += d * d;
        }
      j["psnr"] = FormatDouble(
          PsnrFromSse(sse, static_cast<int64_t>(planes.size()) * planes[0].samples.size()));
    }
    EmitJson(j, stats);
  });
}

std::vector<ResidualBlock> LoadSelected(const std::vector<std::string>& paths,
                                        const std::vector<int>& modes,
                                        const std::vector<int>& qps) {
  std::vector<ResidualBlock> out;
  for (const std::string& path : paths) {
    ResidualCorpus c = ReadCorpus(path);
    if (!qps.empty())
      std::erase_if(c.records, [&](const ResidualRecord& r) {
        return std::find(qps.begin(), qps.end(), r.qp) == qps.end();
      });
    const auto sel = SelectResiduals(c, modes);
    out.insert(out.end(), sel.begin(), sel.end());
  }
  return out;
}

void SetupAnalyzeTransforms(CLI::App& root) {
  auto* app = root.add_subcommand(
      "analyze-transforms", "Energy compaction and decorrelation of DCT, KLT, saab1 and saab2");
  static std::vector<std::string> train, eval;
  static std::vector<int> modes = {kPlanarMode}, qps;
  static std::string out_dir = ".";
  app->add_option("--train", train, "Corpus files the learned transforms are trained on")->required();
  app->add_option("--eval", eval, "Held-out corpus files")->required();
  app->add_option("--modes", modes, "Intra modes to select")->delimiter(',')->capture_default_str();
  app->add_option("--qps", qps, "Restrict to these QPs")->delimiter(',');
  app->add_option("--output-dir", out_dir)->capture_default_str();
  app->callback([] {
    const auto tr = LoadSelected(train, modes, qps);
    const auto ev = LoadSelected(eval, modes, qps);
    const TransformAnalysis a = AnalyzeTransforms(tr, ev);
    std::filesystem::create_directories(out_dir);
    WriteText(out_dir + "/compaction.csv", CompactionCsv(a));
    WriteText(out_dir + "/decorrelation.csv", DecorrelationCsv(a));
    for (const TransformResult& t : a.transforms)
      std::printf("%-6s E(4) %.4f  C %.6g\n", t.name.c_str(), t.curve.values[3],
                  t.decorrelation_cost);
  });
}

void SetupRdModel(CLI::App& root) {
  auto* app = root.add_subcommand("rd-model", "Per-mode kappa and variance of bank kernels vs DCT");
  static std::vector<std::string> corpora;
  static std::string bank_path, out_dir = ".";
  static std::vector<int> modes, qps = kDefaultQps;
  app->add_option("--corpus", corpora)->required();
  app->add_option("--bank", bank_path)->required();
  app->add_option("--modes", modes, "Default: all 35")->delimiter(',');
  app->add_option("--qps", qps)->delimiter(',')->capture_default_str();
  app->add_option("--output-dir", out_dir)->capture_default_str();
  app->callback([] {
    ResidualCorpus merged;
    for (const std::string& path : corpora) {
      ResidualCorpus c = ReadCorpus(path);
      merged.records.insert(merged.records.end(), c.records.begin(), c.records.end());
    }
    if (modes.empty())
      for (int m = 0; m < kNumIntraModes; ++m) modes.push_back(m);
    const KernelBank bank = ReadBank(bank_path);
    const auto rows = AnalyzeRdModel(merged, bank, modes, qps);
    std::filesystem::create_directories(out_dir);
    WriteText(out_dir + "/kappa.csv", KappaCsv(rows));
    WriteText(out_dir + "/sigma.csv", SigmaCsv(rows));
    std::printf("%zu (mode, qp) cells\n", rows.size());
  });
}

void SetupExperiment(CLI::App& root) {
  auto* app = root.add_subcommand("experiment", "Run an RD experiment manifest");
  static std::string manifest_path, out_dir;
  app->add_option("--manifest", manifest_path)->required();
  app->add_option("--output-dir", out_dir, "Overrides the manifest's output_dir");
  app->callback([] {
    ExperimentManifest m = LoadManifest(manifest_path);
    if (!out_dir.empty()) m.output_dir = out_dir;
    const ExperimentReport report = RunExperiment(m);
    WriteReport(report, m.output_dir);
    for (const BdRow& b : report.bd) {
      if (b.status == "ok") {
        std::printf("%-12s %-3s d=%-3d BDBR %+7.3f%%  BDPSNR %+.4f dB\n", b.clip.c_str(),
                    StrategyName(b.strategy), b.digits, b.bdbr_percent, b.bdpsnr_db);
      } else {
        std::printf("%-12s %-3s d=%-3d %s\n", b.clip.c_str(), StrategyName(b.strategy), b.digits,
                    b.status.c_str());
      }
    }
    std::printf("report written to %s\n", m.output_dir.c_str());
  });
}

void SetupBdrate(CLI::App& root) {
  auto* app = root.add_subcommand("bdrate", "BD-rate and BD-PSNR between two RD curves");
  static std::string anchor, test;
  app->add_option("--anchor", anchor, "rate:psnr,rate:psnr,...")->required();
  app->add_option("--test", test, "rate:psnr,rate:psnr,...")->required();
  app->callback([] {
    const BdResult r = BdRate(ParsePoints(anchor), ParsePoints(test));
    std::printf("bdbr_percent %.6f\nbdpsnr_db %.6f\n", r.bdbr_percent, r.bdpsnr_db);
  });
}

int Main(int argc, char** argv) {
  CLI::App app{"Learned Saab transforms in an HEVC-style intra codec"};
  app.require_subcommand(1);
  SetupIngest(app);
  SetupMakeClip(app);
  SetupExtract(app);
  SetupTrain(app);
  SetupEncode(app);
  SetupDecode(app);
  SetupAnalyzeTransforms(app);
  SetupRdModel(app);
  SetupExperiment(app);
  SetupBdrate(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}

}  // namespace
}  // namespace saabcodec

int main(int argc, char** argv) { return saabcodec::Main(argc, argv); }
