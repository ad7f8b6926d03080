#include "saabcodec/experiment.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "saabcodec/byte_io.h"
#include "saabcodec/parallel.h"

namespace saabcodec {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* BiasModeName(BiasMode m) { return m == BiasMode::kRaw ? "raw" : "centered"; }

BiasMode ParseBiasMode(const std::string& s) {
  if (s == "raw") return BiasMode::kRaw;
  if (s == "centered") return BiasMode::kCentered;
  throw Error(ErrorKind::kInvalidInput, "unknown bias mode: " + s);
}

std::string Resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

std::string DigitsLabel(int digits) { return digits < 0 ? "" : std::to_string(digits); }

double Seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Job {
  std::size_t clip = 0;
  Strategy strategy = Strategy::kDctOnly;
  int digits = -1;
  int qp = 0;
  const KernelBank* bank = nullptr;
};

RdRow RunPoint(const Clip& clip, const Job& job, const ExperimentOptions& options) {
  CodecConfig config;
  config.strategy = job.strategy;
  config.bank = job.strategy == Strategy::kDctOnly ? nullptr : job.bank;
  config.intra = options.intra;
  config.bias_mode = options.bias_mode;

  RdRow row;
  row.clip = clip.name;
  row.strategy = job.strategy;
  row.digits = job.digits;
  row.qp = job.qp;
  row.frames = static_cast<int>(clip.frames.size());

  std::vector<double> enc_times;
  std::vector<double> dec_times;
  const int runs = std::max(1, options.timing_runs);
  for (int run = 0; run < runs; ++run) {
    const auto t0 = std::chrono::steady_clock::now();
    Bitstream stream;
    stream.header = MakeHeader(clip.frames.front(), job.qp, config);
    std::vector<LumaPlane> recon;
    FrameStats total;
    for (const LumaPlane& frame : clip.frames) {
      EncodedFrame e = EncodeFramePayload(frame, job.qp, config);
      stream.frames.push_back(std::move(e.payload));
      recon.push_back(std::move(e.recon));
      total.total_bits += e.stats.total_bits;
      total.sse += e.stats.sse;
      total.n_saab += e.stats.n_saab;
      total.n_total += e.stats.n_total;
      total.n_flags += e.stats.n_flags;
    }
    const std::vector<uint8_t> bytes = SerializeBitstream(stream);
    const auto t1 = std::chrono::steady_clock::now();
    const std::vector<DecodedFrame> decoded = DecodeStream(ParseBitstream(bytes), job.bank);
    const auto t2 = std::chrono::steady_clock::now();
    enc_times.push_back(Seconds(t0, t1));
    dec_times.push_back(Seconds(t1, t2));
    if (run > 0) continue;

    row.total_bits = total.total_bits;
    row.sse = total.sse;
    row.n_saab = total.n_saab;
    row.n_total = total.n_total;
    row.n_flags = total.n_flags;
    row.stream_bytes = bytes.size();
    row.decode_matches = decoded.size() == recon.size();
    int64_t samples = 0;
    for (std::size_t f = 0; f < decoded.size(); ++f) {
      row.decoded_n_saab += decoded[f].n_saab;
      row.decoded_n_flags += decoded[f].n_flags;
      if (row.decode_matches && !(decoded[f].plane == recon[f])) row.decode_matches = false;
      samples += static_cast<int64_t>(clip.frames[f].samples.size());
    }
    row.bits_per_frame = static_cast<double>(row.total_bits) / row.frames;
    row.psnr = PsnrFromSse(row.sse, samples);
  }
  if (options.timing_runs > 0) {
    row.encode_seconds = Median(enc_times);
    row.decode_seconds = Median(dec_times);
  }
  return row;
}

std::string JobLabel(const Clip& clip, const Job& job) {
  std::string s = "clip " + clip.name + ", qp " + std::to_string(job.qp) + ", strategy " +
                  StrategyName(job.strategy);
  if (job.digits >= 0) s += ", digits " + std::to_string(job.digits);
  return s;
}

json PsnrJson(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ExperimentManifest ParseManifest(const std::string& json_text, const std::string& base_dir) {
  ExperimentManifest m;
  try {
    const json j = json::parse(json_text);
    for (const json& c : j.at("clips")) {
      ClipSource src;
      src.path = Resolve(base_dir, c.at("path").get<std::string>());
      src.name = c.value("name", fs::path(src.path).stem().string());
      src.width = c.at("width").get<int>();
      src.height = c.at("height").get<int>();
      src.frames.first = c.value("first_frame", 0);
      if (c.contains("frames")) src.frames.count = c.at("frames").get<int>();
      m.clips.push_back(std::move(src));
    }
    if (m.clips.empty()) throw Error(ErrorKind::kInvalidInput, "manifest lists no clips");
    m.bank_path = Resolve(base_dir, j.value("bank", std::string()));
    m.seed = j.value("seed", uint64_t{0});
    m.output_dir = Resolve(base_dir, j.value("output_dir", std::string("report")));
    ExperimentOptions& o = m.options;
    if (j.contains("qps")) o.qps = j.at("qps").get<std::vector<int>>();
    if (j.contains("strategies")) {
      o.strategies.clear();
      for (const json& s : j.at("strategies")) o.strategies.push_back(ParseStrategy(s.get<std::string>()));
    }
    o.timing_runs = j.value("timing_runs", 3);
    if (j.contains("precision_digits"))
      o.precision_digits = j.at("precision_digits").get<std::vector<int>>();
    o.precision_strategy = ParseStrategy(j.value("precision_strategy", std::string("s3")));
    o.bias_mode = ParseBiasMode(j.value("bias_mode", std::string("centered")));
    o.intra.reference_smoothing = j.value("reference_smoothing", true);
    o.intra.boundary_filters = j.value("boundary_filters", true);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("manifest: ") + e.what());
  }
  if (m.options.qps.size() < 4) {
    throw Error(ErrorKind::kInvalidInput, "manifest needs at least 4 QPs for BD fitting");
  }
  if (m.options.timing_runs < 0) throw Error(ErrorKind::kInvalidInput, "timing_runs < 0");
  return m;
}

ExperimentManifest LoadManifest(const std::string& path) {
  const std::vector<uint8_t> bytes = ReadFileBytes(path);
  return ParseManifest(std::string(bytes.begin(), bytes.end()),
                       fs::path(path).parent_path().string());
}

std::string ManifestToJson(const ExperimentManifest& m) {
  json j;
  j["clips"] = json::array();
  for (const ClipSource& c : m.clips) {
    json cj = {{"name", c.name}, {"path", c.path}, {"width", c.width},
               {"height", c.height}, {"first_frame", c.frames.first}};
    if (c.frames.count) cj["frames"] = *c.frames.count;
    j["clips"].push_back(cj);
  }
  j["bank"] = m.bank_path;
  j["seed"] = m.seed;
  j["output_dir"] = m.output_dir;
  j["qps"] = m.options.qps;
  j["strategies"] = json::array();
  for (Strategy s : m.options.strategies) j["strategies"].push_back(StrategyName(s));
  j["timing_runs"] = m.options.timing_runs;
  j["precision_digits"] = m.options.precision_digits;
  j["precision_strategy"] = StrategyName(m.options.precision_strategy);
  j["bias_mode"] = BiasModeName(m.options.bias_mode);
  j["reference_smoothing"] = m.options.intra.reference_smoothing;
  j["boundary_filters"] = m.options.intra.boundary_filters;
  return j.dump(2);
}

const RdRow* ExperimentReport::FindRd(const std::string& clip, Strategy s, int digits,
                                      int qp) const {
  for (const RdRow& r : rd)
    if (r.clip == clip && r.strategy == s && r.digits == digits && r.qp == qp) return &r;
  return nullptr;
}

const BdRow* ExperimentReport::FindBd(const std::string& clip, Strategy s, int digits) const {
  for (const BdRow& r : bd)
    if (r.clip == clip && r.strategy == s && r.digits == digits) return &r;
  return nullptr;
}

ExperimentReport RunExperiment(std::span<const Clip> clips, const KernelBank* bank,
                               const ExperimentOptions& options) {
  if (clips.empty()) throw Error(ErrorKind::kInvalidInput, "no clips");
  for (const Clip& c : clips)
    if (c.frames.empty()) throw Error(ErrorKind::kInvalidInput, "clip " + c.name + " has no frames");

  std::vector<Strategy> strategies = {Strategy::kDctOnly};
  for (Strategy s : options.strategies)
    if (std::find(strategies.begin(), strategies.end(), s) == strategies.end())
      strategies.push_back(s);
  const bool needs_bank = strategies.size() > 1 || !options.precision_digits.empty();
  if (needs_bank && bank == nullptr) {
    throw Error(ErrorKind::kInvalidInput, "learned-kernel strategies need a kernel bank");
  }

  std::map<int, KernelBank> rounded;
  for (int d : options.precision_digits) {
    if (d < 0) throw Error(ErrorKind::kInvalidInput, "precision digits must be >= 0");
    rounded.emplace(d, RoundBank(*bank, d));
  }

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    for (Strategy s : strategies)
      for (int qp : options.qps) jobs.push_back({c, s, -1, qp, bank});
    for (const auto& [d, b] : rounded)
      for (int qp : options.qps) jobs.push_back({c, options.precision_strategy, d, qp, &b});
  }

  std::vector<RdRow> rows(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t i) {
    const Clip& clip = clips[jobs[i].clip];
    try {
      rows[i] = RunPoint(clip, jobs[i], options);
    } catch (const Error& e) {
      throw Error(e.kind(), JobLabel(clip, jobs[i]) + ": " + e.what());
    }
  });

  ExperimentReport report;
  report.rd = rows;

  auto curve = [&](const std::string& clip, Strategy s, int digits) {
    std::vector<RdPoint> pts;
    std::vector<UsageCount> enc;
    std::vector<UsageCount> dec;
    std::vector<QpTiming> times;
    for (const RdRow& r : report.rd) {
      if (r.clip != clip || r.strategy != s || r.digits != digits) continue;
      if (!IsLossless(r.psnr) && r.total_bits > 0)
        pts.push_back({r.bits_per_frame, r.psnr});
      enc.push_back({r.qp, r.n_saab, r.n_total});
      dec.push_back({r.qp, r.decoded_n_saab, r.n_total});
      times.push_back({r.qp, r.encode_seconds, r.decode_seconds});
    }
    return std::tuple(pts, enc, dec, times);
  };

  auto add_derived = [&](const Clip& clip, Strategy s, int digits) {
    const auto [anchor_pts, a_enc, a_dec, anchor_times] = curve(clip.name, Strategy::kDctOnly, -1);
    const auto [pts, enc, dec, times] = curve(clip.name, s, digits);
    BdRow bd{clip.name, s, digits, "ok", 0.0, 0.0};
    try {
      const BdResult r = BdRate(anchor_pts, pts);
      bd.bdbr_percent = r.bdbr_percent;
      bd.bdpsnr_db = r.bdpsnr_db;
    } catch (const Error& e) {
      bd.status = e.what();
      bd.bdbr_percent = bd.bdpsnr_db = std::numeric_limits<double>::quiet_NaN();
    }
    report.bd.push_back(bd);

    const SaabUsage u_enc = ComputeSaabUsage(enc);
    const SaabUsage u_dec = ComputeSaabUsage(dec);
    for (std::size_t i = 0; i < u_enc.qps.size(); ++i)
      report.usage.push_back({clip.name, s, digits, u_enc.qps[i], u_enc.percent[i], u_dec.percent[i]});
    report.usage.push_back({clip.name, s, digits, std::nullopt, u_enc.average, u_dec.average});

    if (digits < 0 && options.timing_runs > 0) {
      const TimingRatios t = TimingRatio(times, anchor_times);
      report.timing.push_back({clip.name, s, t.encr_percent, t.decr_percent});
    }
  };

  for (const Clip& clip : clips) {
    for (Strategy s : strategies)
      if (s != Strategy::kDctOnly) add_derived(clip, s, -1);
    for (const auto& entry : rounded) add_derived(clip, options.precision_strategy, entry.first);
  }
  return report;
}

ExperimentReport RunExperiment(const ExperimentManifest& manifest) {
  std::vector<Clip> clips;
  for (const ClipSource& src : manifest.clips)
    clips.push_back({src.name, ReadYuv(src.path, src.width, src.height, src.frames)});
  std::optional<KernelBank> bank;
  if (!manifest.bank_path.empty()) bank = ReadBank(manifest.bank_path);
  ExperimentReport report =
      RunExperiment(clips, bank ? &*bank : nullptr, manifest.options);
  report.manifest_json = ManifestToJson(manifest);
  return report;
}

std::string RdPointsCsv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "clip,strategy,digits,qp,frames,total_bits,bits_per_frame,sse,psnr,n_saab,n_total,"
        "n_flags,decoded_n_saab,decoded_n_flags,decode_matches,stream_bytes\n";
  for (const RdRow& r : report.rd) {
    os << r.clip << ',' << StrategyName(r.strategy) << ',' << DigitsLabel(r.digits) << ','
       << r.qp << ',' << r.frames << ',' << r.total_bits << ',' << FormatDouble(r.bits_per_frame)
       << ',' << r.sse << ',' << FormatDouble(r.psnr) << ',' << r.n_saab << ',' << r.n_total
       << ',' << r.n_flags << ',' << r.decoded_n_saab << ',' << r.decoded_n_flags << ','
       << (r.decode_matches ? 1 : 0) << ',' << r.stream_bytes << '\n';
  }
  return os.str();
}

std::string BdCsv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "clip,strategy,digits,bdbr_percent,bdpsnr_db,status\n";
  for (const BdRow& r : report.bd) {
    os << r.clip << ',' << StrategyName(r.strategy) << ',' << DigitsLabel(r.digits) << ','
       << FormatDouble(r.bdbr_percent) << ',' << FormatDouble(r.bdpsnr_db) << ",\""
       << r.status << "\"\n";
  }
  return os.str();
}

std::string UsageCsv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "clip,strategy,digits,qp,p_saab,p_saab_decoded\n";
  for (const UsageRow& r : report.usage) {
    os << r.clip << ',' << StrategyName(r.strategy) << ',' << DigitsLabel(r.digits) << ','
       << (r.qp ? std::to_string(*r.qp) : "avg") << ',' << FormatDouble(r.p_saab) << ','
       << FormatDouble(r.p_saab_decoded) << '\n';
  }
  return os.str();
}

std::string TimingCsv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "clip,strategy,qp,encode_seconds,decode_seconds\n";
  for (const RdRow& r : report.rd) {
    if (r.digits >= 0) continue;
    os << r.clip << ',' << StrategyName(r.strategy) << ',' << r.qp << ','
       << FormatDouble(r.encode_seconds) << ',' << FormatDouble(r.decode_seconds) << '\n';
  }
  for (const TimingRow& t : report.timing) {
    os << t.clip << ',' << StrategyName(t.strategy) << ",encr_decr_percent,"
       << FormatDouble(t.encr_percent) << ',' << FormatDouble(t.decr_percent) << '\n';
  }
  return os.str();
}

std::string ReportJson(const ExperimentReport& report) {
  json j;
  j["manifest"] = report.manifest_json.empty() ? json(nullptr) : json::parse(report.manifest_json);
  j["rd_points"] = json::array();
  for (const RdRow& r : report.rd) {
    j["rd_points"].push_back({{"clip", r.clip},
                              {"strategy", StrategyName(r.strategy)},
                              {"digits", r.digits < 0 ? json(nullptr) : json(r.digits)},
                              {"qp", r.qp},
                              {"frames", r.frames},
                              {"total_bits", r.total_bits},
                              {"bits_per_frame", r.bits_per_frame},
                              {"sse", r.sse},
                              {"psnr", PsnrJson(r.psnr)},
                              {"n_saab", r.n_saab},
                              {"n_total", r.n_total},
                              {"n_flags", r.n_flags},
                              {"decoded_n_saab", r.decoded_n_saab},
                              {"decoded_n_flags", r.decoded_n_flags},
                              {"decode_matches", r.decode_matches},
                              {"stream_bytes", r.stream_bytes}});
  }
  j["bd"] = json::array();
  for (const BdRow& r : report.bd) {
    json row = {{"clip", r.clip},
                {"strategy", StrategyName(r.strategy)},
                {"digits", r.digits < 0 ? json(nullptr) : json(r.digits)},
                {"status", r.status}};
    row["bdbr_percent"] = std::isfinite(r.bdbr_percent) ? json(r.bdbr_percent) : json(nullptr);
    row["bdpsnr_db"] = std::isfinite(r.bdpsnr_db) ? json(r.bdpsnr_db) : json(nullptr);
    j["bd"].push_back(row);
  }
  j["usage"] = json::array();
  for (const UsageRow& r : report.usage) {
    j["usage"].push_back({{"clip", r.clip},
                          {"strategy", StrategyName(r.strategy)},
                          {"digits", r.digits < 0 ? json(nullptr) : json(r.digits)},
                          {"qp", r.qp ? json(*r.qp) : json("avg")},
                          {"p_saab", r.p_saab},
                          {"p_saab_decoded", r.p_saab_decoded}});
  }
  // Wall-clock fields live only here and in timing.csv.
  j["timing"] = json::array();
  for (const RdRow& r : report.rd) {
    if (r.digits >= 0) continue;
    j["timing"].push_back({{"clip", r.clip},
                           {"strategy", StrategyName(r.strategy)},
                           {"qp", r.qp},
                           {"encode_seconds", r.encode_seconds},
                           {"decode_seconds", r.decode_seconds}});
  }
  j["timing_ratios"] = json::array();
  for (const TimingRow& t : report.timing) {
    j["timing_ratios"].push_back({{"clip", t.clip},
                                  {"strategy", StrategyName(t.strategy)},
                                  {"encr_percent", t.encr_percent},
                                  {"decr_percent", t.decr_percent}});
  }
  return j.dump(2) + "\n";
}

void WriteReport(const ExperimentReport& report, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir + ": " + ec.message());
  auto put = [&dir](const char* name, const std::string& text) {
    WriteFileBytes((fs::path(dir) / name).string(),
                   std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
  };
  put("rd_points.csv", RdPointsCsv(report));
  put("bd.csv", BdCsv(report));
  put("usage.csv", UsageCsv(report));
  put("timing.csv", TimingCsv(report));
  put("report.json", ReportJson(report));
}

}  // namespace saabcodec
