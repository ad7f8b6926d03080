// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "saabcodec/analysis.h"
#include "saabcodec/codec.h"
#include "saabcodec/coefficient_coding.h"
#include "saabcodec/dct.h"
#include "saabcodec/experiment.h"
#include "saabcodec/matrix.h"
#include "saabcodec/metrics.h"
#include "saabcodec/saab.h"
#include "test_util.h"

namespace saabcodec {
namespace {

using testing::MakePan;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double MaxDiff(const std::array<double, kBlockArea>& a, const std::array<double, kBlockArea>& b) {
  double m = 0;
  for (int i = 0; i < kBlockArea; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double DctOrthonormality() {
  Mat64 m;
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v)
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) m(8 * u + v, 8 * y + x) = DctBasis(u, y) * DctBasis(v, x);
  return OrthonormalityError(m);
}

Outcome Criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto train = testing::SmoothResiduals(101, 5000);
  const SaabKernel klt = LearnKlt(train);
  const SaabKernel saab1 = LearnSaab1(train);
  const TwoStageSaabKernel saab2 = LearnSaab2(train);

  double ortho = std::max({DctOrthonormality(), OrthonormalityError(klt.matrix),
                           OrthonormalityError(saab1.matrix), OrthonormalityError(saab2.stage1.matrix)});
  for (const auto& s : saab2.stage2) ortho = std::max(ortho, OrthonormalityError(s.matrix));

  double err[4] = {0, 0, 0, 0};  // dct, klt, saab1, saab2
  SeededRng rng(102);
  for (int i = 0; i < 10000; ++i) {
    const SampleBlock x = testing::RandomSamples(rng, 255.0);
    for (BiasMode mode : {BiasMode::kRaw, BiasMode::kCentered}) {
      err[0] = std::max(err[0], MaxDiff(DctInverse(DctForward(x)), x));
      err[1] = std::max(err[1], MaxDiff(KernelInverse(klt, KernelForward(klt, x, mode), mode), x));
      err[2] = std::max(err[2], MaxDiff(KernelInverse(saab1, KernelForward(saab1, x, mode), mode), x));
      err[3] = std::max(err[3], MaxDiff(Saab2Inverse(saab2, Saab2Forward(saab2, x, mode), mode), x));
    }
  }
  const double worst = *std::max_element(err, err + 4);
  const double t = Seconds(t0);
  return {worst < 1e-9 && ortho < 1e-9 && t < 30,
          Fmt("round-trip max err dct %.1e klt %.1e saab1 %.1e saab2 %.1e, orthonormality %.1e, %.1f s",
              err[0], err[1], err[2], err[3], ortho, t)};
}

Outcome Criterion2() {
  bool ok = true;
  double worst_dc = 0, worst_dot = 0, worst_bias = 0;
  for (uint64_t seed : {201, 202, 203}) {
    const auto data = testing::SmoothResiduals(seed, 3000);
    const SaabKernel k = LearnSaab1(data);
    for (int c = 0; c < kBlockArea; ++c) worst_dc = std::max(worst_dc, std::abs(k.matrix(0, c) - 0.125));
    for (int r = 1; r < kBlockArea; ++r)
      worst_dot = std::max(worst_dot, std::abs(Dot<64>(k.matrix.Row(0), k.matrix.Row(r))));
    double max_norm = 0;
    for (const ResidualBlock& d : data) {
      double n = 0;
      for (int16_t s : d.samples()) n += static_cast<double>(s) * s;
      max_norm = std::max(max_norm, std::sqrt(n));
    }
    ok = ok && k.bias[0] == 0.0;
    for (int r = 1; r < kBlockArea; ++r)
      worst_bias = std::max(worst_bias, std::abs(k.bias[r] - max_norm) / max_norm);
  }
  ok = ok && worst_dc < 1e-15 && worst_dot < 1e-10 && worst_bias < 1e-12;
  return {ok, Fmt("3 seeds: |a0 - 1/8| %.1e, max |a0.ak| %.1e, bias[0] = 0, AC bias rel err %.1e",
                  worst_dc, worst_dot, worst_bias)};
}

Outcome Criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Clip> clips = {MakePan("camera", 30, 30, 1, 1, 4)};
  const ResidualCorpus corpus = ExtractResiduals(clips, kDefaultQps);
  std::vector<SampleBlock> x;
  for (std::size_t i = 0; i < corpus.records.size() && x.size() < 2000; i += 1)
    x.push_back(ToSamples(corpus.records[i].residual));
  if (x.size() < 2000) return {false, "not enough residuals"};
  Vec64 mean{};
  for (const SampleBlock& b : x)
    for (int i = 0; i < kBlockArea; ++i) mean[i] += b[i] / x.size();
  for (SampleBlock& b : x)
    for (int i = 0; i < kBlockArea; ++i) b[i] -= mean[i];

  const SaabKernel klt = LearnKlt(x);
  std::vector<CoeffBlock> yk, yd;
  for (const SampleBlock& b : x) {
    yk.push_back(KernelForward(klt, b, BiasMode::kCentered));
    yd.push_back(DctForward(b));
  }
  const double var = InputVariance(x);
  const double total = var * kBlockArea;
  const double rel = DecorrelationCost(yk) / total;
  const CompactionCurve ck = EnergyCompaction(yk, var);
  const CompactionCurve cd = EnergyCompaction(yd, var);
  int dominated = 0;
  for (int i = 0; i < kBlockArea; ++i) dominated += ck.values[i] >= cd.values[i] - 1e-12;
  const double t = Seconds(t0);
  return {rel < 1e-6 && dominated == kBlockArea && t < 60,
          Fmt("%zu residuals: KLT C/total %.1e, KLT >= DCT at %d/64 counts (E(4) %.4f vs %.4f), %.1f s",
              x.size(), rel, dominated, ck.values[3], cd.values[3], t)};
}

ResidualCorpus Filter(const ResidualCorpus& c, const std::function<bool(const ResidualRecord&)>& keep) {
  ResidualCorpus out;
  out.sources = c.sources;
  for (const ResidualRecord& r : c.records)
    if (keep(r)) out.records.push_back(r);
  return out;
}

struct CompactionCheck {
  std::size_t train = 0, eval = 0;
  int wins = 0;
  double c_klt = 0, c_saab_pooled = 0;
  double c_saab = 0, c_dct = 0;  // means over QPs
  int settings = 0;
};

CompactionCheck CheckSplit(const ResidualCorpus& corpus, const std::function<bool(int)>& is_eval_frame) {
  const std::vector<int> planar = {kPlanarMode};
  const auto train = SelectResiduals(
      Filter(corpus, [&](const ResidualRecord& r) { return !is_eval_frame(r.frame); }), planar);
  const ResidualCorpus eval_corpus =
      Filter(corpus, [&](const ResidualRecord& r) { return is_eval_frame(r.frame); });
  const auto eval = SelectResiduals(eval_corpus, planar);
  CompactionCheck c;
  c.train = train.size();
  c.eval = eval.size();
  const TransformAnalysis pooled = AnalyzeTransforms(train, eval);
  for (int i = 0; i < kBlockArea; ++i)
    c.wins += pooled.transforms[2].curve.values[i] >= pooled.transforms[0].curve.values[i];
  c.c_klt = pooled.transforms[1].decorrelation_cost;
  c.c_saab_pooled = pooled.transforms[2].decorrelation_cost;
  for (int qp : kDefaultQps) {
    const auto e = SelectResiduals(
        Filter(eval_corpus, [&](const ResidualRecord& r) { return r.qp == qp; }), planar);
    if (e.size() < 64) continue;
    const TransformAnalysis a = AnalyzeTransforms(train, e);
    c.c_dct += a.transforms[0].decorrelation_cost;
    c.c_saab += a.transforms[2].decorrelation_cost;
    ++c.settings;
  }
  c.c_dct /= c.settings;
  c.c_saab /= c.settings;
  return c;
}

Outcome Criterion4() {
  // Clip A: every fifth frame is held out, the rest train.
  const std::vector<Clip> clip = {MakePan("astronaut", 20, 20, 1, 1, 60)};
  const ResidualCorpus corpus = ExtractResiduals(clip, kDefaultQps);
  const CompactionCheck c = CheckSplit(corpus, [](int f) { return f % 5 == 4; });
  if (c.train < 5000 || c.eval < 1000)
    return {false, Fmt("only %zu train / %zu eval planar residuals", c.train, c.eval)};
  const bool ok = c.wins >= 0.6 * kBlockArea && c.c_klt < c.c_saab_pooled && c.settings >= 3 &&
                  c.c_saab < c.c_dct;
  // Reported only: holding out the last 12 frames instead, which show
  // content the training frames never reach.
  const CompactionCheck tail = CheckSplit(corpus, [](int f) { return f >= 48; });
  return {ok, Fmt("%zu train / %zu eval: saab1 >= DCT at %d/64 counts; C klt %.0f < saab1 %.0f; "
                  "mean C over %d QPs saab1 %.0f vs DCT %.0f [contiguous tail split, not asserted: "
                  "%d/64 counts, mean C saab1 %.0f vs DCT %.0f]",
                  c.train, c.eval, c.wins, c.c_klt, c.c_saab_pooled, c.settings, c.c_saab, c.c_dct,
                  tail.wins, tail.c_saab, tail.c_dct)};
}

Outcome Criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> sigmas;
  for (int i = 0; i < 400; ++i) sigmas.push_back(0.01 * std::pow(1e4, (i + 0.5) / 400.0));
  long cells = 0, good = 0;
  for (int qp : kDefaultQps) {
    const RdParams p = RdParamsForQp(qp);
    for (std::size_t d = 0; d < sigmas.size(); ++d)
      for (std::size_t s = 0; s < d; ++s) {
        ++cells;
        good += Kappa(sigmas[s], p) < Kappa(sigmas[d], p);
      }
  }
  const double t = Seconds(t0);
  return {good == cells && t < 5, Fmt("%ld/%ld cells with kappa(sigma_S) < kappa(sigma_D), %.2f s",
                                      good, cells, t)};
}

Outcome Criterion6() {
  RdParams p;
  p.q_step = 10.0;
  p.lambda = RdParamsForQp(37).lambda;
  const double k = Kappa(1.0, p);
  return {std::abs(k - 100.0 / 112.0) < 1e-12, Fmt("kappa(1, Q=10) = %.17g, error %.1e", k,
                                                   std::abs(k - 100.0 / 112.0))};
}

Outcome EntropyFuzz() {
  SeededRng rng(701);
  BitWriter w;
  std::vector<Levels> blocks;
  for (int b = 0; b < 100000; ++b) {
    Levels l{};
    const uint64_t density = rng.Below(6);
    for (int& v : l)
      if (rng.Below(8) < density) {
        const int mag = rng.Below(16) == 0 ? static_cast<int>(rng.Below(20000)) + 1
                                           : static_cast<int>(rng.Below(6)) + 1;
        v = rng.Below(2) ? mag : -mag;
      }
    EncodeLevels(l, w);
    blocks.push_back(l);
  }
  const uint64_t bits = w.bit_count();
  const std::vector<uint8_t> bytes = w.Take();
  BitReader r(bytes, bits);
  int failures = 0;
  for (const Levels& l : blocks) failures += DecodeLevels(r) != l;
  failures += r.remaining() != 0;
  return {failures == 0, Fmt("entropy fuzz %zu blocks, %d failures", blocks.size(), failures)};
}

Outcome Criterion8() {
  CodecConfig cfg;
  cfg.strategy = Strategy::kS3;
  static const KernelBank bank = testing::SmallBank();
  cfg.bank = &bank;
  long blocks = 0, violations = 0;
  for (const Clip& clip : {MakePan("camera", 10, 10, 1, 1, 3), MakePan("rocket", 100, 40, 1, 0, 3),
                           MakePan("coffee", 60, 20, 0, 1, 3)}) {
    for (int qp : kDefaultQps)
      for (const LumaPlane& f : clip.frames) {
        const EncodeResult r = EncodeFrame(f, qp, cfg);
        for (const BlockRecord& b : r.stats.blocks) {
          ++blocks;
          violations += !(b.cost <= b.best_dct_cost);
        }
      }
  }
  return {violations == 0 && blocks > 0,
          Fmt("s3: %ld blocks, %ld with J(chosen) > J(best DCT)", blocks, violations)};
}

// Directional coding experiment shared by criteria 7, 9, 10 and 11.
struct CodingRun {
  ExperimentReport main;
  ExperimentReport precision;
  std::vector<std::string> clips;
  std::vector<std::string> precision_clips;
  double seconds = 0;
};

const std::vector<int> kPrecisionDigits = {1, 3, 5, 20};

CodingRun RunCoding() {
  const auto t0 = std::chrono::steady_clock::now();
  // Training pans visit other parts of every scene than the test pans do.
  std::vector<Clip> train;
  for (const char* name : {"astronaut", "coffee", "chelsea", "motorcycle", "camera", "rocket"}) {
    const LumaPlane img = testing::LoadImage(name);
    for (int r = 0; r < 4; ++r) {
      const int sx = (img.width - 158) * r / 3;
      const int sy = (img.height - 158) * ((r * 7) % 4) / 3;
      train.push_back(MakePan(name, sx, sy, 1, 1, 30));
    }
  }
  const ResidualCorpus corpus = ExtractResiduals(train, kDefaultQps);
  const KernelBank bank = TrainKernelBank(corpus, CanonicalModeGroupTable(), {}).ToBank();
  std::fprintf(stderr, "  bank trained on %zu residuals in %.0f s\n", corpus.records.size(),
               Seconds(t0));

  const std::vector<Clip> test = {
      MakePan("camera", 40, 40, 1, 0, 30),    MakePan("rocket", 60, 40, 1, 1, 30),
      MakePan("astronaut", 60, 60, 1, 0, 30), MakePan("coffee", 100, 30, 1, 1, 30),
      MakePan("chelsea", 50, 10, 0, 1, 30),   MakePan("motorcycle", 150, 60, 1, 0, 30)};
  CodingRun run;
  for (const Clip& c : test) run.clips.push_back(c.name);
  ExperimentOptions opt;
  opt.timing_runs = 0;
  run.main = RunExperiment(test, &bank, opt);
  std::fprintf(stderr, "  strategies done at %.0f s\n", Seconds(t0));

  const std::vector<Clip> sweep = {test[0], test[1]};
  for (const Clip& c : sweep) run.precision_clips.push_back(c.name);
  ExperimentOptions popt;
  popt.timing_runs = 0;
  popt.strategies = {};
  popt.precision_digits = kPrecisionDigits;
  run.precision = RunExperiment(sweep, &bank, popt);
  run.seconds = Seconds(t0);
  std::fprintf(stderr, "  precision sweep done at %.0f s\n", run.seconds);
  return run;
}

Outcome Criterion7(const CodingRun& run) {
  int points = 0, mismatches = 0;
  std::vector<std::string> clips;
  for (const RdRow& r : run.main.rd) {
    ++points;
    mismatches += !r.decode_matches;
  }
  const Outcome fuzz = EntropyFuzz();
  const bool grid = points == static_cast<int>(run.clips.size()) * 4 * 4;
  return {grid && mismatches == 0 && fuzz.pass,
          Fmt("%zu clips x 4 QPs x 4 strategies: %d/%d decodes bit-exact; %s", run.clips.size(),
              points - mismatches, points, fuzz.detail.c_str())};
}

Outcome Criterion9(const CodingRun& run) {
  double avg[4] = {0, 0, 0, 0};
  bool all_ok = true, s3_negative = true;
  std::string per_clip;
  for (const std::string& c : run.clips) {
    per_clip += " " + c;
    for (Strategy s : {Strategy::kS1, Strategy::kS2, Strategy::kS3}) {
      const BdRow* b = run.main.FindBd(c, s, -1);
      if (!b || b->status != "ok") {
        all_ok = false;
        continue;
      }
      avg[static_cast<int>(s)] += b->bdbr_percent / run.clips.size();
      per_clip += Fmt(" %s %+.2f", StrategyName(s), b->bdbr_percent);
      if (s == Strategy::kS3) s3_negative = s3_negative && b->bdbr_percent < 0;
    }
    per_clip += ";";
  }
  const bool ordered = avg[3] <= avg[2] && avg[2] <= avg[1];
  const bool ok = all_ok && run.clips.size() >= 2 && s3_negative && avg[3] < 0 && ordered &&
                  run.seconds < 20 * 60;
  return {ok, Fmt("average BDBR s3 %+.2f%% <= s2 %+.2f%% <= s1 %+.2f%%: %s; s3 < 0 on every clip: %s;"
                  " %.0f s;",
                  avg[3], avg[2], avg[1], ordered ? "yes" : "no", s3_negative ? "yes" : "no",
                  run.seconds) + per_clip};
}

Outcome Criterion10(const CodingRun& run) {
  bool ok = true;
  std::string detail = "s3 P_Saab (encoder = decoder):";
  for (const std::string& c : run.clips) {
    for (int qp : kDefaultQps) {
      const RdRow* r = run.main.FindRd(c, Strategy::kS3, -1, qp);
      if (!r) {
        ok = false;
        continue;
      }
      const double p = 100.0 * r->n_saab / r->n_total;
      ok = ok && p > 0 && p < 100 && r->decoded_n_saab == r->n_saab &&
           r->decoded_n_flags == r->n_flags && r->n_flags == r->n_total;
    }
    for (const UsageRow& u : run.main.usage)
      if (u.clip == c && u.strategy == Strategy::kS3 && u.digits == -1 && !u.qp) {
        ok = ok && u.p_saab == u.p_saab_decoded;
        detail += Fmt(" %s %.1f%%", c.c_str(), u.p_saab);
      }
  }
  return {ok, detail};
}

Outcome Criterion11(const CodingRun& run) {
  bool ok = true;
  std::string detail;
  for (const std::string& c : run.precision_clips) {
    double bd[21] = {};
    for (int d : kPrecisionDigits) {
      const BdRow* b = run.precision.FindBd(c, Strategy::kS3, d);
      if (!b || b->status != "ok") {
        ok = false;
        continue;
      }
      bd[d] = b->bdbr_percent;
    }
    const double d1 = std::abs(bd[1] - bd[20]);
    const double d3 = std::abs(bd[3] - bd[20]);
    const double d5 = std::abs(bd[5] - bd[20]);
    ok = ok && d3 <= d1 && d3 <= 0.3 && d5 <= 0.3;
    detail += Fmt("%s d=1 %+.2f d=3 %+.2f d=5 %+.2f d=20 %+.2f; ", c.c_str(), bd[1], bd[3], bd[5],
                  bd[20]);
  }
  return {ok, detail};
}

Outcome Criterion12() {
  const std::vector<RdPoint> a = {{12000, 30.1}, {21000, 33.4}, {37000, 36.2}, {64000, 39.5}};
  const BdResult same = BdRate(a, a);
  auto scaled = a;
  for (RdPoint& p : scaled) p.bitrate *= 1.10;
  auto lifted = a;
  for (RdPoint& p : lifted) p.psnr += 1.0;
  const double r110 = BdRate(a, scaled).bdbr_percent;
  const double p1 = BdRate(a, lifted).bdpsnr_db;

  SeededRng rng(1201);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RdPoint> x, y;
    double rate = 5000 + rng.Uniform() * 5000, psnr = 28 + rng.Uniform() * 4;
    for (int i = 0; i < 4; ++i) {
      x.push_back({rate, psnr});
      y.push_back({rate * (1 + (rng.Uniform() - 0.5) * 0.02), psnr + (rng.Uniform() - 0.5) * 0.04});
      rate *= 1.6 + rng.Uniform() * 0.4;
      psnr += 2.5 + rng.Uniform();
    }
    worst = std::max(worst, std::abs(BdRate(x, y).bdbr_percent + BdRate(y, x).bdbr_percent));
  }
  const bool ok = std::abs(same.bdbr_percent) < 1e-9 && std::abs(same.bdpsnr_db) < 1e-9 &&
                  std::abs(r110 - 10.0) < 1e-6 && std::abs(p1 - 1.0) < 1e-6 && worst <= 0.05;
  return {ok, Fmt("equal %.1e%%, rate x1.10 %.9f%%, +1 dB %.9f dB, antisymmetry worst %.4f%% "
                  "(200 small-offset pairs)",
                  same.bdbr_percent, r110, p1, worst)};
}

Outcome Criterion13() {
  const std::vector<QpTiming> anchor = {{22, 1.0, 0.3}, {27, 10.0, 0.2}, {32, 100.0, 0.1}, {37, 0.5, 2.0}};
  std::vector<QpTiming> test = anchor;
  for (int i = 0; i < 4; ++i) {
    test[i].encode_seconds *= i + 1;
    test[i].decode_seconds *= i + 1;
  }
  const TimingRatios r = TimingRatio(test, anchor);
  return {r.encr_percent == 250.0 && r.decr_percent == 250.0,
          Fmt("ratios {1,2,3,4}: EncR %.17g%%, DecR %.17g%%", r.encr_percent, r.decr_percent)};
}

int Run(const std::vector<int>& only) {
  auto selected = [&](int n) { return only.empty() || std::count(only.begin(), only.end(), n) > 0; };
  int failed = 0, ran = 0;
  auto report = [&](int n, const Outcome& o) {
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  auto guarded = [&](int n, const std::function<Outcome()>& fn) {
    if (!selected(n)) return;
    ++ran;
    try {
      report(n, fn());
    } catch (const std::exception& e) {
      report(n, {false, std::string("exception: ") + e.what()});
    }
  };
  guarded(1, Criterion1);
  guarded(2, Criterion2);
  guarded(3, Criterion3);
  guarded(4, Criterion4);
  guarded(5, Criterion5);
  guarded(6, Criterion6);
  CodingRun run;
  bool have_run = false;
  try {
    if (selected(7) || selected(9) || selected(10) || selected(11)) run = RunCoding();
    have_run = true;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "coding experiment failed: %s\n", e.what());
  }
  auto needs_run = [&](const std::function<Outcome(const CodingRun&)>& fn) {
    return [&, fn] { return have_run ? fn(run) : Outcome{false, "coding experiment failed"}; };
  };
  guarded(7, needs_run(Criterion7));
  guarded(8, Criterion8);
  guarded(9, needs_run(Criterion9));
  guarded(10, needs_run(Criterion10));
  guarded(11, needs_run(Criterion11));
  guarded(12, Criterion12);
  guarded(13, Criterion13);
  std::printf("%d of %d criteria failed\n", failed, ran);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace saabcodec

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  return saabcodec::Run(only);
}
