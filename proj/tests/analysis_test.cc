#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "saabcodec/analysis.h"
#include "saabcodec/error.h"
#include "saabcodec/experiment.h"
#include "test_util.h"

namespace saabcodec {
namespace {

using testing::MakePan;

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kIo;
}

TEST(Psnr, Examples) {
  const LumaPlane ref(16, 16, 100);
  LumaPlane off = ref;
  for (uint8_t& v : off.samples) v = 101;
  EXPECT_NEAR(Psnr(ref, off), 48.1308, 1e-4);  // MSE 1
  for (uint8_t& v : off.samples) v = 98;
  EXPECT_NEAR(Psnr(ref, off), 42.1102, 1e-4);  // MSE 4
  EXPECT_TRUE(IsLossless(Psnr(ref, ref)));
  EXPECT_EQ(KindOf([&] { Psnr(ref, LumaPlane(8, 16)); }), ErrorKind::kMismatch);
}

std::vector<RdPoint> Curve() {
  return {{12000, 30.1}, {21000, 33.4}, {37000, 36.2}, {64000, 39.5}};
}

TEST(BdRate, IdenticalCurves) {
  const auto a = Curve();
  const BdResult r = BdRate(a, a);
  EXPECT_NEAR(r.bdbr_percent, 0.0, 1e-9);
  EXPECT_NEAR(r.bdpsnr_db, 0.0, 1e-9);
}

TEST(BdRate, ConstantRateScale) {
  const auto a = Curve();
  auto t = a;
  for (RdPoint& p : t) p.bitrate *= 1.10;
  EXPECT_NEAR(BdRate(a, t).bdbr_percent, 10.0, 1e-6);
  EXPECT_LT(BdRate(a, t).bdpsnr_db, 0.0);
  // The reverse direction is 1/1.1 - 1, not -10%.
  EXPECT_NEAR(BdRate(t, a).bdbr_percent, (1 / 1.1 - 1) * 100, 1e-6);
}

TEST(BdRate, ConstantPsnrOffset) {
  const auto a = {RdPoint{1000, 30}, RdPoint{2000, 33}, RdPoint{4000, 36}, RdPoint{8000, 39}};
  std::vector<RdPoint> anchor(a), t(a);
  for (RdPoint& p : t) p.psnr += 1.0;
  EXPECT_NEAR(BdRate(anchor, t).bdpsnr_db, 1.0, 1e-6);
  // PSNR linear in log2(rate) at 3 dB per doubling: 1 dB = 2^(-1/3).
  EXPECT_NEAR(BdRate(anchor, t).bdbr_percent, (std::pow(2.0, -1.0 / 3.0) - 1) * 100, 1e-6);
}

TEST(BdRate, PointOrderDoesNotMatter) {
  const auto a = Curve();
  auto t = a;
  for (RdPoint& p : t) p.bitrate *= 0.95;
  auto shuffled = t;
  std::swap(shuffled[0], shuffled[3]);
  std::swap(shuffled[1], shuffled[2]);
  EXPECT_NEAR(BdRate(a, shuffled).bdbr_percent, BdRate(a, t).bdbr_percent, 1e-9);
}

TEST(BdRate, SmallOffsetsAreNearlyAntisymmetric) {
  SeededRng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RdPoint> a, t;
    double rate = 5000 + rng.Uniform() * 5000, psnr = 28 + rng.Uniform() * 4;
    for (int i = 0; i < 4; ++i) {
      a.push_back({rate, psnr});
      t.push_back({rate * (1 + (rng.Uniform() - 0.5) * 0.02), psnr + (rng.Uniform() - 0.5) * 0.04});
      rate *= 1.6 + rng.Uniform() * 0.4;
      psnr += 2.5 + rng.Uniform();
    }
    const double fwd = BdRate(a, t).bdbr_percent;
    const double back = BdRate(t, a).bdbr_percent;
    EXPECT_NEAR(fwd, -back, 0.05 + 0.02 * std::abs(fwd));
  }
}

TEST(BdRate, Errors) {
  const auto a = Curve();
  std::vector<RdPoint> far = a;
  for (RdPoint& p : far) p.psnr += 20;
  EXPECT_THROW(BdRate(a, far), NoOverlapError);
  std::vector<RdPoint> three(a.begin(), a.begin() + 3);
  EXPECT_EQ(KindOf([&] { BdRate(a, three); }), ErrorKind::kInsufficientData);
  std::vector<RdPoint> lossless = a;
  lossless[3].psnr = std::numeric_limits<double>::infinity();
  EXPECT_EQ(KindOf([&] { BdRate(a, lossless); }), ErrorKind::kInvalidInput);
  std::vector<RdPoint> zero = a;
  zero[0].bitrate = 0;
  EXPECT_EQ(KindOf([&] { BdRate(zero, a); }), ErrorKind::kInvalidInput);
}

TEST(SaabUsage, Percentages) {
  const std::vector<UsageCount> c = {{22, 37, 100}, {27, 0, 50}, {32, 50, 50}, {37, 10, 40}};
  const SaabUsage u = ComputeSaabUsage(c);
  EXPECT_EQ(u.qps, (std::vector<int>{22, 27, 32, 37}));
  EXPECT_DOUBLE_EQ(u.percent[0], 37.0);
  EXPECT_DOUBLE_EQ(u.percent[1], 0.0);
  EXPECT_DOUBLE_EQ(u.percent[2], 100.0);
  EXPECT_DOUBLE_EQ(u.average, (37.0 + 0 + 100 + 25) / 4);
  EXPECT_THROW(ComputeSaabUsage(std::vector<UsageCount>{}), Error);
  EXPECT_THROW(ComputeSaabUsage(std::vector<UsageCount>{{22, 0, 0}}), Error);
}

TEST(TimingRatio, MeanOfRatios) {
  const std::vector<QpTiming> anchor = {{22, 1.0, 0.2}, {27, 2.0, 0.4}};
  const std::vector<QpTiming> test = {{27, 4.0, 0.4}, {22, 3.0, 0.2}};
  const TimingRatios r = TimingRatio(test, anchor);
  EXPECT_DOUBLE_EQ(r.encr_percent, 250.0);
  EXPECT_DOUBLE_EQ(r.decr_percent, 100.0);
  const std::vector<QpTiming> other = {{22, 1.0, 0.2}, {32, 2.0, 0.4}};
  EXPECT_EQ(KindOf([&] { TimingRatio(other, anchor); }), ErrorKind::kMismatch);
}

TEST(AnalyzeTransforms, KltIsTheDecorrelationFloor) {
  const auto train = testing::SmoothResiduals(1, 3000);
  const auto eval = testing::SmoothResiduals(2, 1500);
  const TransformAnalysis a = AnalyzeTransforms(train, eval);
  ASSERT_EQ(a.transforms.size(), 4u);
  EXPECT_EQ(a.transforms[0].name, "dct");
  EXPECT_EQ(a.transforms[1].name, "klt");
  EXPECT_EQ(a.transforms[2].name, "saab1");
  EXPECT_EQ(a.transforms[3].name, "saab2");
  EXPECT_EQ(a.train_count, 3000u);
  EXPECT_EQ(a.eval_count, 1500u);
  for (const TransformResult& t : a.transforms) {
    EXPECT_NEAR(t.total_variance, a.transforms[0].total_variance,
                1e-9 * a.transforms[0].total_variance) << t.name;
    if (t.name != "klt") {
      EXPECT_LT(a.transforms[1].decorrelation_cost, t.decorrelation_cost);
    }
  }
  const std::string csv = CompactionCsv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "transform,coefficients,energy_ratio");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 64);
  const std::string dcsv = DecorrelationCsv(a);
  EXPECT_EQ(std::count(dcsv.begin(), dcsv.end(), '\n'), 5);
}

TEST(AnalyzeRdModel, RowsForPopulatedCells) {
  const KernelBank bank = testing::SmallBank();
  const std::vector<Clip> clips = {MakePan("camera", 0, 0, 1, 1, 3)};
  const ResidualCorpus corpus = ExtractResiduals(clips, kDefaultQps);
  const std::vector<int> modes = {kPlanarMode, kDcMode};
  const std::vector<int> qps = {22, 37};
  const auto rows = AnalyzeRdModel(corpus, bank, modes, qps);
  ASSERT_EQ(rows.size(), 4u);
  for (const RdModelRow& r : rows) {
    EXPECT_GE(r.samples, 2u);
    EXPECT_NEAR(r.comparison.delta_kappa, r.comparison.kappa_saab - r.comparison.kappa_dct, 1e-9);
    EXPECT_NEAR(r.comparison.delta_sigma2, 0.0, 1e-9 * r.comparison.sigma2_dct);
  }
  const std::string k = KappaCsv(rows);
  EXPECT_EQ(k.substr(0, k.find('\n')), "mode,qp,samples,kappa_saab,kappa_dct,delta_kappa");
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678}) EXPECT_EQ(std::stod(FormatDouble(v)), v);
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Manifest, ParseAndResolve) {
  const std::string text = R"({
    "clips": [{"name": "a", "path": "clips/a.yuv", "width": 64, "height": 48,
               "first_frame": 2, "frames": 5},
              {"name": "b", "path": "/abs/b.yuv", "width": 32, "height": 32}],
    "bank": "bank.bin", "seed": 7, "output_dir": "out",
    "qps": [22, 27, 32, 37], "strategies": ["s1", "s3"], "timing_runs": 0,
    "precision_digits": [1, 3], "bias_mode": "raw"
  })";
  const ExperimentManifest m = ParseManifest(text, "/base");
  ASSERT_EQ(m.clips.size(), 2u);
  EXPECT_EQ(m.clips[0].path, "/base/clips/a.yuv");
  EXPECT_EQ(m.clips[1].path, "/abs/b.yuv");
  EXPECT_EQ(m.clips[0].frames.first, 2);
  EXPECT_EQ(m.clips[0].frames.count, 5);
  EXPECT_FALSE(m.clips[1].frames.count.has_value());
  EXPECT_EQ(m.bank_path, "/base/bank.bin");
  EXPECT_EQ(m.seed, 7u);
  EXPECT_EQ(m.options.strategies, (std::vector<Strategy>{Strategy::kS1, Strategy::kS3}));
  EXPECT_EQ(m.options.precision_digits, (std::vector<int>{1, 3}));
  EXPECT_EQ(m.options.bias_mode, BiasMode::kRaw);
  EXPECT_EQ(ParseManifest(ManifestToJson(m), "/elsewhere").clips[0].path, m.clips[0].path);

  EXPECT_THROW(ParseManifest(R"({"clips": [], "qps": [22, 27, 32]})"), Error);
  EXPECT_THROW(ParseManifest(R"({"clips": [{"name": "a"}]})"), Error);
  EXPECT_THROW(ParseManifest(R"({"clips": [], "strategies": ["s9"]})"), Error);
  EXPECT_THROW(ParseManifest("not json"), Error);
}

TEST(RunExperiment, AnchorOnly) {
  const std::vector<Clip> clips = {MakePan("coffee", 0, 0, 1, 0, 2, 32)};
  ExperimentOptions opt;
  opt.strategies = {};
  opt.timing_runs = 0;
  const ExperimentReport r = RunExperiment(clips, nullptr, opt);
  EXPECT_EQ(r.rd.size(), 4u);
  EXPECT_TRUE(r.bd.empty());
  EXPECT_TRUE(r.timing.empty());
  for (const RdRow& row : r.rd) {
    EXPECT_TRUE(row.decode_matches);
    EXPECT_EQ(row.n_saab, 0);
    EXPECT_EQ(row.frames, 2);
    EXPECT_DOUBLE_EQ(row.bits_per_frame, row.total_bits / 2.0);
  }
  opt.strategies = {Strategy::kS1};
  EXPECT_THROW(RunExperiment(clips, nullptr, opt), Error);
}

TEST(RunExperiment, DeterministicReport) {
  const KernelBank bank = testing::SmallBank();
  const std::vector<Clip> clips = {MakePan("chelsea", 100, 50, 1, 1, 2, 64)};
  ExperimentOptions opt;
  opt.timing_runs = 1;
  opt.precision_digits = {2, 20};
  const ExperimentReport a = RunExperiment(clips, &bank, opt);
  const ExperimentReport b = RunExperiment(clips, &bank, opt);
  EXPECT_EQ(RdPointsCsv(a), RdPointsCsv(b));
  EXPECT_EQ(BdCsv(a), BdCsv(b));
  EXPECT_EQ(UsageCsv(a), UsageCsv(b));
  EXPECT_EQ(RdPointsCsv(a).find("seconds"), std::string::npos);

  // anchor + 3 strategies + 2 precision settings, 4 QPs each
  EXPECT_EQ(a.rd.size(), 6u * 4);
  EXPECT_EQ(a.bd.size(), 5u);
  EXPECT_EQ(a.timing.size(), 3u);
  for (const RdRow& row : a.rd) {
    EXPECT_TRUE(row.decode_matches);
    EXPECT_EQ(row.decoded_n_saab, row.n_saab);
    EXPECT_EQ(row.decoded_n_flags, row.n_flags);
  }
  const BdRow* s3 = a.FindBd("chelsea", Strategy::kS3, -1);
  const BdRow* s3_20 = a.FindBd("chelsea", Strategy::kS3, 20);
  ASSERT_TRUE(s3 && s3_20);
  EXPECT_EQ(s3->status, "ok");
  EXPECT_EQ(s3->bdbr_percent, s3_20->bdbr_percent);

  testing::TempDir dir("analysis_report");
  WriteReport(a, dir.path().string());
  for (const char* f : {"rd_points.csv", "bd.csv", "usage.csv", "timing.csv", "report.json"})
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  std::ifstream in(dir.File("rd_points.csv"));
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), RdPointsCsv(a));
}

}  // namespace
}  // namespace saabcodec
