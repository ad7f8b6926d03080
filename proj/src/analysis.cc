#include "saabcodec/analysis.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "saabcodec/dct.h"
#include "saabcodec/saab.h"

namespace saabcodec {
namespace {

using Cubic = std::array<double, 4>;  // c0 + c1 t + c2 t^2 + c3 t^3

// Least-squares cubic in t = (x - shift) / scale.
struct CubicFit {
  Cubic c{};
  double shift = 0.0;
  double scale = 1.0;

  // Mean value of the fit over [lo, hi].
  double MeanOver(double lo, double hi) const {
    const double a = (lo - shift) / scale;
    const double b = (hi - shift) / scale;
    auto antiderivative = [this](double t) {
      return t * (c[0] + t * (c[1] / 2 + t * (c[2] / 3 + t * c[3] / 4)));
    };
    return (antiderivative(b) - antiderivative(a)) / (b - a);
  }
};

CubicFit FitCubic(const std::vector<double>& x, const std::vector<double>& y) {
  CubicFit fit;
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  fit.shift = 0.5 * (*mn + *mx);
  fit.scale = std::max(0.5 * (*mx - *mn), 1e-12);

  // Normal equations, solved by Gaussian elimination with partial pivoting.
  double m[4][5] = {};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i] - fit.shift) / fit.scale;
    const double p[4] = {1.0, t, t * t, t * t * t};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m[r][c] += p[r] * p[c];
      m[r][4] += p[r] * y[i];
    }
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-300)
      throw Error(ErrorKind::kDegenerate, "cubic fit needs four distinct abscissae");
    std::swap(m[col], m[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double acc = m[r][4];
    for (int c = r + 1; c < 4; ++c) acc -= m[r][c] * fit.c[c];
    fit.c[r] = acc / m[r][r];
  }
  return fit;
}

void CheckCurve(std::span<const RdPoint> points, const char* which) {
  if (points.size() < 4) {
    throw Error(ErrorKind::kInsufficientData,
                std::string(which) + " curve needs at least 4 RD points");
  }
  for (const RdPoint& p : points) {
    if (!(p.bitrate > 0.0) || !std::isfinite(p.bitrate) || !std::isfinite(p.psnr)) {
      throw Error(ErrorKind::kInvalidInput,
                  std::string(which) + " curve has a non-positive rate or non-finite PSNR");
    }
  }
}

struct Curve {
  std::vector<double> log_rate;
  std::vector<double> psnr;
};

Curve ToCurve(std::span<const RdPoint> points) {
  Curve c;
  for (const RdPoint& p : points) {
    c.log_rate.push_back(std::log10(p.bitrate));
    c.psnr.push_back(p.psnr);
  }
  return c;
}

std::pair<double, double> Overlap(const std::vector<double>& a, const std::vector<double>& b) {
  const double lo = std::max(*std::min_element(a.begin(), a.end()),
                             *std::min_element(b.begin(), b.end()));
  const double hi = std::min(*std::max_element(a.begin(), a.end()),
                             *std::max_element(b.begin(), b.end()));
  return {lo, hi};
}

std::vector<CoeffBlock> Transform(std::span<const SampleBlock> blocks, auto&& forward) {
  std::vector<CoeffBlock> out;
  out.reserve(blocks.size());
  for (const SampleBlock& x : blocks) out.push_back(forward(x));
  return out;
}

TransformResult Evaluate(std::string name, std::span<const CoeffBlock> coeffs,
                         double input_variance) {
  TransformResult r;
  r.name = std::move(name);
  r.curve = EnergyCompaction(coeffs, input_variance);
  r.decorrelation_cost = DecorrelationCost(coeffs);
  const CoeffStats stats = ComputeCoeffStats(coeffs);
  for (double v : stats.variance) r.total_variance += v;
  return r;
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double Psnr(const LumaPlane& reference, const LumaPlane& test) {
  if (reference.width != test.width || reference.height != test.height) {
    throw Error(ErrorKind::kMismatch, "PSNR planes differ in size");
  }
  int64_t sse = 0;
  for (std::size_t i = 0; i < reference.samples.size(); ++i) {
    const int64_t d = int64_t{reference.samples[i]} - test.samples[i];
    sse += d * d;
  }
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(sse) / static_cast<double>(reference.samples.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

BdResult BdRate(std::span<const RdPoint> anchor, std::span<const RdPoint> test) {
  CheckCurve(anchor, "anchor");
  CheckCurve(test, "test");
  const Curve a = ToCurve(anchor);
  const Curve t = ToCurve(test);
  BdResult out;

  const auto [p_lo, p_hi] = Overlap(a.psnr, t.psnr);
  if (!(p_lo < p_hi)) throw NoOverlapError("RD curves share no PSNR interval");
  const double rate_diff = FitCubic(t.psnr, t.log_rate).MeanOver(p_lo, p_hi) -
                           FitCubic(a.psnr, a.log_rate).MeanOver(p_lo, p_hi);
  out.bdbr_percent = (std::pow(10.0, rate_diff) - 1.0) * 100.0;

  const auto [r_lo, r_hi] = Overlap(a.log_rate, t.log_rate);
  if (!(r_lo < r_hi)) throw NoOverlapError("RD curves share no rate interval");
  out.bdpsnr_db = FitCubic(t.log_rate, t.psnr).MeanOver(r_lo, r_hi) -
                  FitCubic(a.log_rate, a.psnr).MeanOver(r_lo, r_hi);
  return out;
}

SaabUsage ComputeSaabUsage(std::span<const UsageCount> counts) {
  if (counts.empty()) throw Error(ErrorKind::kInvalidInput, "no usage statistics");
  SaabUsage u;
  for (const UsageCount& c : counts) {
    if (c.n_total <= 0 || c.n_saab < 0 || c.n_saab > c.n_total) {
      throw Error(ErrorKind::kInvalidInput,
                  "invalid block counts at QP " + std::to_string(c.qp));
    }
    u.qps.push_back(c.qp);
    u.percent.push_back(100.0 * static_cast<double>(c.n_saab) / static_cast<double>(c.n_total));
  }
  for (double p : u.percent) u.average += p;
  u.average /= static_cast<double>(u.percent.size());
  return u;
}

TimingRatios TimingRatio(std::span<const QpTiming> test, std::span<const QpTiming> anchor) {
  if (test.empty()) throw Error(ErrorKind::kInvalidInput, "no timings");
  std::map<int, QpTiming> by_qp;
  for (const QpTiming& t : anchor) {
    if (!by_qp.emplace(t.qp, t).second)
      throw Error(ErrorKind::kInvalidInput, "duplicate anchor QP " + std::to_string(t.qp));
  }
  if (by_qp.size() != test.size()) throw Error(ErrorKind::kMismatch, "QP sets differ");
  TimingRatios r;
  std::map<int, bool> seen;
  for (const QpTiming& t : test) {
    auto it = by_qp.find(t.qp);
    if (it == by_qp.end() || !seen.emplace(t.qp, true).second) {
      throw Error(ErrorKind::kMismatch, "QP sets differ at QP " + std::to_string(t.qp));
    }
    if (!(it->second.encode_seconds > 0.0) || !(it->second.decode_seconds > 0.0)) {
      throw Error(ErrorKind::kInvalidInput, "anchor timings must be positive");
    }
    r.encr_percent += t.encode_seconds / it->second.encode_seconds;
    r.decr_percent += t.decode_seconds / it->second.decode_seconds;
  }
  const double n = static_cast<double>(test.size());
  r.encr_percent *= 100.0 / n;
  r.decr_percent *= 100.0 / n;
  return r;
}

TransformAnalysis AnalyzeTransforms(std::span<const ResidualBlock> train,
                                    std::span<const ResidualBlock> eval) {
  std::vector<SampleBlock> eval_samples;
  eval_samples.reserve(eval.size());
  for (const ResidualBlock& r : eval) eval_samples.push_back(ToSamples(r));

  TransformAnalysis out;
  out.train_count = train.size();
  out.eval_count = eval.size();
  out.input_variance = InputVariance(std::span<const SampleBlock>(eval_samples));

  const SaabKernel klt = LearnKlt(std::span<const SampleBlock>(eval_samples));
  const SaabKernel saab1 = LearnSaab1(train);
  const TwoStageSaabKernel saab2 = LearnSaab2(train);

  const auto dct = Transform(eval_samples, [](const SampleBlock& x) { return DctForward(x); });
  const auto klt_y = Transform(eval_samples, [&](const SampleBlock& x) {
    return KernelForward(klt, x, BiasMode::kCentered);
  });
  const auto s1 = Transform(eval_samples, [&](const SampleBlock& x) {
    return KernelForward(saab1, x, BiasMode::kCentered);
  });
  const auto s2 = Transform(eval_samples, [&](const SampleBlock& x) {
    return Saab2Forward(saab2, x, BiasMode::kCentered);
  });
  out.transforms.push_back(Evaluate("dct", dct, out.input_variance));
  out.transforms.push_back(Evaluate("klt", klt_y, out.input_variance));
  out.transforms.push_back(Evaluate("saab1", s1, out.input_variance));
  out.transforms.push_back(Evaluate("saab2", s2, out.input_variance));
  return out;
}

std::vector<RdModelRow> AnalyzeRdModel(const ResidualCorpus& corpus, const KernelBank& bank,
                                       std::span<const int> modes, std::span<const int> qps) {
  std::vector<RdModelRow> rows;
  for (int mode : modes) {
    if (mode < 0 || mode >= kNumIntraModes)
      throw Error(ErrorKind::kInvalidInput, "intra mode out of range: " + std::to_string(mode));
    const SaabKernel& kernel = bank.ForMode(mode);
    for (int qp : qps) {
      std::vector<CoeffBlock> saab;
      std::vector<CoeffBlock> dct;
      for (const ResidualRecord& r : corpus.records) {
        if (r.mode != mode || r.qp != qp) continue;
        saab.push_back(KernelForward(kernel, r.residual, BiasMode::kCentered));
        dct.push_back(DctForward(r.residual));
      }
      if (saab.size() < 2) continue;
      RdModelRow row;
      row.mode = mode;
      row.qp = qp;
      row.samples = saab.size();
      row.comparison = CompareTransforms(ComputeCoeffStats(saab), ComputeCoeffStats(dct),
                                         RdParamsForQp(qp));
      rows.push_back(row);
    }
  }
  return rows;
}

std::string CompactionCsv(const TransformAnalysis& analysis) {
  std::ostringstream os;
  os << "transform,coefficients,energy_ratio\n";
  for (const TransformResult& t : analysis.transforms)
    for (int i = 0; i < kBlockArea; ++i)
      os << t.name << ',' << i + 1 << ',' << FormatDouble(t.curve.values[i]) << '\n';
  return os.str();
}

std::string DecorrelationCsv(const TransformAnalysis& analysis) {
  std::ostringstream os;
  os << "transform,samples,decorrelation_cost,total_variance\n";
  for (const TransformResult& t : analysis.transforms) {
    os << t.name << ',' << analysis.eval_count << ',' << FormatDouble(t.decorrelation_cost)
       << ',' << FormatDouble(t.total_variance) << '\n';
  }
  return os.str();
}

std::string KappaCsv(std::span<const RdModelRow> rows) {
  std::ostringstream os;
  os << "mode,qp,samples,kappa_saab,kappa_dct,delta_kappa\n";
  for (const RdModelRow& r : rows) {
    os << r.mode << ',' << r.qp << ',' << r.samples << ','
       << FormatDouble(r.comparison.kappa_saab) << ',' << FormatDouble(r.comparison.kappa_dct)
       << ',' << FormatDouble(r.comparison.delta_kappa) << '\n';
  }
  return os.str();
}

std::string SigmaCsv(std::span<const RdModelRow> rows) {
  std::ostringstream os;
  os << "mode,qp,samples,sigma2_saab,sigma2_dct,delta_sigma2\n";
  for (const RdModelRow& r : rows) {
    os << r.mode << ',' << r.qp << ',' << r.samples << ','
       << FormatDouble(r.comparison.sigma2_saab) << ',' << FormatDouble(r.comparison.sigma2_dct)
       << ',' << FormatDouble(r.comparison.delta_sigma2) << '\n';
  }
  return os.str();
}

}  // namespace saabcodec
