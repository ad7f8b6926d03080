#include "saabcodec/symmetric_eigen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "saabcodec/error.h"

namespace saabcodec {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kRelativeTolerance = 1e-12;
constexpr double kSignThreshold = 1e-12;

template <int N>
double OffDiagonalNorm(const SquareMatrix<N>& a) {
  double acc = 0.0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      if (r != c) acc += a(r, c) * a(r, c);
  return std::sqrt(acc);
}

template <int N>
double FrobeniusNorm(const SquareMatrix<N>& a) {
  double acc = 0.0;
  for (double v : a.Data()) acc += v * v;
  return std::sqrt(acc);
}

// A <- J^T A J, V <- V J for the rotation that zeroes A(p, q).
template <int N>
void Rotate(SquareMatrix<N>& a, SquareMatrix<N>& v, int p, int q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  for (int k = 0; k < N; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (int k = 0; k < N; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (int k = 0; k < N; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

template <int N>
void CheckSamples(std::span<const Vec<N>> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::kInsufficientData,
                "covariance needs at least 2 samples, got " +
                    std::to_string(samples.size()));
  }
}

}  // namespace

template <int N>
EigenResult<N> SymmetricEigen(const SquareMatrix<N>& m) {
  for (double x : m.Data()) {
    if (!std::isfinite(x))
      throw Error(ErrorKind::kInvalidInput, "non-finite matrix entry");
  }
  SquareMatrix<N> a;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) a(r, c) = 0.5 * (m(r, c) + m(c, r));

  SquareMatrix<N> v = SquareMatrix<N>::Identity();
  const double threshold = kRelativeTolerance * FrobeniusNorm(a);

  EigenResult<N> result;
  int sweep = 0;
  while (OffDiagonalNorm(a) > threshold) {
    if (sweep == kMaxSweeps) {
      throw Error(ErrorKind::kDegenerate,
                  "Jacobi did not converge in " + std::to_string(kMaxSweeps) +
                      " sweeps");
    }
    for (int p = 0; p < N - 1; ++p)
      for (int q = p + 1; q < N; ++q) Rotate(a, v, p, q);
    ++sweep;
  }
  result.sweeps = sweep;

  std::array<int, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int i, int j) { return a(i, i) > a(j, j); });

  for (int k = 0; k < N; ++k) {
    const int src = order[k];
    result.eigenvalues[k] = a(src, src);
    double sign = 1.0;
    for (int j = 0; j < N; ++j) {
      if (std::abs(v(j, src)) > kSignThreshold) {
        sign = v(j, src) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (int j = 0; j < N; ++j) result.eigenvectors(k, j) = sign * v(j, src);
  }
  return result;
}

template <int N>
SquareMatrix<N> SecondMoment(std::span<const Vec<N>> samples) {
  CheckSamples<N>(samples);
  SquareMatrix<N> c;
  for (const Vec<N>& z : samples)
    for (int r = 0; r < N; ++r)
      for (int k = r; k < N; ++k) c(r, k) += z[r] * z[k];
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (int r = 0; r < N; ++r) {
    for (int k = r; k < N; ++k) {
      c(r, k) *= inv;
      c(k, r) = c(r, k);
    }
  }
  return c;
}

template <int N>
SquareMatrix<N> CenteredCovariance(std::span<const Vec<N>> samples) {
  CheckSamples<N>(samples);
  Vec<N> mean{};
  for (const Vec<N>& z : samples)
    for (int i = 0; i < N; ++i) mean[i] += z[i];
  for (double& m : mean) m /= static_cast<double>(samples.size());
  std::vector<Vec<N>> centered(samples.begin(), samples.end());
  for (Vec<N>& z : centered)
    for (int i = 0; i < N; ++i) z[i] -= mean[i];
  return SecondMoment<N>(centered);
}

template <int N>
SquareMatrix<N> Reconstruct(const EigenResult<N>& eig) {
  SquareMatrix<N> out;
  for (int k = 0; k < N; ++k) {
    const auto vk = eig.eigenvectors.Row(k);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c)
        out(r, c) += eig.eigenvalues[k] * vk[r] * vk[c];
  }
  return out;
}

#define SAABCODEC_INSTANTIATE(N)                                              \
  template EigenResult<N> SymmetricEigen<N>(const SquareMatrix<N>&);          \
  template SquareMatrix<N> SecondMoment<N>(std::span<const Vec<N>>);          \
  template SquareMatrix<N> CenteredCovariance<N>(std::span<const Vec<N>>);    \
  template SquareMatrix<N> Reconstruct<N>(const EigenResult<N>&);

SAABCODEC_INSTANTIATE(4)
SAABCODEC_INSTANTIATE(16)
SAABCODEC_INSTANTIATE(64)

#undef SAABCODEC_INSTANTIATE

}  // namespace saabcodec
