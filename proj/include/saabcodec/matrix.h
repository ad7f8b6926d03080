#ifndef SAABCODEC_MATRIX_H_
#define SAABCODEC_MATRIX_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace saabcodec {

template <int N>
using Vec = std::array<double, N>;

using Vec64 = Vec<64>;

// Dense N x N matrix of doubles, row-major. Storage lives on the heap so
// 64 x 64 instances are cheap to move and safe to keep in containers.
template <int N>
class SquareMatrix {
 public:
  static constexpr int kSize = N;

  SquareMatrix() : data_(static_cast<std::size_t>(N) * N, 0.0) {}

  static SquareMatrix Identity() {
    SquareMatrix m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return data_[r * N + c]; }
  double operator()(int r, int c) const { return data_[r * N + c]; }

  std::span<double, N> Row(int r) {
    return std::span<double, N>(data_.data() + r * N, N);
  }
  std::span<const double, N> Row(int r) const {
    return std::span<const double, N>(data_.data() + r * N, N);
  }

  std::span<const double> Data() const { return data_; }
  std::span<double> Data() { return data_; }

  SquareMatrix Transposed() const {
    SquareMatrix t;
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::vector<double> data_;
};

using Mat64 = SquareMatrix<64>;

// Sums run left to right in index order; results do not depend on the
// compiler contracting multiply-adds (the build disables contraction).
template <int N>
double Dot(std::span<const double, N> a, std::span<const double, N> b) {
  double acc = 0.0;
  for (int i = 0; i < N; ++i) acc += a[i] * b[i];
  return acc;
}

// m * v
template <int N>
Vec<N> Multiply(const SquareMatrix<N>& m, const Vec<N>& v) {
  Vec<N> out{};
  for (int r = 0; r < N; ++r) out[r] = Dot<N>(m.Row(r), v);
  return out;
}

// m^T * v
template <int N>
Vec<N> MultiplyTransposed(const SquareMatrix<N>& m, const Vec<N>& v) {
  Vec<N> out{};
  for (int c = 0; c < N; ++c) {
    double acc = 0.0;
    for (int r = 0; r < N; ++r) acc += m(r, c) * v[r];
    out[c] = acc;
  }
  return out;
}

template <int N>
SquareMatrix<N> MultiplyABt(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  SquareMatrix<N> out;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) out(r, c) = Dot<N>(a.Row(r), b.Row(c));
  return out;
}

// max |A A^T - I|
template <int N>
double OrthonormalityError(const SquareMatrix<N>& a) {
  double worst = 0.0;
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      const double target = r == c ? 1.0 : 0.0;
      const double err = Dot<N>(a.Row(r), a.Row(c)) - target;
      worst = err > worst ? err : (-err > worst ? -err : worst);
    }
  }
  return worst;
}

template <int N>
double MaxAbs(const SquareMatrix<N>& m) {
  double worst = 0.0;
  for (double v : m.Data()) worst = v > worst ? v : (-v > worst ? -v : worst);
  return worst;
}

}  // namespace saabcodec

#endif  // SAABCODEC_MATRIX_H_
