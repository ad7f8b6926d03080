#ifndef SAABCODEC_RD_PARAMS_H_
#define SAABCODEC_RD_PARAMS_H_

namespace saabcodec {

// Quantizer step and Lagrangian multiplier for one QP, HEVC conventions:
// Q = 2^((QP - 4) / 6), lambda = 0.57 * 2^((QP - 12) / 3). Both are in units
// of the orthonormal-transform coefficient domain, which equals the 8-bit
// pixel domain.
struct RdParams {
  int qp = 0;
  double q_step = 1.0;
  double lambda = 1.0;
};

// Throws kInvalidInput for QP outside [0, 51].
RdParams RdParamsForQp(int qp);

// J = D + lambda * R.
inline double RdCost(double bits, double sse, double lambda) {
  return sse + lambda * bits;
}

}  // namespace saabcodec

#endif  // SAABCODEC_RD_PARAMS_H_
