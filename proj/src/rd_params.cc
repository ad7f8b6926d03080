#include "saabcodec/rd_params.h"

#include <cmath>
#include <string>

#include "saabcodec/error.h"

namespace saabcodec {

RdParams RdParamsForQp(int qp) {
  if (qp < 0 || qp > 51)
    throw Error(ErrorKind::kInvalidInput, "QP out of range: " + std::to_string(qp));
  RdParams p;
  p.qp = qp;
  p.q_step = std::pow(2.0, (qp - 4) / 6.0);
  p.lambda = 0.57 * std::pow(2.0, (qp - 12) / 3.0);
  return p;
}

}  // namespace saabcodec
