#ifndef SAABCODEC_DCT_H_
#define SAABCODEC_DCT_H_

#include "saabcodec/block.h"

namespace saabcodec {

// Orthonormal 2-D type-II DCT on 8x8 blocks, computed separably in double
// precision. Coefficient (u, v) is stored at index 8 * u + v, u being the
// vertical frequency.
CoeffBlock DctForward(const SampleBlock& block);
CoeffBlock DctForward(const ResidualBlock& block);
SampleBlock DctInverse(const CoeffBlock& coeffs);

// Entry (u, x) of the 1-D orthonormal DCT-II basis.
double DctBasis(int u, int x);

}  // namespace saabcodec

#endif  // SAABCODEC_DCT_H_
