#ifndef SAABCODEC_CLIP_SYNTH_H_
#define SAABCODEC_CLIP_SYNTH_H_

#include <cstdint>
#include <vector>

#include "saabcodec/luma_plane.h"

namespace saabcodec {

// A camera pan across a still picture: frame t samples the window whose
// top-left corner is (start + t * velocity), reflected at the picture
// border, with bilinear interpolation and optional Gaussian sensor noise.
struct PanSpec {
  int width = 128;
  int height = 128;
  int frames = 30;
  double start_x = 0.0;
  double start_y = 0.0;
  double dx = 1.0;  // pixels per frame
  double dy = 0.0;
  double noise_sigma = 0.0;
  uint64_t seed = 1;
};

// Throws kInvalidInput when the window does not fit in the source.
std::vector<LumaPlane> SynthesizePan(const LumaPlane& source, const PanSpec& spec);

}  // namespace saabcodec

#endif  // SAABCODEC_CLIP_SYNTH_H_
