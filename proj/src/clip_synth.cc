#include "saabcodec/clip_synth.h"

#include <algorithm>
#include <cmath>

#include "saabcodec/error.h"
#include "saabcodec/random.h"

namespace saabcodec {
namespace {

// Reflects p into [0, range].
double Reflect(double p, double range) {
  if (range <= 0.0) return 0.0;
  const double period = 2.0 * range;
  double m = std::fmod(p, period);
  if (m < 0) m += period;
  return m <= range ? m : period - m;
}

}  // namespace

std::vector<LumaPlane> SynthesizePan(const LumaPlane& source, const PanSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0 || spec.frames <= 0 ||
      spec.width >= source.width || spec.height >= source.height) {
    throw Error(ErrorKind::kInvalidInput, "pan window must fit inside the source picture");
  }
  const double range_x = source.width - spec.width - 1;
  const double range_y = source.height - spec.height - 1;
  SeededRng rng(spec.seed);
  std::vector<LumaPlane> frames;
  frames.reserve(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    const double ox = Reflect(spec.start_x + t * spec.dx, range_x);
    const double oy = Reflect(spec.start_y + t * spec.dy, range_y);
    const int ix = static_cast<int>(std::floor(ox));
    const int iy = static_cast<int>(std::floor(oy));
    const double fx = ox - ix;
    const double fy = oy - iy;
    LumaPlane frame(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        const double top = (1 - fx) * source.at(ix + x, iy + y) + fx * source.at(ix + x + 1, iy + y);
        const double bottom = (1 - fx) * source.at(ix + x, iy + y + 1) +
                              fx * source.at(ix + x + 1, iy + y + 1);
        double v = (1 - fy) * top + fy * bottom;
        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.Gaussian();
        frame.at(x, y) = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace saabcodec
