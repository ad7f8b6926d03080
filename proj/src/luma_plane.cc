#include "saabcodec/luma_plane.h"

#include <fstream>
#include <sstream>

#include "saabcodec/byte_io.h"
#include "saabcodec/error.h"

namespace saabcodec {

PixelBlock LumaPlane::GetBlock(int x0, int y0) const {
  PixelBlock block{};
  for (int r = 0; r < kBlockSide; ++r)
    for (int c = 0; c < kBlockSide; ++c)
      block[r * kBlockSide + c] = at(x0 + c, y0 + r);
  return block;
}

void LumaPlane::PutBlock(int x0, int y0, const PixelBlock& block) {
  for (int r = 0; r < kBlockSide; ++r)
    for (int c = 0; c < kBlockSide; ++c)
      at(x0 + c, y0 + r) = block[r * kBlockSide + c];
}

std::vector<LumaPlane> ReadYuv(const std::string& path, int width, int height,
                               FrameRange range) {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorKind::kInvalidInput,
                "4:2:0 dimensions must be positive and even, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  const std::vector<uint8_t> bytes = ReadFileBytes(path);
  const std::size_t luma = static_cast<std::size_t>(width) * height;
  const std::size_t frame_bytes = luma + 2 * (luma / 4);
  if (bytes.size() % frame_bytes != 0) {
    throw Error(ErrorKind::kFormat,
                path + ": size " + std::to_string(bytes.size()) +
                    " is not a whole number of " + std::to_string(width) + "x" +
                    std::to_string(height) + " 4:2:0 frames");
  }
  const int total = static_cast<int>(bytes.size() / frame_bytes);
  const int count = range.count.value_or(total - range.first);
  if (range.first < 0 || count < 0 || range.first + count > total) {
    throw Error(ErrorKind::kFormat,
                path + ": frames [" + std::to_string(range.first) + ", " +
                    std::to_string(range.first + count) + ") exceed the " +
                    std::to_string(total) + " frames in the file");
  }
  const int out_w = width - width % kBlockSide;
  const int out_h = height - height % kBlockSide;
  if (out_w == 0 || out_h == 0)
    throw Error(ErrorKind::kInvalidInput, "frame smaller than one 8x8 block");

  std::vector<LumaPlane> planes;
  planes.reserve(count);
  for (int f = range.first; f < range.first + count; ++f) {
    const uint8_t* src = bytes.data() + static_cast<std::size_t>(f) * frame_bytes;
    LumaPlane plane(out_w, out_h);
    for (int y = 0; y < out_h; ++y)
      for (int x = 0; x < out_w; ++x) plane.at(x, y) = src[y * width + x];
    planes.push_back(std::move(plane));
  }
  return planes;
}

void WriteYuv(const std::string& path, const std::vector<LumaPlane>& planes) {
  ByteWriter w;
  for (const LumaPlane& p : planes) {
    w.PutBytes(p.samples);
    const std::size_t chroma = static_cast<std::size_t>(p.width / 2) * (p.height / 2);
    for (std::size_t i = 0; i < 2 * chroma; ++i) w.PutU8(128);
  }
  WriteFileBytes(path, w.bytes());
}

LumaPlane ReadPgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] != '#') return tok;
      std::string skip;
      std::getline(in, skip);
    }
    return std::string();
  };
  if (next_token() != "P5") throw Error(ErrorKind::kFormat, path + ": not a binary PGM");
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw Error(ErrorKind::kFormat, path + ": malformed PGM header");
  }
  if (width <= 0 || height <= 0 || maxval != 255)
    throw Error(ErrorKind::kFormat, path + ": unsupported PGM geometry");
  in.get();
  LumaPlane plane(width, height);
  in.read(reinterpret_cast<char*>(plane.samples.data()),
          static_cast<std::streamsize>(plane.samples.size()));
  if (!in) throw Error(ErrorKind::kFormat, path + ": truncated PGM");
  return plane;
}

}  // namespace saabcodec
