#include "saabcodec/bit_io.h"

#include <bit>
#include <string>

#include "saabcodec/error.h"

namespace saabcodec {
namespace {

constexpr int kMaxExpGolombPrefix = 31;

}  // namespace

void BitWriter::PutBit(bool bit) {
  if (bits_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> (bits_ % 8));
  ++bits_;
}

void BitWriter::PutBits(uint32_t value, int count) {
  for (int i = count - 1; i >= 0; --i) PutBit((value >> i) & 1u);
}

void BitWriter::PutExpGolomb(uint32_t value) {
  const uint64_t code = static_cast<uint64_t>(value) + 1;
  const int width = std::bit_width(code);
  for (int i = 1; i < width; ++i) PutBit(false);
  for (int i = width - 1; i >= 0; --i) PutBit((code >> i) & 1u);
}

int ExpGolombLength(uint32_t value) {
  return 2 * std::bit_width(static_cast<uint64_t>(value) + 1) - 1;
}

BitReader::BitReader(std::span<const uint8_t> bytes, uint64_t bit_count)
    : bytes_(bytes), limit_(bit_count) {
  if (bit_count > static_cast<uint64_t>(bytes.size()) * 8) {
    throw Error(ErrorKind::kFormat, "bit count " + std::to_string(bit_count) +
                                        " exceeds the " + std::to_string(bytes.size()) +
                                        "-byte buffer");
  }
}

bool BitReader::GetBit() {
  if (pos_ >= limit_) {
    throw Error(ErrorKind::kFormat,
                "read past end of payload at bit " + std::to_string(pos_));
  }
  const bool bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
  ++pos_;
  return bit;
}

uint32_t BitReader::GetBits(int count) {
  uint32_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | static_cast<uint32_t>(GetBit());
  return v;
}

uint32_t BitReader::GetExpGolomb() {
  const uint64_t start = pos_;
  int zeros = 0;
  while (!GetBit()) {
    if (++zeros > kMaxExpGolombPrefix) {
      throw Error(ErrorKind::kFormat,
                  "Exp-Golomb prefix too long at bit " + std::to_string(start));
    }
  }
  uint64_t code = 1;
  for (int i = 0; i < zeros; ++i) code = (code << 1) | static_cast<uint64_t>(GetBit());
  if (code - 1 > UINT32_MAX) {
    throw Error(ErrorKind::kFormat,
                "Exp-Golomb value overflows at bit " + std::to_string(start));
  }
  return static_cast<uint32_t>(code - 1);
}

}  // namespace saabcodec
