#ifndef SAABCODEC_BIT_IO_H_
#define SAABCODEC_BIT_IO_H_

#include <cstdint>
#include <span>
#include <vector>

namespace saabcodec {

// MSB-first bit packing. The final byte is zero-padded.
class BitWriter {
 public:
  void PutBit(bool bit);
  // Low `count` bits of `value`, most significant first. count <= 32.
  void PutBits(uint32_t value, int count);
  // Order-0 Exp-Golomb: n zeros, then the (n + 1)-bit binary of value + 1.
  void PutExpGolomb(uint32_t value);

  uint64_t bit_count() const { return bits_; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  uint64_t bits_ = 0;
};

// Reads at most `bit_count` bits. Every read past the end throws kFormat
// naming the bit offset.
class BitReader {
 public:
  BitReader(std::span<const uint8_t> bytes, uint64_t bit_count);

  bool GetBit();
  uint32_t GetBits(int count);
  uint32_t GetExpGolomb();

  uint64_t position() const { return pos_; }
  uint64_t remaining() const { return limit_ - pos_; }

 private:
  std::span<const uint8_t> bytes_;
  uint64_t limit_;
  uint64_t pos_ = 0;
};

int ExpGolombLength(uint32_t value);

}  // namespace saabcodec

#endif  // SAABCODEC_BIT_IO_H_
