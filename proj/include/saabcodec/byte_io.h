#ifndef SAABCODEC_BYTE_IO_H_
#define SAABCODEC_BYTE_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace saabcodec {

// Little-endian fixed-width serialization for the container formats.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { bytes_.push_back(v); }
  void PutU16(uint16_t v);
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutI16(int16_t v) { PutU16(static_cast<uint16_t>(v)); }
  void PutI32(int32_t v) { PutU32(static_cast<uint32_t>(v)); }
  void PutF64(double v);
  void PutBytes(std::span<const uint8_t> data);
  void PutTag(std::string_view tag);
  // u32 length followed by the bytes.
  void PutString(std::string_view s);

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

// Reads what ByteWriter wrote. Every accessor throws kFormat on overrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t GetU8();
  uint16_t GetU16();
  uint32_t GetU32();
  uint64_t GetU64();
  int16_t GetI16() { return static_cast<int16_t>(GetU16()); }
  int32_t GetI32() { return static_cast<int32_t>(GetU32()); }
  double GetF64();
  std::span<const uint8_t> GetBytes(std::size_t n);
  // Throws kFormat unless the next bytes equal `tag`.
  void ExpectTag(std::string_view tag);
  std::string GetString();

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void Need(std::size_t n) const;

  std::span<const uint8_t> data_;
  std::size_t pos_ = 0;
};

std::vector<uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes);

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::span<const uint8_t> bytes);

}  // namespace saabcodec

#endif  // SAABCODEC_BYTE_IO_H_
