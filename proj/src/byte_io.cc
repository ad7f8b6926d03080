#include "saabcodec/byte_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "saabcodec/error.h"

namespace saabcodec {

void ByteWriter::PutU16(uint16_t v) {
  for (int i = 0; i < 2; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::PutU32(uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::PutU64(uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::PutF64(double v) { PutU64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::PutBytes(std::span<const uint8_t> data) {
  bytes_.insert(bytes_.end(), data.begin(), data.end());
}

void ByteWriter::PutTag(std::string_view tag) {
  for (char c : tag) bytes_.push_back(static_cast<uint8_t>(c));
}

void ByteWriter::PutString(std::string_view s) {
  PutU32(static_cast<uint32_t>(s.size()));
  PutTag(s);
}

void ByteReader::Need(std::size_t n) const {
  if (data_.size() - pos_ < n) {
    throw Error(ErrorKind::kFormat,
                "unexpected end of data at byte " + std::to_string(pos_));
  }
}

uint8_t ByteReader::GetU8() {
  Need(1);
  return data_[pos_++];
}

uint16_t ByteReader::GetU16() {
  Need(2);
  uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<uint16_t>(data_[pos_++]) << (8 * i);
  return v;
}

uint32_t ByteReader::GetU32() {
  Need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
  return v;
}

uint64_t ByteReader::GetU64() {
  Need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
  return v;
}

double ByteReader::GetF64() { return std::bit_cast<double>(GetU64()); }

std::span<const uint8_t> ByteReader::GetBytes(std::size_t n) {
  Need(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::ExpectTag(std::string_view tag) {
  const std::size_t at = pos_;
  auto got = GetBytes(tag.size());
  if (std::memcmp(got.data(), tag.data(), tag.size()) != 0) {
    throw Error(ErrorKind::kFormat, "bad magic at byte " + std::to_string(at) +
                                        ", expected " + std::string(tag));
  }
}

std::string ByteReader::GetString() {
  const uint32_t n = GetU32();
  auto bytes = GetBytes(n);
  return std::string(bytes.begin(), bytes.end());
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path);
}

uint64_t Fnv1a64(std::span<const uint8_t> bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace saabcodec
