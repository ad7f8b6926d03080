#include "saabcodec/kernel_bank.h"

#include <string>

#include "json.hpp"
#include "saabcodec/byte_io.h"
#include "saabcodec/error.h"

namespace saabcodec {
namespace {

constexpr char kKernelMagic[] = "SAABKERN";
constexpr char kBankMagic[] = "SAABBANK";
constexpr uint32_t kBankVersion = 1;

void PutKernel(ByteWriter& w, const SaabKernel& kernel) {
  w.PutTag(kKernelMagic);
  w.PutU8(static_cast<uint8_t>(kernel.kind));
  w.PutU8(0);
  w.PutU16(static_cast<uint16_t>(kernel.trained_modes.size()));
  for (int mode : kernel.trained_modes) w.PutU8(static_cast<uint8_t>(mode));
  w.PutI32(kernel.decimal_digits.value_or(-1));
  for (double v : kernel.matrix.Data()) w.PutF64(v);
  for (double v : kernel.bias) w.PutF64(v);
}

SaabKernel GetKernel(ByteReader& r) {
  r.ExpectTag(kKernelMagic);
  SaabKernel kernel;
  const uint8_t kind = r.GetU8();
  if (kind > static_cast<uint8_t>(KernelKind::kSaab2))
    throw Error(ErrorKind::kFormat, "unknown kernel kind " + std::to_string(kind));
  kernel.kind = static_cast<KernelKind>(kind);
  r.GetU8();
  const uint16_t groups = r.GetU16();
  for (uint16_t i = 0; i < groups; ++i) {
    const int mode = r.GetU8();
    if (mode >= kNumIntraModes)
      throw Error(ErrorKind::kFormat, "mode id out of range in kernel record");
    kernel.trained_modes.push_back(mode);
  }
  const int32_t digits = r.GetI32();
  if (digits >= 0) kernel.decimal_digits = digits;
  for (double& v : kernel.matrix.Data()) v = r.GetF64();
  for (double& v : kernel.bias) v = r.GetF64();
  return kernel;
}

}  // namespace

std::vector<uint8_t> SerializeKernel(const SaabKernel& kernel) {
  ByteWriter w;
  PutKernel(w, kernel);
  return w.Take();
}

SaabKernel ParseKernel(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  SaabKernel kernel = GetKernel(r);
  if (!r.done()) throw Error(ErrorKind::kFormat, "trailing bytes after kernel");
  return kernel;
}

std::vector<uint8_t> SerializeBank(const KernelBank& bank) {
  if (bank.kernels.size() != kNumKernels) {
    throw Error(ErrorKind::kInvalidInput,
                "bank must hold " + std::to_string(kNumKernels) + " kernels");
  }
  ByteWriter w;
  w.PutTag(kBankMagic);
  w.PutU32(kBankVersion);
  w.PutU32(kNumKernels);
  for (int k : bank.table.apply_map) w.PutU8(static_cast<uint8_t>(k));
  const BankProvenance& p = bank.provenance;
  w.PutU32(static_cast<uint32_t>(p.clips.size()));
  for (const std::string& clip : p.clips) w.PutString(clip);
  w.PutU32(static_cast<uint32_t>(p.qps.size()));
  for (int qp : p.qps) w.PutI32(qp);
  w.PutU64(p.seed);
  w.PutU32(p.samples_per_kernel);
  w.PutI32(p.decimal_digits.value_or(-1));
  for (const SaabKernel& kernel : bank.kernels) PutKernel(w, kernel);
  return w.Take();
}

KernelBank ParseBank(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag(kBankMagic);
  const uint32_t version = r.GetU32();
  if (version != kBankVersion)
    throw Error(ErrorKind::kFormat, "unsupported bank version " + std::to_string(version));
  if (r.GetU32() != kNumKernels)
    throw Error(ErrorKind::kFormat, "bank kernel count must be 24");
  KernelBank bank;
  for (int& k : bank.table.apply_map) {
    k = r.GetU8();
    if (k >= kNumKernels) throw Error(ErrorKind::kFormat, "apply map out of range");
  }
  BankProvenance& p = bank.provenance;
  const uint32_t clips = r.GetU32();
  for (uint32_t i = 0; i < clips; ++i) p.clips.push_back(r.GetString());
  const uint32_t qps = r.GetU32();
  for (uint32_t i = 0; i < qps; ++i) p.qps.push_back(r.GetI32());
  p.seed = r.GetU64();
  p.samples_per_kernel = r.GetU32();
  const int32_t digits = r.GetI32();
  if (digits >= 0) p.decimal_digits = digits;
  for (int k = 0; k < kNumKernels; ++k) {
    bank.kernels.push_back(GetKernel(r));
    bank.table.train_groups[k] = bank.kernels.back().trained_modes;
  }
  if (!r.done()) throw Error(ErrorKind::kFormat, "trailing bytes after bank");
  try {
    ValidateModeGroupTable(bank.table);
  } catch (const Error& e) {
    throw Error(ErrorKind::kFormat, std::string("bank table: ") + e.what());
  }
  return bank;
}

void WriteBank(const std::string& path, const KernelBank& bank) {
  WriteFileBytes(path, SerializeBank(bank));
}

KernelBank ReadBank(const std::string& path) {
  return ParseBank(ReadFileBytes(path));
}

uint64_t BankDigest(const KernelBank& bank) {
  return Fnv1a64(SerializeBank(bank));
}

std::string BankToJson(const KernelBank& bank) {
  using nlohmann::json;
  json doc;
  doc["format"] = "saab-kernel-bank";
  doc["version"] = kBankVersion;
  doc["apply_map"] = bank.table.apply_map;
  doc["provenance"] = {
      {"clips", bank.provenance.clips},
      {"qps", bank.provenance.qps},
      {"seed", bank.provenance.seed},
      {"samples_per_kernel", bank.provenance.samples_per_kernel},
      {"decimal_digits", bank.provenance.decimal_digits
                             ? json(*bank.provenance.decimal_digits)
                             : json(nullptr)}};
  json kernels = json::array();
  for (const SaabKernel& kernel : bank.kernels) {
    json rows = json::array();
    for (int r = 0; r < 64; ++r) {
      const auto row = kernel.matrix.Row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    kernels.push_back({{"kind", static_cast<int>(kernel.kind)},
                       {"trained_modes", kernel.trained_modes},
                       {"decimal_digits", kernel.decimal_digits
                                              ? json(*kernel.decimal_digits)
                                              : json(nullptr)},
                       {"bias", kernel.bias},
                       {"matrix", rows}});
  }
  doc["kernels"] = kernels;
  return doc.dump(1);
}

KernelBank RoundBank(const KernelBank& bank, int digits) {
  KernelBank out = bank;
  for (SaabKernel& kernel : out.kernels) kernel = RoundKernel(kernel, digits);
  out.provenance.decimal_digits = digits;
  return out;
}

}  // namespace saabcodec
