#ifndef SAABCODEC_KERNEL_BANK_H_
#define SAABCODEC_KERNEL_BANK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saabcodec/mode_groups.h"
#include "saabcodec/saab.h"

namespace saabcodec {

struct BankProvenance {
  std::vector<std::string> clips;
  std::vector<int> qps;
  uint64_t seed = 0;
  uint32_t samples_per_kernel = 0;
  std::optional<int> decimal_digits;

  friend bool operator==(const BankProvenance&, const BankProvenance&) = default;
};

// 24 mode-dependent kernels plus the table that routes modes to them.
// Immutable once trained; codec configurations share it by const reference.
struct KernelBank {
  std::vector<SaabKernel> kernels;
  ModeGroupTable table;
  BankProvenance provenance;

  const SaabKernel& ForMode(int mode) const {
    return kernels[table.apply_map[mode]];
  }

  friend bool operator==(const KernelBank&, const KernelBank&) = default;
};

std::vector<uint8_t> SerializeKernel(const SaabKernel& kernel);
SaabKernel ParseKernel(std::span<const uint8_t> bytes);

std::vector<uint8_t> SerializeBank(const KernelBank& bank);
// Throws kFormat on a malformed container.
KernelBank ParseBank(std::span<const uint8_t> bytes);

void WriteBank(const std::string& path, const KernelBank& bank);
KernelBank ReadBank(const std::string& path);

// FNV-1a 64 over the serialized bank; bitstreams carry it so a decoder
// cannot silently pair a stream with the wrong kernels.
uint64_t BankDigest(const KernelBank& bank);

// Human-readable export (JSON text, shortest round-trip decimal doubles).
std::string BankToJson(const KernelBank& bank);

// Every kernel rounded to `digits` decimal places.
KernelBank RoundBank(const KernelBank& bank, int digits);

}  // namespace saabcodec

#endif  // SAABCODEC_KERNEL_BANK_H_
