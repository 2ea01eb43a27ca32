#pragma once

// Systematic Cauchy erasure code over GF(2^8) or GF(2^16), used by the
// centralized fallback that delivers the missing part of every file.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace cachelab::detail {

using Bytes = std::vector<std::uint8_t>;

class ErasureCode {
 public:
  /// data_symbols systematic blocks, parity_symbols parity blocks. Picks the
  /// 8-bit field when data + parity <= 256, else the 16-bit field.
  ErasureCode(std::size_t data_symbols, std::size_t parity_symbols);

  /// Bytes per field element (1 or 2); block lengths must be a multiple.
  std::size_t symbol_bytes() const { return wide_ ? 2 : 1; }
  std::size_t data_symbols() const { return data_; }
  std::size_t parity_symbols() const { return parity_; }

  Bytes encode(std::size_t parity_row, const std::vector<const Bytes*>& data) const;

  /// Recovers all data blocks from the known ones (nullopt entries missing)
  /// and every parity block. Returns false when the system is singular,
  /// which a Cauchy matrix never is for missing <= parity.
  bool decode(std::vector<std::optional<Bytes>>& data, const std::vector<Bytes>& parity) const;

 private:
  std::uint32_t coefficient(std::size_t row, std::size_t col) const;

  std::size_t data_;
  std::size_t parity_;
  bool wide_;
};

}  // namespace cachelab::detail
