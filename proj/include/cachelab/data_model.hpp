#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cachelab/model.hpp"

namespace cachelab {

/// Fixed-length bit string. Storage is byte-granular; bits past size() in the
/// last byte are kept at zero so equality is plain byte comparison.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n_bits);
  BitString(std::vector<std::uint8_t> bytes, std::size_t n_bits);

  std::size_t size() const { return n_bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>& mutable_bytes() { return bytes_; }

  bool bit(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1U; }

  /// Bits [offset, offset + length); both must be multiples of 8.
  BitString slice(std::size_t offset, std::size_t length) const;
  void append(const BitString& other);
  /// In-place XOR with an equal-length string.
  BitString& operator^=(const BitString& other);

  std::string hex() const;
  static BitString from_hex(const std::string& hex, std::size_t n_bits);

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t n_bits_ = 0;
};

/// N uniformly random files of B bits each, regenerated bit-identically from
/// the seed.
class Library {
 public:
  Library(int n_files, std::int64_t file_bits, std::uint64_t seed);

  int n_files() const { return static_cast<int>(files_.size()); }
  std::int64_t file_bits() const { return file_bits_; }
  std::uint64_t seed() const { return seed_; }
  /// 1-based.
  const BitString& file(int n) const { return files_.at(static_cast<std::size_t>(n - 1)); }

 private:
  std::vector<BitString> files_;
  std::int64_t file_bits_;
  std::uint64_t seed_;
};

/// Address of a stored fragment: file n, the t-subset T of users caching it,
/// and (D2D only) the member of T that owns this piece for transmission.
struct SubfilePieceId {
  int file = 0;
  Subset subset;
  std::optional<int> piece_owner;

  std::string str() const;
  friend auto operator<=>(const SubfilePieceId&, const SubfilePieceId&) = default;
  friend bool operator==(const SubfilePieceId&, const SubfilePieceId&) = default;
};

using UserCache = std::map<SubfilePieceId, BitString>;

struct CacheContents {
  DeliveryMode mode = DeliveryMode::Centralized;
  int placement_t = 0;
  std::int64_t file_bits = 0;
  std::vector<UserCache> per_user;  // index k-1

  const UserCache& user(int k) const { return per_user.at(static_cast<std::size_t>(k - 1)); }
  std::int64_t stored_bits(int k) const;
};

struct Sender {
  /// 0 is the central server; k >= 1 is device k.
  int device = 0;

  bool is_server() const { return device == 0; }
  static Sender server() { return {0}; }
  static Sender of_device(int k) { return {k}; }
  std::string str() const;
  friend bool operator==(const Sender&, const Sender&) = default;
};

enum class TransmissionKind {
  /// XOR of one fragment per member of `subset` (coded multicast).
  CodedMulticast,
  /// A single fragment sent verbatim (uncoded fallback, library broadcast).
  RawPiece,
  /// One parity symbol of a systematic erasure code over a file's subfiles.
  Parity,
};

struct Transmission {
  TransmissionKind kind = TransmissionKind::CodedMulticast;
  Sender sender;
  int round = 1;
  std::optional<Subset> subset;          // CodedMulticast
  std::optional<SubfilePieceId> piece;   // RawPiece
  int file = 0;                          // Parity
  int parity_row = 0;                    // Parity
  BitString payload;
  std::int64_t bit_count = 0;
};

struct TransmissionLog {
  std::vector<Transmission> transmissions;
  std::int64_t total_bits = 0;

  void push(Transmission t) {
    total_bits += t.bit_count;
    transmissions.push_back(std::move(t));
  }
};

}  // namespace cachelab
