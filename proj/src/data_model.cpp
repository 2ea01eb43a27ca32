#include "cachelab/data_model.hpp"

#include <random>

#include "cachelab/error.hpp"

namespace cachelab {

namespace {

std::size_t bytes_for(std::size_t n_bits) { return (n_bits + 7) / 8; }

void require_aligned(std::size_t bits, const char* what) {
  if (bits % 8 != 0) {
    throw Error(ErrorCode::DivisibilityError, std::string(what) + " must be a multiple of 8 bits");
  }
}

void mask_tail(std::vector<std::uint8_t>& bytes, std::size_t n_bits) {
  if (n_bits % 8 != 0 && !bytes.empty()) {
    bytes.back() &= static_cast<std::uint8_t>(0xFFU << (8 - n_bits % 8));
  }
}

}  // namespace

BitString::BitString(std::size_t n_bits) : bytes_(bytes_for(n_bits), 0), n_bits_(n_bits) {}

BitString::BitString(std::vector<std::uint8_t> bytes, std::size_t n_bits)
    : bytes_(std::move(bytes)), n_bits_(n_bits) {
  if (bytes_.size() != bytes_for(n_bits_)) {
    throw Error(ErrorCode::DomainError, "byte buffer does not match bit length");
  }
  mask_tail(bytes_, n_bits_);
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  require_aligned(offset, "slice offset");
  require_aligned(length, "slice length");
  if (offset + length > n_bits_) throw Error(ErrorCode::DomainError, "slice past end");
  const auto first = bytes_.begin() + static_cast<std::ptrdiff_t>(offset / 8);
  return BitString(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(length / 8)),
                   length);
}

void BitString::append(const BitString& other) {
  require_aligned(n_bits_, "append target");
  bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
  n_bits_ += other.n_bits_;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.n_bits_ != n_bits_) throw Error(ErrorCode::DomainError, "XOR of unequal lengths");
  for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

std::string BitString::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

BitString BitString::from_hex(const std::string& hex, std::size_t n_bits) {
  if (hex.size() != 2 * bytes_for(n_bits)) {
    throw Error(ErrorCode::ParseError, "hex payload length does not match bit count");
  }
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw Error(ErrorCode::ParseError, "bad hex digit");
  };
  std::vector<std::uint8_t> bytes(hex.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return BitString(std::move(bytes), n_bits);
}

Library::Library(int n_files, std::int64_t file_bits, std::uint64_t seed)
    : file_bits_(file_bits), seed_(seed) {
  if (n_files < 1 || file_bits < 1) {
    throw Error(ErrorCode::OutOfRange, "library needs N >= 1 and B >= 1");
  }
  std::mt19937_64 rng(seed);
  const auto n_bytes = bytes_for(static_cast<std::size_t>(file_bits));
  files_.reserve(static_cast<std::size_t>(n_files));
  for (int n = 0; n < n_files; ++n) {
    std::vector<std::uint8_t> bytes(n_bytes);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n_bytes; ++i) {
      if (i % 8 == 0) word = rng();
      bytes[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
    }
    files_.emplace_back(std::move(bytes), static_cast<std::size_t>(file_bits));
  }
}

std::string SubfilePieceId::str() const {
  std::string out = "(file " + std::to_string(file) + ", {";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(subset[i]);
  }
  out += "}";
  if (piece_owner) out += ", owner " + std::to_string(*piece_owner);
  return out + ")";
}

std::int64_t CacheContents::stored_bits(int k) const {
  std::int64_t total = 0;
  for (const auto& [id, bits] : user(k)) total += static_cast<std::int64_t>(bits.size());
  return total;
}

std::string Sender::str() const {
  return is_server() ? "server" : "device " + std::to_string(device);
}

}  // namespace cachelab
