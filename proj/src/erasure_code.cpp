#include "erasure_code.hpp"

#include <stdexcept>

#include "cachelab/error.hpp"

namespace cachelab::detail {

namespace {

struct FieldTables {
  std::uint32_t order;  // 2^w
  std::vector<std::uint32_t> exp;
  std::vector<std::uint32_t> log;

  FieldTables(unsigned width, std::uint32_t poly) : order(1U << width) {
    exp.resize(2 * order);
    log.resize(order);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order - 1; ++i) {
      exp[i] = x;
      log[x] = i;
      x <<= 1;
      if (x & order) x ^= poly;
    }
    for (std::uint32_t i = order - 1; i < 2 * order; ++i) exp[i] = exp[i - (order - 1)];
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp[log[a] + log[b]];
  }
  std::uint32_t inv(std::uint32_t a) const { return exp[(order - 1) - log[a]]; }
};

const FieldTables& field(bool wide) {
  static const FieldTables gf8(8, 0x11D);
  static const FieldTables gf16(16, 0x1100B);
  return wide ? gf16 : gf8;
}

std::uint32_t load(const Bytes& b, std::size_t i, bool wide) {
  return wide ? (static_cast<std::uint32_t>(b[2 * i]) << 8 | b[2 * i + 1]) : b[i];
}

void store(Bytes& b, std::size_t i, std::uint32_t v, bool wide) {
  if (wide) {
    b[2 * i] = static_cast<std::uint8_t>(v >> 8);
    b[2 * i + 1] = static_cast<std::uint8_t>(v);
  } else {
    b[i] = static_cast<std::uint8_t>(v);
  }
}

// dst += coeff * src, element-wise
void mul_add(Bytes& dst, const Bytes& src, std::uint32_t coeff, bool wide) {
  if (coeff == 0) return;
  const auto& f = field(wide);
  const std::size_t n = wide ? src.size() / 2 : src.size();
  for (std::size_t i = 0; i < n; ++i) {
    store(dst, i, load(dst, i, wide) ^ f.mul(coeff, load(src, i, wide)), wide);
  }
}

}  // namespace

ErasureCode::ErasureCode(std::size_t data_symbols, std::size_t parity_symbols)
    : data_(data_symbols), parity_(parity_symbols), wide_(data_symbols + parity_symbols > 256) {
  if (data_ + parity_ > 65536) {
    throw Error(ErrorCode::DomainError, "erasure code needs at most 65536 blocks");
  }
}

std::uint32_t ErasureCode::coefficient(std::size_t row, std::size_t col) const {
  // Cauchy entry 1 / (x_row + y_col) with disjoint x = row, y = parity + col.
  const auto& f = field(wide_);
  return f.inv(static_cast<std::uint32_t>(row ^ (parity_ + col)));
}

Bytes ErasureCode::encode(std::size_t parity_row, const std::vector<const Bytes*>& data) const {
  Bytes out(data.front()->size(), 0);
  for (std::size_t j = 0; j < data.size(); ++j) {
    mul_add(out, *data[j], coefficient(parity_row, j), wide_);
  }
  return out;
}

bool ErasureCode::decode(std::vector<std::optional<Bytes>>& data,
                         const std::vector<Bytes>& parity) const {
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (!data[j]) missing.push_back(j);
  }
  if (missing.empty()) return true;
  if (missing.size() > parity.size()) return false;
  const std::size_t m = missing.size();
  const auto& f = field(wide_);

  // Strip the known columns out of the first m parity rows.
  std::vector<Bytes> rhs(parity.begin(), parity.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (data[j]) mul_add(rhs[i], *data[j], coefficient(i, j), wide_);
    }
  }

  // Gauss-Jordan on [A | I] where A[i][c] = coefficient(i, missing[c]).
  std::vector<std::vector<std::uint32_t>> a(m, std::vector<std::uint32_t>(2 * m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < m; ++c) a[i][c] = coefficient(i, missing[c]);
    a[i][m + i] = 1;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) return false;
    std::swap(a[pivot], a[col]);
    const std::uint32_t scale = f.inv(a[col][col]);
    for (auto& v : a[col]) v = f.mul(v, scale);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const std::uint32_t factor = a[r][col];
      for (std::size_t c = 0; c < 2 * m; ++c) a[r][c] ^= f.mul(factor, a[col][c]);
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    Bytes block(rhs.front().size(), 0);
    for (std::size_t i = 0; i < m; ++i) mul_add(block, rhs[i], a[c][m + i], wide_);
    data[missing[c]] = std::move(block);
  }
  return true;
}

}  // namespace cachelab::detail
