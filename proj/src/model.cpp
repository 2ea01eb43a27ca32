#include "cachelab/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "cachelab/error.hpp"

namespace cachelab {

std::string_view to_string(DeliveryMode mode) {
  return mode == DeliveryMode::Centralized ? "cen" : "d2d";
}

DeliveryMode parse_mode(std::string_view text) {
  if (text == "cen" || text == "centralized") return DeliveryMode::Centralized;
  if (text == "d2d") return DeliveryMode::D2D;
  throw Error(ErrorCode::ParseError, "unknown delivery mode '" + std::string(text) + "'");
}

std::optional<int> SystemConfig::corner_t() const {
  const ExactRational t = ExactRational(n_users) * cache_size / ExactRational(n_files);
  if (!t.is_integer()) return std::nullopt;
  return static_cast<int>(t.to_int64());
}

ExactRational SystemConfig::min_cache() const {
  return mode == DeliveryMode::D2D ? ExactRational(n_files, n_users) : ExactRational(0);
}

SystemConfig make_config(int n_files, int n_users, int demands_per_user,
                         const ExactRational& cache_size, DeliveryMode mode,
                         std::int64_t file_bits) {
  if (n_files < 1) throw Error(ErrorCode::OutOfRange, "N must be >= 1");
  if (n_users < 1) throw Error(ErrorCode::OutOfRange, "K must be >= 1");
  if (demands_per_user < 1 || demands_per_user > n_files) {
    throw Error(ErrorCode::OutOfRange, "L must lie in [1:N] (L=" +
                                           std::to_string(demands_per_user) +
                                           ", N=" + std::to_string(n_files) + ")");
  }
  if (file_bits < 0) throw Error(ErrorCode::OutOfRange, "file bits must be positive");
  if (cache_size.sign() < 0 || cache_size > ExactRational(n_files)) {
    throw Error(ErrorCode::OutOfRange, "M must lie in [0, N], got " + cache_size.str());
  }
  if (mode == DeliveryMode::D2D &&
      ExactRational(n_users) * cache_size < ExactRational(n_files)) {
    throw Error(ErrorCode::InsufficientCollectiveStorage,
                "D2D delivery needs K*M >= N (K*M = " +
                    (ExactRational(n_users) * cache_size).str() + ", N = " +
                    std::to_string(n_files) + ")");
  }
  return SystemConfig{n_files, n_users, demands_per_user, cache_size, mode, file_bits};
}

SystemConfig with_cache(const SystemConfig& config, const ExactRational& cache_size) {
  return make_config(config.n_files, config.n_users, config.demands_per_user, cache_size,
                     config.mode, config.file_bits);
}

std::vector<Subset> subsets(int ground, int size) {
  std::vector<Subset> out;
  if (size < 0 || size > ground) return out;
  Subset cur(static_cast<std::size_t>(size));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    // rightmost position that can still advance
    int pos = size - 1;
    while (pos >= 0 && cur[pos] == ground - (size - 1 - pos)) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (int i = pos + 1; i < size; ++i) cur[i] = cur[i - 1] + 1;
  }
  return out;
}

std::size_t subset_rank(const Subset& s, int ground) {
  // Count the subsets that precede s lexicographically.
  const int size = static_cast<int>(s.size());
  std::int64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < size; ++i) {
    for (int v = prev + 1; v < s[i]; ++v) {
      rank += binomial(ground - v, size - i - 1);
    }
    prev = s[i];
  }
  return static_cast<std::size_t>(rank);
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

DemandMatrix::DemandMatrix(std::vector<std::vector<int>> rows, int n_files)
    : rows_(std::move(rows)) {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const auto& r = rows_[k];
    if (r.size() != rows_.front().size() || r.empty()) {
      throw Error(ErrorCode::OutOfRange, "demand rows must all have the same length L >= 1");
    }
    std::set<int> seen;
    for (int f : r) {
      if (f < 1 || f > n_files) {
        throw Error(ErrorCode::OutOfRange, "demanded file index out of [1:N]");
      }
      if (!seen.insert(f).second) {
        throw Error(ErrorCode::OutOfRange,
                    "user " + std::to_string(k + 1) + " requests file " + std::to_string(f) +
                        " twice");
      }
    }
  }
}

int DemandMatrix::distinct_files() const {
  std::set<int> all;
  for (const auto& r : rows_) all.insert(r.begin(), r.end());
  return static_cast<int>(all.size());
}

DemandMatrix worst_case_demands(const SystemConfig& config) {
  const int n = config.n_files;
  const int l = config.demands_per_user;
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(config.n_users));
  std::int64_t next = 0;
  for (auto& row : rows) {
    for (int j = 0; j < l; ++j) {
      int file = static_cast<int>(next % n) + 1;
      while (std::find(row.begin(), row.end(), file) != row.end()) {
        ++next;
        file = static_cast<int>(next % n) + 1;
      }
      row.push_back(file);
      ++next;
    }
  }
  return DemandMatrix(std::move(rows), n);
}

namespace {

// Uniform draw in [0, bound) by rejection; std::uniform_int_distribution is
// implementation-defined, this keeps outputs identical across toolchains.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace

DemandMatrix random_demands(const SystemConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = config.n_files;
  std::vector<std::vector<int>> rows;
  rows.reserve(static_cast<std::size_t>(config.n_users));
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int k = 0; k < config.n_users; ++k) {
    std::iota(pool.begin(), pool.end(), 1);
    // partial Fisher-Yates
    for (int j = 0; j < config.demands_per_user; ++j) {
      const auto pick = j + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(n - j)));
      std::swap(pool[j], pool[pick]);
    }
    rows.emplace_back(pool.begin(), pool.begin() + config.demands_per_user);
  }
  return DemandMatrix(std::move(rows), n);
}

}  // namespace cachelab
