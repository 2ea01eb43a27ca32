#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cachelab/rational.hpp"

namespace cachelab {

enum class DeliveryMode { Centralized, D2D };

std::string_view to_string(DeliveryMode mode);
/// Accepts "cen"/"centralized" and "d2d".
DeliveryMode parse_mode(std::string_view text);

/// One problem instance: N files, K users, L demands per user, cache size M
/// (in files) and the delivery model. Construct through make_config.
struct SystemConfig {
  int n_files = 0;
  int n_users = 0;
  int demands_per_user = 0;
  ExactRational cache_size;
  DeliveryMode mode = DeliveryMode::Centralized;
  /// Bits per file. 0 means "not fixed yet"; the simulator picks a
  /// divisible size per corner point.
  std::int64_t file_bits = 0;

  /// Placement parameter t = K*M/N when it is an integer.
  std::optional<int> corner_t() const;
  /// Smallest admissible cache size: 0 (centralized) or N/K (D2D).
  ExactRational min_cache() const;
};

/// Validates and builds a config. Throws Error(OutOfRange) for any violated
/// bound and Error(InsufficientCollectiveStorage) when a D2D network cannot
/// hold the library (K*M < N).
SystemConfig make_config(int n_files, int n_users, int demands_per_user,
                         const ExactRational& cache_size, DeliveryMode mode,
                         std::int64_t file_bits = 0);

/// Same config with a different cache size (revalidated).
SystemConfig with_cache(const SystemConfig& config, const ExactRational& cache_size);

using Subset = std::vector<int>;  // sorted, 1-based user indices

/// All C(K, t) t-subsets of [1:K] in lexicographic order.
std::vector<Subset> subsets(int ground, int size);

/// Position of `s` in subsets(ground, s.size()).
std::size_t subset_rank(const Subset& s, int ground);

std::int64_t binomial(int n, int k);

/// K rows of L pairwise-distinct file indices in [1:N].
class DemandMatrix {
 public:
  DemandMatrix() = default;
  /// Throws OutOfRange on a malformed row.
  DemandMatrix(std::vector<std::vector<int>> rows, int n_files);

  int users() const { return static_cast<int>(rows_.size()); }
  int per_user() const { return rows_.empty() ? 0 : static_cast<int>(rows_.front().size()); }
  /// File demanded by user k (1-based) in round j (1-based).
  int at(int user, int round) const { return rows_[user - 1][round - 1]; }
  const std::vector<int>& row(int user) const { return rows_[user - 1]; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }
  int distinct_files() const;

  friend bool operator==(const DemandMatrix&, const DemandMatrix&) = default;

 private:
  std::vector<std::vector<int>> rows_;
};

/// Deterministic demand pattern maximizing the number of distinct requested
/// files: indices 1,2,3,... handed out row-major, wrapping modulo N and
/// skipping entries already present in the current row.
DemandMatrix worst_case_demands(const SystemConfig& config);

/// Each row is a uniformly random ordered L-subset of [1:N].
DemandMatrix random_demands(const SystemConfig& config, std::uint64_t seed);

}  // namespace cachelab
