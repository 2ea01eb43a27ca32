#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cachelab/data_model.hpp"
#include "cachelab/model.hpp"
#include "cachelab/rational.hpp"

namespace cachelab {

// Bit-exact simulators for the repetition-based schemes: L independent
// rounds of the single-demand coded multicast, or a demand-independent
// fallback when that is cheaper.
//
// Centralized placement: file n is cut into C(K,t) subfiles (n,T), one per
// t-subset T, and user k caches every (n,T) with k in T. D2D placement cuts
// each subfile further into t pieces, one owned by each member of T.

enum class DeliveryStrategy {
  Coded,
  /// Centralized: every file's missing part (raw at t = 0, erasure-code
  /// parities otherwise). D2D: the whole library broadcast by the devices.
  Fallback,
};

std::string_view to_string(DeliveryStrategy s);

/// t = K*M/N. Throws NotCorner when it is not an integer.
int placement_t(const SystemConfig& config);

/// Smallest file size (bits) for which every fragment of the corner point is
/// byte-aligned, before any user override.
std::int64_t default_file_bits(const SystemConfig& config, int t);

/// The strategy both deliver_* functions emit for (config, t).
DeliveryStrategy chosen_strategy(const SystemConfig& config, int t);

CacheContents place_centralized(const SystemConfig& config, int t, const Library& library);
TransmissionLog deliver_centralized(const SystemConfig& config, int t, const CacheContents& caches,
                                    const DemandMatrix& demands, const Library& library);

CacheContents place_d2d(const SystemConfig& config, int t, const Library& library);
/// Every payload is computed from the sending device's cache only.
TransmissionLog deliver_d2d(const SystemConfig& config, int t, const CacheContents& caches,
                            const DemandMatrix& demands);

/// Rebuilds a D2D payload from the sender's cache alone; used to audit that
/// devices never transmit anything they do not store.
BitString reencode_from_sender(const SystemConfig& config, int t, const Transmission& tx,
                               const UserCache& sender_cache, const DemandMatrix& demands);

/// Reconstructs the L files requested by user_k from its cache and the log.
/// Throws DecodeFailure naming the first fragment it cannot recover.
std::vector<BitString> decode(const SystemConfig& config, int user_k, const UserCache& cache,
                              const TransmissionLog& log, const DemandMatrix& demands);

struct SimReport {
  ExactRational measured_rate;  // total_bits / B
  ExactRational formula_rate;   // closed form at M = N*t/K
  std::vector<bool> decode_ok;  // per user
  bool rate_match = false;      // measured_rate <= formula_rate
  bool storage_exact = false;   // every cache holds exactly M*B bits
  /// D2D only: whether every transmitting device sent the same number of
  /// bits. Reported, never enforced.
  std::optional<bool> per_device_uniform;
  DeliveryStrategy strategy = DeliveryStrategy::Coded;
  int t = 0;
  std::int64_t file_bits = 0;
  std::int64_t total_bits = 0;
  std::size_t transmissions = 0;

  bool all_decoded() const;
};

struct SimRun {
  SimReport report;
  TransmissionLog log;
};

/// Generates the library from `seed`, places, delivers and decodes for all
/// users. config.file_bits > 0 overrides the default file size (divisibility
/// is re-checked).
SimRun simulate_run(const SystemConfig& config, int t, const DemandMatrix& demands,
                    std::uint64_t seed);
SimReport simulate(const SystemConfig& config, int t, const DemandMatrix& demands,
                   std::uint64_t seed);

}  // namespace cachelab
