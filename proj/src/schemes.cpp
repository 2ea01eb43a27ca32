#include "cachelab/schemes.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cachelab/bounds.hpp"
#include "cachelab/error.hpp"
#include "erasure_code.hpp"

namespace cachelab {

std::string_view to_string(DeliveryStrategy s) {
  return s == DeliveryStrategy::Coded ? "coded" : "fallback";
}

namespace {

bool contains(const Subset& s, int user) { return std::binary_search(s.begin(), s.end(), user); }

Subset without(const Subset& s, int user) {
  Subset out;
  out.reserve(s.size());
  for (int v : s) {
    if (v != user) out.push_back(v);
  }
  return out;
}

int checked_t(const SystemConfig& config, int t) {
  if (t < 0 || t > config.n_users) {
    throw Error(ErrorCode::NotCorner, "t must lie in [0:K], got " + std::to_string(t));
  }
  const auto corner = config.corner_t();
  if (!corner || *corner != t) {
    throw Error(ErrorCode::NotCorner, "cache size M = " + config.cache_size.str() +
                                          " does not match corner t = " + std::to_string(t));
  }
  if (config.mode == DeliveryMode::D2D && t < 1) {
    throw Error(ErrorCode::InsufficientCollectiveStorage, "D2D placement requires t >= 1");
  }
  return t;
}

// Parity blocks per file in the centralized fallback.
std::int64_t parity_blocks(int k, int t) { return binomial(k - 1, t); }

bool fallback_needs_wide_field(int k, int t) {
  return t >= 1 && binomial(k, t) + parity_blocks(k, t) > 256;
}

// Fragment layout shared by placement, delivery and decoding.
struct Layout {
  int n = 0, k = 0, l = 0, t = 0;
  DeliveryMode mode = DeliveryMode::Centralized;
  std::int64_t file_bits = 0;
  std::vector<Subset> tsets;  // lexicographic
  std::int64_t subfile_bits = 0;
  std::int64_t piece_bits = 0;  // D2D only

  std::int64_t subfiles() const { return static_cast<std::int64_t>(tsets.size()); }
};

Layout make_layout(const SystemConfig& config, int t, std::int64_t file_bits) {
  Layout g;
  g.n = config.n_files;
  g.k = config.n_users;
  g.l = config.demands_per_user;
  g.t = t;
  g.mode = config.mode;
  g.file_bits = file_bits;
  g.tsets = subsets(g.k, t);
  const std::int64_t fragments =
      g.subfiles() * (config.mode == DeliveryMode::D2D ? std::max(t, 1) : 1);
  if (file_bits % (8 * fragments) != 0) {
    throw Error(ErrorCode::DivisibilityError,
                "B = " + std::to_string(file_bits) + " must be divisible by 8 * " +
                    std::to_string(fragments) + " fragments");
  }
  g.subfile_bits = file_bits / g.subfiles();
  g.piece_bits = config.mode == DeliveryMode::D2D ? g.subfile_bits / t : g.subfile_bits;
  if (config.mode == DeliveryMode::Centralized && fallback_needs_wide_field(g.k, t) &&
      chosen_strategy(config, t) == DeliveryStrategy::Fallback && (g.subfile_bits / 8) % 2 != 0) {
    throw Error(ErrorCode::DivisibilityError,
                "16-bit erasure symbols need an even number of bytes per subfile");
  }
  return g;
}

void check_library(const SystemConfig& config, const Library& library) {
  if (library.n_files() != config.n_files) {
    throw Error(ErrorCode::DomainError, "library size does not match N");
  }
}

void check_caches(const Layout& g, const CacheContents& caches) {
  if (caches.mode != g.mode || caches.placement_t != g.t || caches.file_bits != g.file_bits ||
      static_cast<int>(caches.per_user.size()) != g.k) {
    throw Error(ErrorCode::PlacementMismatch,
                "caches were placed with t = " + std::to_string(caches.placement_t) +
                    ", delivery uses t = " + std::to_string(g.t));
  }
}

BitString subfile_of(const Layout& g, const Library& library, int file, std::size_t rank) {
  return library.file(file).slice(rank * static_cast<std::size_t>(g.subfile_bits),
                                  static_cast<std::size_t>(g.subfile_bits));
}

const BitString& cached(const UserCache& cache, const SubfilePieceId& id, int holder) {
  const auto it = cache.find(id);
  if (it == cache.end()) {
    throw Error(ErrorCode::PlacementMismatch,
                "user " + std::to_string(holder) + " does not cache " + id.str());
  }
  return it->second;
}

}  // namespace

int placement_t(const SystemConfig& config) {
  const auto t = config.corner_t();
  if (!t) {
    throw Error(ErrorCode::NotCorner, "K*M/N = " +
                                          (ExactRational(config.n_users) * config.cache_size /
                                           ExactRational(config.n_files))
                                              .str() +
                                          " is not an integer");
  }
  return *t;
}

DeliveryStrategy chosen_strategy(const SystemConfig& config, int t) {
  const std::int64_t n = config.n_files;
  const std::int64_t l = config.demands_per_user;
  const int k = config.n_users;
  if (config.mode == DeliveryMode::Centralized) {
    // both in units of subfiles: L*C(K,t+1) coded vs N*C(K-1,t) fallback
    return l * binomial(k, t + 1) <= n * parity_blocks(k, t) ? DeliveryStrategy::Coded
                                                             : DeliveryStrategy::Fallback;
  }
  // in units of pieces: L*(t+1)*C(K,t+1) coded vs N*t*C(K,t) broadcast
  return l * (t + 1) * binomial(k, t + 1) <= n * t * binomial(k, t) ? DeliveryStrategy::Coded
                                                                     : DeliveryStrategy::Fallback;
}

std::int64_t default_file_bits(const SystemConfig& config, int t) {
  const std::int64_t c = binomial(config.n_users, t);
  std::int64_t bits = std::lcm(c, std::max<std::int64_t>(t, 1) * c) * 8;
  if (config.mode == DeliveryMode::Centralized && fallback_needs_wide_field(config.n_users, t) &&
      chosen_strategy(config, t) == DeliveryStrategy::Fallback && (bits / c / 8) % 2 != 0) {
    bits *= 2;
  }
  return bits;
}

// --- centralized ------------------------------------------------------------

CacheContents place_centralized(const SystemConfig& config, int t, const Library& library) {
  if (config.mode != DeliveryMode::Centralized) {
    throw Error(ErrorCode::ModeMismatch, "place_centralized expects a centralized config");
  }
  checked_t(config, t);
  check_library(config, library);
  const Layout g = make_layout(config, t, library.file_bits());
  CacheContents caches{config.mode, t, g.file_bits, std::vector<UserCache>(static_cast<std::size_t>(g.k))};
  for (int n = 1; n <= g.n; ++n) {
    for (std::size_t r = 0; r < g.tsets.size(); ++r) {
      const auto& subset = g.tsets[r];
      const BitString bits = subfile_of(g, library, n, r);
      for (int k : subset) caches.per_user[static_cast<std::size_t>(k - 1)].emplace(SubfilePieceId{n, subset, std::nullopt}, bits);
    }
  }
  return caches;
}

TransmissionLog deliver_centralized(const SystemConfig& config, int t, const CacheContents& caches,
                                    const DemandMatrix& demands, const Library& library) {
  if (config.mode != DeliveryMode::Centralized) {
    throw Error(ErrorCode::ModeMismatch, "deliver_centralized expects a centralized config");
  }
  checked_t(config, t);
  check_library(config, library);
  const Layout g = make_layout(config, t, library.file_bits());
  check_caches(g, caches);
  TransmissionLog log;

  if (chosen_strategy(config, t) == DeliveryStrategy::Coded) {
    const auto groups = subsets(g.k, t + 1);
    for (int j = 1; j <= g.l; ++j) {
      for (const auto& group : groups) {
        BitString payload(static_cast<std::size_t>(g.subfile_bits));
        for (int k : group) {
          payload ^= subfile_of(g, library, demands.at(k, j), subset_rank(without(group, k), g.k));
        }
        Transmission tx;
        tx.kind = TransmissionKind::CodedMulticast;
        tx.sender = Sender::server();
        tx.round = j;
        tx.subset = group;
        tx.bit_count = g.subfile_bits;
        tx.payload = std::move(payload);
        log.push(std::move(tx));
      }
    }
    return log;
  }

  if (t == 0) {
    // nothing cached: send every file as is
    for (int n = 1; n <= g.n; ++n) {
      Transmission tx;
      tx.kind = TransmissionKind::RawPiece;
      tx.sender = Sender::server();
      tx.piece = SubfilePieceId{n, {}, std::nullopt};
      tx.payload = library.file(n);
      tx.bit_count = g.file_bits;
      log.push(std::move(tx));
    }
    return log;
  }

  const detail::ErasureCode code(static_cast<std::size_t>(g.subfiles()),
                                 static_cast<std::size_t>(parity_blocks(g.k, t)));
  for (int n = 1; n <= g.n; ++n) {
    std::vector<detail::Bytes> blocks;
    blocks.reserve(g.tsets.size());
    for (std::size_t r = 0; r < g.tsets.size(); ++r) blocks.push_back(subfile_of(g, library, n, r).bytes());
    std::vector<const detail::Bytes*> view;
    for (const auto& b : blocks) view.push_back(&b);
    for (std::size_t row = 0; row < code.parity_symbols(); ++row) {
      Transmission tx;
      tx.kind = TransmissionKind::Parity;
      tx.sender = Sender::server();
      tx.file = n;
      tx.parity_row = static_cast<int>(row);
      tx.payload = BitString(code.encode(row, view), static_cast<std::size_t>(g.subfile_bits));
      tx.bit_count = g.subfile_bits;
      log.push(std::move(tx));
    }
  }
  return log;
}

// --- D2D --------------------------------------------------------------------

CacheContents place_d2d(const SystemConfig& config, int t, const Library& library) {
  if (config.mode != DeliveryMode::D2D) {
    throw Error(ErrorCode::ModeMismatch, "place_d2d expects a D2D config");
  }
  checked_t(config, t);
  check_library(config, library);
  const Layout g = make_layout(config, t, library.file_bits());
  CacheContents caches{config.mode, t, g.file_bits, std::vector<UserCache>(static_cast<std::size_t>(g.k))};
  for (int n = 1; n <= g.n; ++n) {
    for (std::size_t r = 0; r < g.tsets.size(); ++r) {
      const auto& subset = g.tsets[r];
      const BitString sub = subfile_of(g, library, n, r);
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const BitString piece = sub.slice(i * static_cast<std::size_t>(g.piece_bits),
                                          static_cast<std::size_t>(g.piece_bits));
        const SubfilePieceId id{n, subset, subset[i]};
        for (int k : subset) caches.per_user[static_cast<std::size_t>(k - 1)].emplace(id, piece);
      }
    }
  }
  return caches;
}

BitString reencode_from_sender(const SystemConfig& config, int t, const Transmission& tx,
                               const UserCache& sender_cache, const DemandMatrix& demands) {
  const int u = tx.sender.device;
  if (tx.kind == TransmissionKind::RawPiece) {
    return cached(sender_cache, *tx.piece, u);
  }
  if (tx.kind != TransmissionKind::CodedMulticast || !tx.subset) {
    throw Error(ErrorCode::DomainError, "not a D2D transmission");
  }
  const auto& group = *tx.subset;
  BitString payload;
  bool first = true;
  for (int k : group) {
    if (k == u) continue;
    const SubfilePieceId id{demands.at(k, tx.round), without(group, k), u};
    const BitString& piece = cached(sender_cache, id, u);
    if (first) {
      payload = piece;
      first = false;
    } else {
      payload ^= piece;
    }
  }
  (void)config;
  (void)t;
  return payload;
}

TransmissionLog deliver_d2d(const SystemConfig& config, int t, const CacheContents& caches,
                            const DemandMatrix& demands) {
  if (config.mode != DeliveryMode::D2D) {
    throw Error(ErrorCode::ModeMismatch, "deliver_d2d expects a D2D config");
  }
  checked_t(config, t);
  const Layout g = make_layout(config, t, caches.file_bits);
  check_caches(g, caches);
  TransmissionLog log;

  if (chosen_strategy(config, t) == DeliveryStrategy::Coded) {
    const auto groups = subsets(g.k, t + 1);
    for (int j = 1; j <= g.l; ++j) {
      for (const auto& group : groups) {
        for (int u : group) {
          Transmission tx;
          tx.kind = TransmissionKind::CodedMulticast;
          tx.sender = Sender::of_device(u);
          tx.round = j;
          tx.subset = group;
          tx.payload = reencode_from_sender(config, t, tx, caches.user(u), demands);
          tx.bit_count = g.piece_bits;
          log.push(std::move(tx));
        }
      }
    }
    return log;
  }

  // Library broadcast: each piece goes out once, from the lowest-indexed
  // device that caches it.
  for (int n = 1; n <= g.n; ++n) {
    for (const auto& subset : g.tsets) {
      const int u = subset.front();
      for (int owner : subset) {
        Transmission tx;
        tx.kind = TransmissionKind::RawPiece;
        tx.sender = Sender::of_device(u);
        tx.piece = SubfilePieceId{n, subset, owner};
        tx.payload = reencode_from_sender(config, t, tx, caches.user(u), demands);
        tx.bit_count = g.piece_bits;
        log.push(std::move(tx));
      }
    }
  }
  return log;
}

// --- decoding ---------------------------------------------------------------

std::vector<BitString> decode(const SystemConfig& config, int user_k, const UserCache& cache,
                              const TransmissionLog& log, const DemandMatrix& demands) {
  const int t = placement_t(config);
  const std::int64_t file_bits = [&] {
    for (const auto& [id, bits] : cache) {
      const std::int64_t per_file = config.mode == DeliveryMode::D2D
                                        ? static_cast<std::int64_t>(bits.size()) * t * binomial(config.n_users, t)
                                        : static_cast<std::int64_t>(bits.size()) * binomial(config.n_users, t);
      return per_file;
    }
    // empty cache: t = 0, fragments are whole files and arrive raw
    for (const auto& tx : log.transmissions) return tx.bit_count;
    return std::int64_t{0};
  }();
  const bool d2d = config.mode == DeliveryMode::D2D;
  const int k = user_k;

  UserCache known = cache;
  std::map<int, std::vector<detail::Bytes>> parities;  // file -> blocks by row

  for (const auto& tx : log.transmissions) {
    switch (tx.kind) {
      case TransmissionKind::RawPiece:
        known.emplace(*tx.piece, tx.payload);
        break;
      case TransmissionKind::Parity: {
        auto& rows = parities[tx.file];
        if (rows.size() <= static_cast<std::size_t>(tx.parity_row)) rows.resize(static_cast<std::size_t>(tx.parity_row) + 1);
        rows[static_cast<std::size_t>(tx.parity_row)] = tx.payload.bytes();
        break;
      }
      case TransmissionKind::CodedMulticast: {
        const auto& group = *tx.subset;
        if (!contains(group, k) || (d2d && tx.sender.device == k)) break;
        const std::optional<int> owner = d2d ? std::optional<int>(tx.sender.device) : std::nullopt;
        BitString acc = tx.payload;
        for (int other : group) {
          if (other == k || (d2d && other == tx.sender.device)) continue;
          const SubfilePieceId id{demands.at(other, tx.round), without(group, other), owner};
          const auto it = known.find(id);
          if (it == known.end()) {
            throw Error(ErrorCode::DecodeFailure, "user " + std::to_string(k) +
                                                      " cannot cancel " + id.str() + " in round " +
                                                      std::to_string(tx.round));
          }
          acc ^= it->second;
        }
        known.emplace(SubfilePieceId{demands.at(k, tx.round), without(group, k), owner}, std::move(acc));
        break;
      }
    }
  }

  const auto tsets = subsets(config.n_users, t);
  std::vector<BitString> out;
  for (int j = 1; j <= demands.per_user(); ++j) {
    const int f = demands.at(k, j);
    if (!d2d && parities.count(f) != 0) {
      const detail::ErasureCode code(tsets.size(), static_cast<std::size_t>(parity_blocks(config.n_users, t)));
      std::vector<std::optional<detail::Bytes>> blocks(tsets.size());
      for (std::size_t r = 0; r < tsets.size(); ++r) {
        const auto it = known.find(SubfilePieceId{f, tsets[r], std::nullopt});
        if (it != known.end()) blocks[r] = it->second.bytes();
      }
      if (!code.decode(blocks, parities[f])) {
        throw Error(ErrorCode::DecodeFailure, "user " + std::to_string(k) +
                                                  " cannot solve the parity system of file " +
                                                  std::to_string(f));
      }
      const auto sub_bits = static_cast<std::size_t>(file_bits / static_cast<std::int64_t>(tsets.size()));
      for (std::size_t r = 0; r < tsets.size(); ++r) {
        known.emplace(SubfilePieceId{f, tsets[r], std::nullopt}, BitString(std::move(*blocks[r]), sub_bits));
      }
    }

    BitString file;
    for (const auto& subset : tsets) {
      if (d2d) {
        for (int owner : subset) {
          const SubfilePieceId id{f, subset, owner};
          const auto it = known.find(id);
          if (it == known.end()) {
            throw Error(ErrorCode::DecodeFailure, "user " + std::to_string(k) + " is missing " + id.str());
          }
          file.append(it->second);
        }
      } else {
        const SubfilePieceId id{f, subset, std::nullopt};
        const auto it = known.find(id);
        if (it == known.end()) {
          throw Error(ErrorCode::DecodeFailure, "user " + std::to_string(k) + " is missing " + id.str());
        }
        file.append(it->second);
      }
    }
    out.push_back(std::move(file));
  }
  return out;
}

// --- end to end -------------------------------------------------------------

bool SimReport::all_decoded() const {
  return std::all_of(decode_ok.begin(), decode_ok.end(), [](bool b) { return b; });
}

SimRun simulate_run(const SystemConfig& config, int t, const DemandMatrix& demands,
                    std::uint64_t seed) {
  checked_t(config, t);
  if (demands.users() != config.n_users || demands.per_user() != config.demands_per_user) {
    throw Error(ErrorCode::OutOfRange, "demand matrix shape does not match (K, L)");
  }
  const std::int64_t bits = config.file_bits > 0 ? config.file_bits : default_file_bits(config, t);
  const Library library(config.n_files, bits, seed);
  const bool d2d = config.mode == DeliveryMode::D2D;

  const CacheContents caches = d2d ? place_d2d(config, t, library) : place_centralized(config, t, library);
  TransmissionLog log = d2d ? deliver_d2d(config, t, caches, demands)
                            : deliver_centralized(config, t, caches, demands, library);

  SimRun run;
  SimReport& r = run.report;
  r.t = t;
  r.file_bits = bits;
  r.strategy = chosen_strategy(config, t);
  r.total_bits = log.total_bits;
  r.transmissions = log.transmissions.size();
  r.measured_rate = ExactRational(log.total_bits, bits);
  r.formula_rate = rate_achievable(config, EvalMode::FormulaAtM);
  r.rate_match = r.measured_rate <= r.formula_rate;

  const ExactRational cache_bits = config.cache_size * ExactRational(bits);
  r.storage_exact = true;
  for (int k = 1; k <= config.n_users; ++k) {
    if (ExactRational(caches.stored_bits(k)) != cache_bits) r.storage_exact = false;
  }

  for (int k = 1; k <= config.n_users; ++k) {
    bool ok = true;
    try {
      const auto files = decode(config, k, caches.user(k), log, demands);
      for (int j = 1; j <= config.demands_per_user; ++j) {
        if (!(files[static_cast<std::size_t>(j - 1)] == library.file(demands.at(k, j)))) ok = false;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DecodeFailure) throw;
      ok = false;
    }
    r.decode_ok.push_back(ok);
  }

  if (d2d) {
    std::map<int, std::int64_t> per_device;
    for (const auto& tx : log.transmissions) per_device[tx.sender.device] += tx.bit_count;
    bool uniform = true;
    for (const auto& [dev, b] : per_device) {
      if (b != per_device.begin()->second) uniform = false;
    }
    r.per_device_uniform = uniform;
  }
  run.log = std::move(log);
  return run;
}

SimReport simulate(const SystemConfig& config, int t, const DemandMatrix& demands,
                   std::uint64_t seed) {
  return simulate_run(config, t, demands, seed).report;
}

}  // namespace cachelab
