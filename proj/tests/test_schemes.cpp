#include <gtest/gtest.h>

#include "cachelab/bounds.hpp"
#include "cachelab/error.hpp"
#include "cachelab/schemes.hpp"

using namespace cachelab;

namespace {

SystemConfig corner(int n, int k, int l, int t, DeliveryMode mode) {
  return make_config(n, k, l, ExactRational(static_cast<std::int64_t>(n) * t, k), mode);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected cachelab::Error";
  return ErrorCode::DomainError;
}

}  // namespace

TEST(Centralized, N5K5T1CodedDelivery) {
  const auto c = corner(5, 5, 1, 1, DeliveryMode::Centralized);
  const auto run = simulate_run(c, 1, worst_case_demands(c), 0);
  EXPECT_EQ(run.report.strategy, DeliveryStrategy::Coded);
  EXPECT_EQ(run.log.transmissions.size(), 10U);
  for (const auto& tx : run.log.transmissions) {
    EXPECT_EQ(tx.bit_count, run.report.file_bits / 5);
    EXPECT_TRUE(tx.sender.is_server());
    ASSERT_TRUE(tx.subset);
    EXPECT_EQ(tx.subset->size(), 2U);
  }
  EXPECT_EQ(run.report.measured_rate, ExactRational(2));
  EXPECT_TRUE(run.report.all_decoded());
  EXPECT_TRUE(run.report.storage_exact);
}

TEST(Centralized, PlacementStoresSubfilesContainingUser) {
  const auto c = corner(5, 5, 1, 1, DeliveryMode::Centralized);
  const Library lib(5, default_file_bits(c, 1), 3);
  const auto caches = place_centralized(c, 1, lib);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(caches.user(k).size(), 5U);
    EXPECT_EQ(caches.stored_bits(k), lib.file_bits());
    for (const auto& [id, bits] : caches.user(k)) {
      EXPECT_EQ(id.subset, Subset{k});
      EXPECT_FALSE(id.piece_owner);
    }
  }
  const auto empty = place_centralized(corner(5, 5, 1, 0, DeliveryMode::Centralized), 0,
                                       Library(5, 8, 3));
  for (int k = 1; k <= 5; ++k) EXPECT_TRUE(empty.user(k).empty());
}

TEST(Centralized, UncodedWinsAtZeroCache) {
  const auto c = corner(3, 3, 2, 0, DeliveryMode::Centralized);
  const auto run = simulate_run(c, 0, worst_case_demands(c), 0);
  EXPECT_EQ(run.report.strategy, DeliveryStrategy::Fallback);
  EXPECT_EQ(run.log.transmissions.size(), 3U);
  EXPECT_EQ(run.report.measured_rate, ExactRational(3));
  EXPECT_TRUE(run.report.all_decoded());
}

TEST(Centralized, ParityFallbackAboveZeroCache) {
  // N=2, K=6, L=2, t=1: coded costs 2*15/6 = 5, serving both files costs 2*5/6
  const auto c = corner(2, 6, 2, 1, DeliveryMode::Centralized);
  EXPECT_EQ(chosen_strategy(c, 1), DeliveryStrategy::Fallback);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = simulate(c, 1, random_demands(c, seed), seed);
    EXPECT_TRUE(r.all_decoded());
    EXPECT_EQ(r.measured_rate, ExactRational(5, 3));
    EXPECT_EQ(r.measured_rate, rate_ach_centralized(c, EvalMode::FormulaAtM));
  }
}

TEST(Centralized, WideFieldFallback) {
  // C(12,5) + C(11,5) = 792 + 462 blocks needs the 16-bit field
  const auto c = corner(2, 12, 2, 5, DeliveryMode::Centralized);
  ASSERT_EQ(chosen_strategy(c, 5), DeliveryStrategy::Fallback);
  EXPECT_EQ((default_file_bits(c, 5) / binomial(12, 5) / 8) % 2, 0);
  const auto r = simulate(c, 5, random_demands(c, 4), 4);
  EXPECT_TRUE(r.all_decoded());
  EXPECT_EQ(r.measured_rate, rate_ach_centralized(c, EvalMode::FormulaAtM));
}

TEST(Centralized, FullCacheSendsNothing) {
  const auto c = corner(4, 3, 2, 3, DeliveryMode::Centralized);
  const auto run = simulate_run(c, 3, worst_case_demands(c), 0);
  EXPECT_TRUE(run.log.transmissions.empty());
  EXPECT_EQ(run.report.measured_rate, ExactRational(0));
  EXPECT_TRUE(run.report.all_decoded());
}

TEST(D2D, N5K5T1CodedDelivery) {
  const auto c = corner(5, 5, 1, 1, DeliveryMode::D2D);
  const auto run = simulate_run(c, 1, worst_case_demands(c), 0);
  EXPECT_EQ(run.log.transmissions.size(), 20U);
  EXPECT_EQ(run.report.measured_rate, ExactRational(4));
  EXPECT_TRUE(run.report.all_decoded());
  ASSERT_TRUE(run.report.per_device_uniform);
  EXPECT_TRUE(*run.report.per_device_uniform);
  for (const auto& tx : run.log.transmissions) {
    ASSERT_TRUE(tx.subset);
    EXPECT_TRUE(std::binary_search(tx.subset->begin(), tx.subset->end(), tx.sender.device));
  }
}

TEST(D2D, PiecesPerFile) {
  const auto c = corner(4, 4, 1, 2, DeliveryMode::D2D);
  const Library lib(4, default_file_bits(c, 2), 1);
  const auto caches = place_d2d(c, 2, lib);
  std::set<SubfilePieceId> file_one;
  for (int k = 1; k <= 4; ++k) {
    for (const auto& [id, bits] : caches.user(k)) {
      ASSERT_TRUE(id.piece_owner);
      EXPECT_TRUE(std::binary_search(id.subset.begin(), id.subset.end(), *id.piece_owner));
      EXPECT_EQ(static_cast<std::int64_t>(bits.size()), lib.file_bits() / 12);
      if (id.file == 1) file_one.insert(id);
    }
  }
  EXPECT_EQ(file_one.size(), 12U);
}

TEST(D2D, BroadcastWinsWhenDemandIsHigh) {
  const auto c = corner(3, 3, 2, 1, DeliveryMode::D2D);
  const auto run = simulate_run(c, 1, worst_case_demands(c), 0);
  EXPECT_EQ(run.report.strategy, DeliveryStrategy::Fallback);
  EXPECT_EQ(run.report.measured_rate, ExactRational(3));
  EXPECT_TRUE(run.report.all_decoded());
}

TEST(D2D, PayloadsDependOnlyOnSenderCache) {
  for (int n = 1; n <= 5; ++n) {
    for (int k = 2; k <= 5; ++k) {
      for (int l = 1; l <= std::min(n, 3); ++l) {
        for (int t = 1; t <= k; ++t) {
          const auto c = corner(n, k, l, t, DeliveryMode::D2D);
          const Library lib(n, default_file_bits(c, t), 9);
          const auto caches = place_d2d(c, t, lib);
          const auto demands = random_demands(c, 11);
          const auto log = deliver_d2d(c, t, caches, demands);
          for (const auto& tx : log.transmissions) {
            ASSERT_FALSE(tx.sender.is_server());
            ASSERT_EQ(reencode_from_sender(c, t, tx, caches.user(tx.sender.device), demands), tx.payload);
          }
        }
      }
    }
  }
}

TEST(Schemes, DecodeAndRateOverSmallGrid) {
  for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
    for (int n = 1; n <= 5; ++n) {
      for (int k = 1; k <= 5; ++k) {
        for (int l = 1; l <= std::min(n, 3); ++l) {
          for (int t = mode == DeliveryMode::D2D ? 1 : 0; t <= k; ++t) {
            const auto c = corner(n, k, l, t, mode);
            const auto expected = rate_achievable(c, EvalMode::FormulaAtM);
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
              const auto r = simulate(c, t, random_demands(c, seed), seed);
              ASSERT_TRUE(r.all_decoded()) << to_string(mode) << n << k << l << t;
              ASSERT_EQ(r.measured_rate, expected) << to_string(mode) << n << k << l << t;
              ASSERT_TRUE(r.rate_match);
              ASSERT_TRUE(r.storage_exact);
            }
          }
        }
      }
    }
  }
}

TEST(Schemes, RateIsDemandIndependent) {
  const auto c = corner(6, 4, 2, 2, DeliveryMode::Centralized);
  const auto worst = simulate(c, 2, worst_case_demands(c), 0).measured_rate;
  // repeated files across users do not change the transmitted amount
  const DemandMatrix same({{1, 2}, {1, 2}, {1, 2}, {1, 2}}, 6);
  EXPECT_EQ(simulate(c, 2, same, 0).measured_rate, worst);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    EXPECT_EQ(simulate(c, 2, random_demands(c, seed), seed).measured_rate, worst);
  }
}

TEST(Schemes, DecodeRecoversExactFiles) {
  const auto c = corner(3, 3, 1, 1, DeliveryMode::D2D);
  const DemandMatrix demands({{1}, {2}, {3}}, 3);
  const Library lib(3, default_file_bits(c, 1), 5);
  const auto caches = place_d2d(c, 1, lib);
  const auto log = deliver_d2d(c, 1, caches, demands);
  for (int k = 1; k <= 3; ++k) {
    const auto files = decode(c, k, caches.user(k), log, demands);
    ASSERT_EQ(files.size(), 1U);
    EXPECT_EQ(files[0], lib.file(k));
  }
}

TEST(Schemes, DecodeFailureNamesMissingPiece) {
  const auto c = corner(5, 5, 1, 1, DeliveryMode::Centralized);
  const auto demands = worst_case_demands(c);
  const Library lib(5, default_file_bits(c, 1), 0);
  const auto caches = place_centralized(c, 1, lib);
  auto log = deliver_centralized(c, 1, caches, demands, lib);
  log.transmissions.erase(log.transmissions.begin());  // drops the {1,2} multicast
  try {
    decode(c, 1, caches.user(1), log, demands);
    FAIL() << "expected DecodeFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecodeFailure);
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
}

TEST(Schemes, Errors) {
  const auto non_corner = make_config(5, 3, 1, ExactRational(1), DeliveryMode::Centralized);
  EXPECT_EQ(code_of([&] { placement_t(non_corner); }), ErrorCode::NotCorner);
  EXPECT_EQ(code_of([&] { simulate(non_corner, 1, worst_case_demands(non_corner), 0); }),
            ErrorCode::NotCorner);

  const auto c = corner(5, 5, 1, 1, DeliveryMode::Centralized);
  EXPECT_EQ(code_of([&] { place_centralized(c, 1, Library(5, 44, 0)); }), ErrorCode::DivisibilityError);
  auto custom = c;
  custom.file_bits = 80;
  EXPECT_EQ(simulate(custom, 1, worst_case_demands(c), 0).file_bits, 80);

  const Library lib(5, 40, 0);
  auto caches = place_centralized(c, 1, lib);
  caches.placement_t = 2;
  EXPECT_EQ(code_of([&] { deliver_centralized(c, 1, caches, worst_case_demands(c), lib); }),
            ErrorCode::PlacementMismatch);
  EXPECT_EQ(code_of([&] { place_d2d(c, 1, lib); }), ErrorCode::ModeMismatch);
}

TEST(Schemes, DefaultFileBitsDivides) {
  for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
    for (int k = 1; k <= 10; ++k) {
      for (int t = mode == DeliveryMode::D2D ? 1 : 0; t <= k; ++t) {
        const auto c = corner(k, k, 1, t, mode);
        const auto b = default_file_bits(c, t);
        const auto pieces = binomial(k, t) * (mode == DeliveryMode::D2D ? t : 1);
        EXPECT_EQ(b % (8 * pieces), 0) << k << " " << t;
      }
    }
  }
}

TEST(Schemes, SameSeedSameLog) {
  const auto c = corner(4, 4, 2, 2, DeliveryMode::D2D);
  const auto demands = random_demands(c, 5);
  const auto a = simulate_run(c, 2, demands, 77).log;
  const auto b = simulate_run(c, 2, demands, 77).log;
  ASSERT_EQ(a.transmissions.size(), b.transmissions.size());
  for (std::size_t i = 0; i < a.transmissions.size(); ++i) {
    EXPECT_EQ(a.transmissions[i].payload, b.transmissions[i].payload);
  }
}
