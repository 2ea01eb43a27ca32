#include <gtest/gtest.h>

#include "cachelab/bounds.hpp"
#include "cachelab/error.hpp"

using namespace cachelab;

namespace {

ExactRational Q(const char* s) { return ExactRational::parse(s); }

SystemConfig cen(int n, int k, int l, const ExactRational& m) {
  return make_config(n, k, l, m, DeliveryMode::Centralized);
}
SystemConfig d2d(int n, int k, int l, const ExactRational& m) {
  return make_config(n, k, l, m, DeliveryMode::D2D);
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

// Values computed once with an independent Fraction-based script and frozen.
struct Frozen {
  DeliveryMode mode;
  int n, k, l;
  const char* m;
  const char* lb_new;
  const char* lb_cutset;
  const char* rate_envelope;
  const char* rate_formula;
};

const Frozen kFrozen[] = {
    {DeliveryMode::Centralized, 5, 5, 1, "1/2", "14/5", "5/2", "7/2", "3"},
    {DeliveryMode::Centralized, 5, 5, 1, "1", "4/3", "1", "2", "2"},
    {DeliveryMode::Centralized, 5, 5, 1, "3/2", "5/6", "7/10", "3/2", "7/5"},
    {DeliveryMode::Centralized, 5, 5, 1, "2", "2/3", "3/5", "1", "1"},
    {DeliveryMode::Centralized, 5, 5, 1, "5/2", "1/2", "1/2", "3/4", "5/7"},
    {DeliveryMode::Centralized, 5, 5, 1, "5", "0", "0", "0", "0"},
    {DeliveryMode::Centralized, 5, 5, 2, "1/2", "11/3", "7/2", "17/4", "9/2"},
    {DeliveryMode::Centralized, 5, 5, 2, "1", "8/3", "2", "7/2", "4"},
    {DeliveryMode::Centralized, 5, 5, 2, "3/2", "5/3", "7/6", "11/4", "14/5"},
    {DeliveryMode::Centralized, 5, 5, 2, "2", "5/4", "1", "2", "2"},
    {DeliveryMode::Centralized, 5, 5, 2, "5/2", "1", "5/6", "3/2", "10/7"},
    {DeliveryMode::Centralized, 5, 5, 2, "5", "0", "0", "0", "0"},
    {DeliveryMode::Centralized, 7, 4, 3, "1/2", "17/3", "11/2", "44/7", "13/2"},
    {DeliveryMode::Centralized, 7, 4, 3, "1", "14/3", "4", "39/7", "6"},
    {DeliveryMode::Centralized, 7, 4, 3, "3/2", "11/3", "5/2", "34/7", "66/13"},
    {DeliveryMode::Centralized, 7, 4, 3, "7/4", "19/6", "7/4", "9/2", "9/2"},
    {DeliveryMode::Centralized, 7, 4, 3, "2", "8/3", "5/3", "29/7", "4"},
    {DeliveryMode::Centralized, 7, 4, 3, "7/2", "3/2", "7/6", "2", "2"},
    {DeliveryMode::Centralized, 7, 4, 3, "7", "0", "0", "0", "0"},
    {DeliveryMode::Centralized, 4, 7, 2, "1/2", "3", "3", "271/80", "7/2"},
    {DeliveryMode::Centralized, 4, 7, 2, "4/7", "20/7", "20/7", "33/10", "24/7"},
    {DeliveryMode::Centralized, 4, 7, 2, "1", "2", "2", "111/40", "3"},
    {DeliveryMode::Centralized, 4, 7, 2, "3/2", "3/2", "5/4", "173/80", "70/29"},
    {DeliveryMode::Centralized, 4, 7, 2, "2", "1", "1", "31/20", "14/9"},
    {DeliveryMode::Centralized, 4, 7, 2, "4", "0", "0", "0", "0"},
    {DeliveryMode::D2D, 5, 5, 1, "1", "4", "5/2", "4", "4"},
    {DeliveryMode::D2D, 5, 5, 1, "3/2", "25/18", "10/9", "11/4", "7/3"},
    {DeliveryMode::D2D, 5, 5, 1, "2", "5/6", "3/4", "3/2", "3/2"},
    {DeliveryMode::D2D, 5, 5, 1, "5/2", "5/8", "5/8", "13/12", "1"},
    {DeliveryMode::D2D, 5, 5, 1, "5", "0", "0", "0", "0"},
    {DeliveryMode::D2D, 5, 5, 2, "1", "5", "5", "5", "5"},
    {DeliveryMode::D2D, 5, 5, 2, "3/2", "25/9", "5/3", "4", "14/3"},
    {DeliveryMode::D2D, 5, 5, 2, "2", "25/16", "5/4", "3", "3"},
    {DeliveryMode::D2D, 5, 5, 2, "5/2", "5/4", "25/24", "13/6", "2"},
    {DeliveryMode::D2D, 5, 5, 2, "5", "0", "0", "0", "0"},
    {DeliveryMode::D2D, 7, 4, 3, "7/4", "7", "7", "7", "7"},
    {DeliveryMode::D2D, 7, 4, 3, "2", "16/3", "4", "45/7", "7"},
    {DeliveryMode::D2D, 7, 4, 3, "7/2", "2", "14/9", "3", "3"},
    {DeliveryMode::D2D, 7, 4, 3, "7", "0", "0", "0", "0"},
    {DeliveryMode::D2D, 4, 7, 2, "4/7", "4", "4", "4", "4"},
    {DeliveryMode::D2D, 4, 7, 2, "1", "14/5", "14/5", "27/8", "4"},
    {DeliveryMode::D2D, 4, 7, 2, "3/2", "7/4", "35/24", "127/48", "10/3"},
    {DeliveryMode::D2D, 4, 7, 2, "2", "7/6", "7/6", "23/12", "2"},
    {DeliveryMode::D2D, 4, 7, 2, "4", "0", "0", "0", "0"},
    {DeliveryMode::Centralized, 9, 6, 9, "1/2", "17/2", "17/2", "17/2", "17/2"},
    {DeliveryMode::Centralized, 9, 6, 9, "1", "8", "8", "8", "8"},
    {DeliveryMode::Centralized, 9, 6, 9, "3/2", "15/2", "15/2", "15/2", "15/2"},
    {DeliveryMode::Centralized, 9, 6, 9, "2", "7", "7", "7", "7"},
    {DeliveryMode::Centralized, 9, 6, 9, "9/2", "9/2", "9/2", "9/2", "9/2"},
    {DeliveryMode::Centralized, 9, 6, 9, "9", "0", "0", "0", "0"},
    {DeliveryMode::D2D, 9, 6, 9, "3/2", "9", "9", "9", "9"},
    {DeliveryMode::D2D, 9, 6, 9, "2", "42/5", "42/5", "42/5", "9"},
    {DeliveryMode::D2D, 9, 6, 9, "9/2", "27/5", "27/5", "27/5", "9"},
    {DeliveryMode::D2D, 9, 6, 9, "9", "0", "0", "0", "0"},
};

// Corollary 1 written out on its own: s over [1:K], ell over [1:ceil(N/s)].
ExactRational single_demand_bound(int n, int k, const ExactRational& m) {
  ExactRational best(0);
  for (int s = 1; s <= k; ++s) {
    for (int ell = 1; ell <= (n + s - 1) / s; ++ell) {
      const int mu = std::min((n + ell - 1) / ell, k) - s;
      const int spill = std::max(n - ell * s, 0);
      ExactRational v = ExactRational(n) - ExactRational(s) * m - ExactRational(std::max(n - k * ell, 0));
      if (spill > 0) v -= ExactRational(static_cast<std::int64_t>(mu) * spill, s + mu);
      best = max(best, v / ExactRational(ell));
    }
  }
  return best;
}

std::vector<ExactRational> memory_grid(int n, int k, DeliveryMode mode) {
  std::vector<ExactRational> ms;
  const ExactRational lo = mode == DeliveryMode::D2D ? ExactRational(n, k) : ExactRational(0);
  for (int i = 0; i <= 4 * n; ++i) {
    const ExactRational m(i, 4);
    if (m >= lo) ms.push_back(m);
  }
  for (int t = 0; t <= k; ++t) {
    const ExactRational m(static_cast<std::int64_t>(n) * t, k);
    if (m >= lo) ms.push_back(m);
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

}  // namespace

TEST(Bounds, FrozenOracleTable) {
  for (const auto& f : kFrozen) {
    const auto c = make_config(f.n, f.k, f.l, Q(f.m), f.mode);
    SCOPED_TRACE(std::string(to_string(f.mode)) + " N=" + std::to_string(f.n) + " K=" +
                 std::to_string(f.k) + " L=" + std::to_string(f.l) + " M=" + f.m);
    EXPECT_EQ(lower_bound(c).value, Q(f.lb_new));
    EXPECT_EQ(cutset_bound(c).value, Q(f.lb_cutset));
    EXPECT_EQ(rate_achievable(c, EvalMode::CornerEnvelope), Q(f.rate_envelope));
    EXPECT_EQ(rate_achievable(c, EvalMode::FormulaAtM), Q(f.rate_formula));
  }
}

TEST(Bounds, CentralizedN3K3EnumeratesAllTerms) {
  const auto r = lb_centralized(cen(3, 3, 1, ExactRational(1)));
  EXPECT_EQ(r.value, Q("3/4"));
  EXPECT_EQ(r.best_s, 1);
  EXPECT_EQ(r.best_ell, 2);
  EXPECT_EQ(r.mu_at_best, 1);
  // (s,ell): (1,1) 2/3, (1,2) 3/4, (1,3) 2/3, (2,1) 2/3, (2,2) ..., (3,1) 0
  std::map<std::pair<int, int>, ExactRational> by_term;
  for (const auto& t : r.terms) by_term[{t.s, t.ell}] = t.value;
  EXPECT_EQ(by_term.at({1, 1}), Q("2/3"));
  EXPECT_EQ(by_term.at({1, 3}), Q("2/3"));
  EXPECT_EQ(by_term.at({2, 1}), Q("2/3"));
  EXPECT_EQ(by_term.at({3, 1}), Q("0"));
}

TEST(Bounds, PublishedSmallExamples) {
  EXPECT_EQ(lb_centralized(cen(2, 2, 1, Q("1/2"))).value, ExactRational(1));
  EXPECT_EQ(lb_d2d(d2d(3, 3, 1, ExactRational(1))).value, ExactRational(2));
  EXPECT_EQ(lb_d2d(d2d(5, 5, 1, ExactRational(1))).value, ExactRational(4));
  EXPECT_EQ(lb_cutset_centralized(cen(3, 3, 1, ExactRational(1))).value, Q("2/3"));
  // s = 2, ell = 2: (3 - 2M) / (2 * 1/3) = 3/2 at M = 1
  EXPECT_EQ(lb_cutset_d2d(d2d(3, 3, 1, ExactRational(1))).value, Q("3/2"));
}

TEST(Bounds, SymbolicTermForms) {
  EXPECT_EQ(lb_term_centralized_form(3, 3, 1, 2, 1), (LinearInM{Q("8/3"), -2}));
  EXPECT_EQ(lb_term_centralized_form(3, 3, 1, 1, 2), (LinearInM{Q("5/4"), Q("-1/2")}));
  EXPECT_EQ(lb_term_centralized_form(2, 2, 1, 1, 1), (LinearInM{Q("3/2"), -1}));
  EXPECT_EQ(lb_term_d2d_form(3, 3, 1, 2, 1), (LinearInM{8, -6}));
  EXPECT_EQ(lb_term_d2d_form(3, 3, 1, 1, 2), (LinearInM{Q("15/8"), Q("-3/4")}));
  EXPECT_EQ(lb_term_d2d_form(3, 3, 1, 1, 3), (LinearInM{Q("3/2"), Q("-1/2")}));
}

TEST(Bounds, TermDomainsAreEnforced) {
  const auto c = cen(3, 3, 1, ExactRational(1));
  EXPECT_EQ(code_of([&] { lb_term_centralized(c, 0, 1); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([&] { lb_term_centralized(c, 4, 1); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([&] { lb_term_centralized(c, 2, 3); }), ErrorCode::DomainError);
  const auto d = d2d(3, 3, 1, ExactRational(1));
  EXPECT_EQ(code_of([&] { lb_term_d2d(d, 3, 1); }), ErrorCode::DomainError);
}

TEST(Bounds, ModeMismatch) {
  EXPECT_EQ(code_of([] { lb_d2d(cen(3, 3, 1, ExactRational(1))); }), ErrorCode::ModeMismatch);
  EXPECT_EQ(code_of([] { rate_ach_centralized(d2d(3, 3, 1, ExactRational(1)), EvalMode::FormulaAtM); }),
            ErrorCode::ModeMismatch);
}

TEST(Bounds, AchievableExamples) {
  EXPECT_EQ(rate_ach_centralized(cen(5, 5, 1, ExactRational(1)), EvalMode::FormulaAtM), ExactRational(2));
  EXPECT_EQ(rate_ach_centralized(cen(3, 3, 2, ExactRational(0)), EvalMode::FormulaAtM), ExactRational(3));
  EXPECT_EQ(rate_ach_centralized(cen(3, 3, 2, ExactRational(0)), EvalMode::CornerEnvelope), ExactRational(3));
  EXPECT_EQ(rate_ach_d2d(d2d(5, 5, 1, ExactRational(1))), ExactRational(4));
  EXPECT_EQ(rate_ach_d2d(d2d(3, 3, 2, ExactRational(1))), ExactRational(3));
  EXPECT_EQ(rate_ach_d2d(d2d(3, 3, 2, ExactRational(3))), ExactRational(0));
}

TEST(Envelope, Interpolation) {
  const std::vector<EnvelopePoint> line{{0, 3}, {3, 0}};
  EXPECT_EQ(convex_envelope(line, ExactRational(1)), ExactRational(2));
  // (1,3) lies above the chord from (0,4) to (2,1), so it is not on the hull
  const std::vector<EnvelopePoint> pts{{0, 4}, {1, 3}, {2, 1}, {4, 0}};
  EXPECT_EQ(convex_envelope(pts, ExactRational(1)), Q("5/2"));
  EXPECT_EQ(convex_envelope(pts, ExactRational(2)), ExactRational(1));
  EXPECT_EQ(convex_envelope(pts, ExactRational(3)), Q("1/2"));
  EXPECT_EQ(code_of([&] { convex_envelope(pts, ExactRational(5)); }), ErrorCode::DomainError);
}

TEST(Envelope, HitsCornersExactly) {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 1; k <= 8; ++k) {
      for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
        const auto base = make_config(n, k, 1, ExactRational(n), mode);
        const auto pts = corner_points(base);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const auto& p = pts[i];
          const auto c = with_cache(base, p.memory);
          EXPECT_EQ(rate_achievable(c, EvalMode::FormulaAtM), p.rate);
          const auto env = rate_achievable(c, EvalMode::CornerEnvelope);
          // the caps (N/(KL) centralized, N for D2D) break convexity, so interior
          // corners may sit above the hull
          if (i == 0 || i + 1 == pts.size()) {
            EXPECT_EQ(env, p.rate) << n << " " << k;
          } else {
            EXPECT_LE(env, p.rate) << n << " " << k;
          }
        }
      }
    }
  }
}

TEST(BoundProperties, SandwichDominanceMonotonicity) {
  for (int n = 1; n <= 9; ++n) {
    for (int k = 1; k <= 9; ++k) {
      for (int l : {1, 2, 3, n}) {
        if (l > n) continue;
        for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
          std::optional<ExactRational> prev_lb, prev_cut, prev_env, prev_formula;
          for (const auto& m : memory_grid(n, k, mode)) {
            const auto c = make_config(n, k, l, m, mode);
            const auto lb = lower_bound(c).value;
            const auto cut = cutset_bound(c).value;
            const auto env = rate_achievable(c, EvalMode::CornerEnvelope);
            const auto formula = rate_achievable(c, EvalMode::FormulaAtM);
            SCOPED_TRACE(std::string(to_string(mode)) + " N=" + std::to_string(n) + " K=" +
                         std::to_string(k) + " L=" + std::to_string(l) + " M=" + m.str());
            ASSERT_GE(lb, cut);
            ASSERT_LE(lb, env);
            ASSERT_GE(cut.sign(), 0);
            if (prev_lb) {
              ASSERT_LE(lb, *prev_lb);
              ASSERT_LE(cut, *prev_cut);
              ASSERT_LE(env, *prev_env);
              ASSERT_LE(formula, *prev_formula);
            }
            prev_lb = lb;
            prev_cut = cut;
            prev_env = env;
            prev_formula = formula;
          }
        }
      }
    }
  }
}

TEST(BoundProperties, VanishAtFullCache) {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= 10; ++k) {
      for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
        const auto c = make_config(n, k, 1, ExactRational(n), mode);
        EXPECT_EQ(lower_bound(c).value, ExactRational(0));
        EXPECT_EQ(cutset_bound(c).value, ExactRational(0));
        EXPECT_EQ(rate_achievable(c, EvalMode::CornerEnvelope), ExactRational(0));
      }
    }
  }
}

TEST(BoundProperties, SingleDemandMatchesCorollaryForm) {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= 10; ++k) {
      for (const auto& m : memory_grid(n, k, DeliveryMode::Centralized)) {
        ASSERT_EQ(lb_centralized(cen(n, k, 1, m)).value, single_demand_bound(n, k, m))
            << "N=" << n << " K=" << k << " M=" << m;
      }
    }
  }
}

TEST(BoundProperties, D2DTightAtMinimumStorage) {
  for (int n = 1; n <= 14; ++n) {
    for (int k = 1; k <= 14; ++k) {
      const auto c = d2d(n, k, 1, ExactRational(n, k));
      const ExactRational expected(std::min(k - 1, n));
      EXPECT_EQ(lb_d2d(c).value, expected) << n << " " << k;
      EXPECT_EQ(rate_ach_d2d(c, EvalMode::CornerEnvelope), expected) << n << " " << k;
    }
  }
}

TEST(BoundProperties, TermsCarryMuAndDomain) {
  const auto c = cen(7, 4, 2, ExactRational(1));
  for (const auto& t : lb_centralized(c).terms) {
    EXPECT_EQ(t.mu, bound_mu(7, 4, 2, t.s, t.ell));
    EXPECT_LE(t.s, std::min<std::int64_t>(ceil_div(7, 2), 4));
    EXPECT_LE(t.ell, ceil_div(7, 2 * t.s));
  }
}

TEST(BoundProperties, TieBreakPrefersSmallestS) {
  // At M = N every term is <= 0 and the clamped value is 0; the reported
  // argmax is the first maximal term in (s, ell) order.
  const auto r = lb_centralized(cen(4, 4, 1, ExactRational(4)));
  EXPECT_EQ(r.value, ExactRational(0));
  ExactRational best = r.terms.front().value;
  std::pair<int, int> arg{r.terms.front().s, r.terms.front().ell};
  for (const auto& t : r.terms) {
    if (t.value > best) {
      best = t.value;
      arg = {t.s, t.ell};
    }
  }
  EXPECT_EQ(std::make_pair(r.best_s, r.best_ell), arg);
}
