#include "cachelab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <sstream>
#include <thread>

#include "cachelab/error.hpp"

namespace cachelab {

// --- regimes ----------------------------------------------------------------

std::string_view to_string(RegimeFamily family) {
  switch (family) {
    case RegimeFamily::CentralizedSingle: return "cen_L1";
    case RegimeFamily::CentralizedMulti: return "cen_L";
    case RegimeFamily::D2DLowDemand: return "d2d_L_low";
    case RegimeFamily::D2DHighDemand: return "d2d_L_high";
    case RegimeFamily::D2DSingle: return "d2d_L1";
  }
  return "?";
}

namespace {

using C = RegimeConstants;

struct Nominal {
  RegimeFamily family;
  std::vector<ExactRational> cuts;  // upper ends of all but the last regime
  std::string note;
};

Nominal nominal_regimes(DeliveryMode mode, int n, int k, int l) {
  const ExactRational nn(n);
  const ExactRational per_user(n, k);
  if (mode == DeliveryMode::Centralized) {
    if (l == 1) {
      std::string note;
      if (std::min(n, k) <= C::cen_single_small_system()) note = "small system: min{N,K} <= 8";
      return {RegimeFamily::CentralizedSingle,
              {C::cen_single_low() * max(ExactRational(1), per_user), C::cen_single_high() * nn},
              note};
    }
    std::string note;
    if (min(ExactRational(n, l), ExactRational(k)) <= ExactRational(C::cen_multi_small_system())) {
      note = "small system: min{N/L,K} <= 10";
    }
    return {RegimeFamily::CentralizedMulti,
            {C::cen_multi_low() * max(ExactRational(l), per_user), C::cen_multi_high() * nn},
            note};
  }
  if (l == 1) {
    std::string note = "thresholds 2/3 and 1 are absolute cache sizes (files)";
    if (n >= k) note += "; N >= K, so only the first and last intervals are populated";
    return {RegimeFamily::D2DSingle,
            {per_user, C::d2d_single_first(), C::d2d_single_second()},
            note};
  }
  if (C::d2d_alpha() * nn >= ExactRational(l)) {
    return {RegimeFamily::D2DLowDemand, {ExactRational(l), C::d2d_low_high() * nn}, "N/2 >= L"};
  }
  return {RegimeFamily::D2DHighDemand, {C::d2d_high_split() * nn}, "N/2 < L"};
}

std::string regime_name(RegimeFamily family, int index) {
  return std::string(family == RegimeFamily::D2DSingle ? "Interval " : "Regime ") +
         std::to_string(index);
}

}  // namespace

std::vector<RegimeLabel> regime_table(DeliveryMode mode, int n_files, int n_users, int demands) {
  const Nominal nom = nominal_regimes(mode, n_files, n_users, demands);
  const ExactRational lo_limit = mode == DeliveryMode::D2D ? ExactRational(n_files, n_users) : ExactRational(0);
  const ExactRational hi_limit(n_files);
  const auto thresholds = C::d2d_single_thresholds();

  std::vector<RegimeLabel> out;
  ExactRational nominal_lo = lo_limit;
  ExactRational lo = min(lo_limit, hi_limit);
  const std::size_t count = nom.cuts.size() + 1;
  bool holder_seen = false;
  for (std::size_t i = 0; i < count; ++i) {
    RegimeLabel r;
    r.family = nom.family;
    r.index = static_cast<int>(i) + 1;
    r.name = regime_name(nom.family, r.index);
    r.nominal_lower = nominal_lo;
    r.nominal_upper = i < nom.cuts.size() ? nom.cuts[i] : hi_limit;
    r.lower = lo;
    r.upper = min(hi_limit, max(lo, r.nominal_upper));
    r.closed_lower = !holder_seen && lo_limit <= r.nominal_upper;
    holder_seen = holder_seen || r.closed_lower;
    if (nom.family == RegimeFamily::D2DSingle) r.gap_threshold = thresholds[i];
    r.note = nom.note;
    nominal_lo = r.nominal_upper;
    lo = r.upper;
    out.push_back(std::move(r));
  }
  return out;
}

RegimeLabel classify_regime(DeliveryMode mode, int n_files, int n_users, int demands,
                            const ExactRational& cache_size) {
  auto table = regime_table(mode, n_files, n_users, demands);
  if (table.front().family == RegimeFamily::D2DSingle) {
    // the first interval is the single point M = N/K
    if (cache_size == ExactRational(n_files, n_users)) return table.front();
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (cache_size <= table[i].nominal_upper) return table[i];
    }
    return table.back();
  }
  for (auto& r : table) {
    if (cache_size <= r.nominal_upper) return r;
  }
  return table.back();
}

RegimeLabel regime_classify(const SystemConfig& config) {
  return classify_regime(config.mode, config.n_files, config.n_users, config.demands_per_user,
                         config.cache_size);
}

// --- gaps -------------------------------------------------------------------

std::string GapRecord::key() const {
  return std::string(to_string(mode)) + " N=" + std::to_string(n_files) +
         " K=" + std::to_string(n_users) + " L=" + std::to_string(demands) +
         " M=" + cache_size.str();
}

namespace {

// ach / lb with the 0/0 convention; nullopt when only the bound vanishes.
std::optional<ExactRational> ratio(const ExactRational& ach, const ExactRational& lb) {
  if (lb.sign() > 0) return ach / lb;
  if (ach.is_zero()) return ExactRational(1);
  return std::nullopt;
}

}  // namespace

GapRecord gap_at(const SystemConfig& config) {
  GapRecord r;
  r.mode = config.mode;
  r.n_files = config.n_files;
  r.n_users = config.n_users;
  r.demands = config.demands_per_user;
  r.cache_size = config.cache_size;
  r.achievable_envelope = rate_achievable(config, EvalMode::CornerEnvelope);
  r.achievable_formula = rate_achievable(config, EvalMode::FormulaAtM);
  r.lower_bound = lower_bound(config).value;
  r.cutset = cutset_bound(config).value;
  r.gap = ratio(r.achievable_envelope, r.lower_bound);
  r.gap_formula = ratio(r.achievable_formula, r.lower_bound);
  r.degenerate = !r.gap.has_value();
  r.regime = regime_classify(config);
  return r;
}

// --- sweeps -----------------------------------------------------------------

std::vector<ExactRational> sweep_memories(DeliveryMode mode, int n_files, int n_users, int demands,
                                          int density) {
  if (density < 1) throw Error(ErrorCode::OutOfRange, "density must be >= 1");
  const ExactRational lo = mode == DeliveryMode::D2D ? ExactRational(n_files, n_users) : ExactRational(0);
  const ExactRational hi(n_files);
  std::vector<ExactRational> ms;
  for (int t = 0; t <= n_users; ++t) ms.emplace_back(static_cast<std::int64_t>(n_files) * t, n_users);
  for (const auto& r : regime_table(mode, n_files, n_users, demands)) {
    ms.push_back(r.lower);
    ms.push_back(r.upper);
  }
  for (int i = 0; i <= density; ++i) ms.emplace_back(static_cast<std::int64_t>(n_files) * i, density);
  std::erase_if(ms, [&](const ExactRational& m) { return m < lo || m > hi; });
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

bool SweepSummary::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.pass; });
}

namespace {

void fold(TheoremCheck& check, const GapRecord& r) {
  if (!r.gap) return;
  ++check.records;
  if (!check.observed_max || *r.gap > *check.observed_max) {
    check.observed_max = *r.gap;
    check.argmax = r.key();
  }
  if (*r.gap > check.threshold) check.pass = false;
  if (r.gap_formula && *r.gap_formula > check.threshold) ++check.formula_exceedances;
}

}  // namespace

SweepSummary summarize(DeliveryMode mode, const std::vector<GapRecord>& records) {
  SweepSummary s;
  s.mode = mode;
  s.records = records.size();
  if (mode == DeliveryMode::Centralized) {
    s.checks.push_back({"cen_L1", ExactRational(8)});
    s.checks.push_back({"cen_L", ExactRational(11)});
  } else {
    s.checks.push_back({"d2d_L", ExactRational(10)});
    const auto thresholds = RegimeConstants::d2d_single_thresholds();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      s.checks.push_back({"d2d_L1_interval" + std::to_string(i + 1), thresholds[i]});
    }
  }
  for (const auto& r : records) {
    if (r.degenerate) {
      ++s.degenerate;
      continue;
    }
    if (!s.max_gap || *r.gap > *s.max_gap) {
      s.max_gap = *r.gap;
      s.argmax = r;
    }
    if (mode == DeliveryMode::Centralized) {
      if (r.demands == 1) fold(s.checks[0], r);
      fold(s.checks[1], r);
    } else {
      fold(s.checks[0], r);
      if (r.demands == 1) fold(s.checks[static_cast<std::size_t>(r.regime.index)], r);
    }
  }
  return s;
}

SweepResult sweep(const SweepGrid& grid, DeliveryMode mode, int jobs) {
  if (grid.n_min < 1 || grid.n_max < grid.n_min || grid.k_min < 1 || grid.k_max < grid.k_min ||
      grid.demand_values.empty()) {
    throw Error(ErrorCode::OutOfRange, "sweep ranges must be nonempty with N, K >= 1");
  }
  struct Family {
    int n, k, l;
  };
  std::vector<Family> families;
  for (int n = grid.n_min; n <= grid.n_max; ++n) {
    std::vector<int> ls;
    for (int v : grid.demand_values) {
      const int l = v == kAllFiles ? n : v;
      if (l >= 1 && l <= n) ls.push_back(l);
    }
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    for (int k = grid.k_min; k <= grid.k_max; ++k) {
      for (int l : ls) families.push_back({n, k, l});
    }
  }

  std::vector<std::vector<GapRecord>> parts(families.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < families.size(); i = next++) {
      const auto& f = families[i];
      auto base = make_config(f.n, f.k, f.l, ExactRational(f.n), mode);
      for (const auto& m : sweep_memories(mode, f.n, f.k, f.l, grid.density)) {
        parts[i].push_back(gap_at(with_cache(base, m)));
      }
    }
  };
  const int threads = std::max(1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  for (auto& p : parts) {
    std::move(p.begin(), p.end(), std::back_inserter(out.records));
  }
  out.summary = summarize(mode, out.records);
  return out;
}

// --- curves -----------------------------------------------------------------

CurveData curve(int n_files, int n_users, int demands, DeliveryMode mode, int points) {
  if (points < 2) throw Error(ErrorCode::OutOfRange, "curve needs at least 2 points");
  const auto base = make_config(n_files, n_users, demands, ExactRational(n_files), mode);
  const ExactRational lo = base.min_cache();
  const ExactRational hi(n_files);
  std::vector<ExactRational> ms;
  for (int i = 0; i < points; ++i) ms.push_back(lo + (hi - lo) * ExactRational(i, points - 1));
  for (const auto& p : corner_points(base)) ms.push_back(p.memory);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  CurveData data{mode, n_files, n_users, demands, {}};
  for (const auto& m : ms) {
    const auto config = with_cache(base, m);
    data.rows.push_back({m, lower_bound(config).value, cutset_bound(config).value,
                         rate_achievable(config, EvalMode::CornerEnvelope),
                         rate_achievable(config, EvalMode::FormulaAtM)});
  }
  return data;
}

std::string curve_csv(const CurveData& data) {
  std::ostringstream os;
  os << "M,lb_new,lb_cutset,rate_envelope,rate_formula,"
        "M_float,lb_new_float,lb_cutset_float,rate_envelope_float,rate_formula_float\n";
  constexpr int kDigits = 6;
  for (const auto& r : data.rows) {
    os << r.memory << ',' << r.lb_new << ',' << r.lb_cutset << ',' << r.rate_envelope << ','
       << r.rate_formula << ',' << r.memory.decimal(kDigits) << ',' << r.lb_new.decimal(kDigits)
       << ',' << r.lb_cutset.decimal(kDigits) << ',' << r.rate_envelope.decimal(kDigits) << ','
       << r.rate_formula.decimal(kDigits) << '\n';
  }
  return os.str();
}

// --- case studies -----------------------------------------------------------

std::string_view to_string(CaseStudy preset) {
  switch (preset) {
    case CaseStudy::CEN_N3K3: return "CEN_N3K3";
    case CaseStudy::CEN_N2K2: return "CEN_N2K2";
    case CaseStudy::D2D_N3K3: return "D2D_N3K3";
  }
  return "?";
}

CaseStudy parse_case_study(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto p : all_case_studies()) {
    if (upper == to_string(p)) return p;
  }
  throw Error(ErrorCode::ParseError, "unknown case study '" + std::string(text) +
                                         "' (expected CEN_N3K3, CEN_N2K2 or D2D_N3K3)");
}

std::vector<CaseStudy> all_case_studies() {
  return {CaseStudy::CEN_N3K3, CaseStudy::CEN_N2K2, CaseStudy::D2D_N3K3};
}

ExactRational default_term_evaluator(const SystemConfig& config, TermFamily family, int s, int ell) {
  if (family == TermFamily::New) {
    return config.mode == DeliveryMode::D2D ? lb_term_d2d(config, s, ell)
                                            : lb_term_centralized(config, s, ell);
  }
  for (const auto& t : cutset_bound(config).terms) {
    if (t.s == s && t.ell == ell) return t.value;
  }
  throw Error(ErrorCode::DomainError, "no cut-set term (s=" + std::to_string(s) +
                                          ", ell=" + std::to_string(ell) + ")");
}

bool CaseStudyResult::all_pass() const {
  return std::all_of(identities.begin(), identities.end(),
                     [](const IdentityCheck& c) { return c.pass; });
}

namespace {

// R >= intercept + slope * M, expected to coincide with the (s, ell) term.
struct PublishedLine {
  const char* name;
  TermFamily family;
  int s;
  int ell;
  ExactRational intercept;
  ExactRational slope;
};

struct Preset {
  DeliveryMode mode;
  int n, k;
  std::vector<PublishedLine> lines;
};

Preset preset_table(CaseStudy preset) {
  switch (preset) {
    case CaseStudy::CEN_N3K3:
      return {DeliveryMode::Centralized, 3, 3,
              {{"3R+6M>=8", TermFamily::New, 2, 1, {8, 3}, -2},
               {"4R+2M>=5", TermFamily::New, 1, 2, {5, 4}, {-1, 2}},
               {"R+3M>=3", TermFamily::Cutset, 3, 1, 3, -3},
               {"3R+M>=3", TermFamily::Cutset, 1, 3, 1, {-1, 3}}}};
    case CaseStudy::CEN_N2K2:
      return {DeliveryMode::Centralized, 2, 2,
              {{"2R+2M>=3", TermFamily::New, 1, 1, {3, 2}, -1},
               {"R+2M>=2", TermFamily::Cutset, 2, 1, 2, -2},
               {"2R+M>=2", TermFamily::Cutset, 1, 2, 1, {-1, 2}}}};
    case CaseStudy::D2D_N3K3:
      return {DeliveryMode::D2D, 3, 3,
              {{"R+6M>=8", TermFamily::New, 2, 1, 8, -6},
               {"8R+6M>=15", TermFamily::New, 1, 2, {15, 8}, {-3, 4}},
               {"2R+M>=3", TermFamily::New, 1, 3, {3, 2}, {-1, 2}}}};
  }
  throw Error(ErrorCode::DomainError, "unknown case study");
}

constexpr int kSamples = 10;

}  // namespace

CaseStudyResult case_study(CaseStudy preset) { return case_study(preset, default_term_evaluator); }

CaseStudyResult case_study(CaseStudy preset, const TermEvaluator& evaluator) {
  const Preset p = preset_table(preset);
  const auto base = make_config(p.n, p.k, 1, ExactRational(p.n), p.mode);
  const ExactRational lo = base.min_cache();
  const ExactRational hi(p.n);
  std::vector<SystemConfig> samples;
  for (int i = 0; i < kSamples; ++i) {
    samples.push_back(with_cache(base, lo + (hi - lo) * ExactRational(i, kSamples - 1)));
  }

  CaseStudyResult result{preset, {}};
  for (const auto& line : p.lines) {
    IdentityCheck check{line.name, true, {}};
    for (const auto& config : samples) {
      const ExactRational expected = line.intercept + line.slope * config.cache_size;
      ExactRational got;
      try {
        got = evaluator(config, line.family, line.s, line.ell);
      } catch (const Error& e) {
        check.pass = false;
        check.detail = e.what();
        break;
      }
      if (got != expected) {
        check.pass = false;
        check.detail = "(s=" + std::to_string(line.s) + ", ell=" + std::to_string(line.ell) +
                       ") at M=" + config.cache_size.str() + ": term " + got.str() +
                       ", published " + expected.str();
        break;
      }
    }
    result.identities.push_back(std::move(check));
  }

  if (preset == CaseStudy::D2D_N3K3) {
    // The optimum at M = 1: maximum of the evaluated family equals 2.
    const auto config = with_cache(base, ExactRational(1));
    ExactRational best(0);
    for (const auto& t : lower_bound(config).terms) {
      best = max(best, evaluator(config, TermFamily::New, t.s, t.ell));
    }
    IdentityCheck check{"R(1)=2", best == ExactRational(2), {}};
    if (!check.pass) check.detail = "bound at M=1 is " + best.str();
    result.identities.push_back(std::move(check));
  }
  return result;
}

}  // namespace cachelab
