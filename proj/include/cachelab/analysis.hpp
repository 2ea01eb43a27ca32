#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cachelab/bounds.hpp"
#include "cachelab/model.hpp"
#include "cachelab/rational.hpp"

namespace cachelab {

// --- regimes ----------------------------------------------------------------

/// Which gap argument a config falls under.
enum class RegimeFamily {
  CentralizedSingle,  // L = 1 centralized
  CentralizedMulti,   // L > 1 centralized
  D2DLowDemand,       // L > 1 D2D with N/2 >= L
  D2DHighDemand,      // L > 1 D2D with N/2 < L
  D2DSingle,          // L = 1 D2D, piecewise thresholds
};

std::string_view to_string(RegimeFamily family);

/// One M-interval of a family. Intervals are left-open and right-closed
/// except the first non-empty one, which also contains its lower end, so
/// boundary values belong to the lower-indexed regime.
struct RegimeLabel {
  RegimeFamily family = RegimeFamily::CentralizedSingle;
  int index = 1;  // 1-based
  std::string name;
  /// Interval as written in the gap argument, before intersecting with the
  /// admissible range [min_cache, N].
  ExactRational nominal_lower;
  ExactRational nominal_upper;
  /// Intersection with [min_cache, N].
  ExactRational lower;
  ExactRational upper;
  /// Set on the regime that holds min_cache: the first whose nominal upper
  /// end reaches it. Regimes before it are empty.
  bool closed_lower = false;
  /// D2D L = 1 only: the per-interval gap threshold.
  std::optional<ExactRational> gap_threshold;
  /// Side conditions of the argument, e.g. the small-system case split.
  std::string note;

  bool empty() const { return !closed_lower && lower == upper; }
};

/// The family's regimes for (mode, N, K, L), in index order. Their effective
/// intervals partition [min_cache, N].
std::vector<RegimeLabel> regime_table(DeliveryMode mode, int n_files, int n_users, int demands);

/// Classification without config validation (M may lie below the admissible
/// minimum). The D2D L = 1 family puts M = N/K alone in the first interval
/// and otherwise compares M against 2/3 and 1 in files.
RegimeLabel classify_regime(DeliveryMode mode, int n_files, int n_users, int demands,
                            const ExactRational& cache_size);
RegimeLabel regime_classify(const SystemConfig& config);

/// Constants of the gap arguments, exact.
struct RegimeConstants {
  static ExactRational cen_multi_low() { return {51, 40}; }      // 1.275 * max{L, N/K}
  static ExactRational cen_multi_high() { return {1, 5}; }       // 0.2 * N
  static ExactRational cen_single_low() { return {101, 100}; }   // 1.01 * max{1, N/K}
  static ExactRational cen_single_high() { return {1, 8}; }      // 0.125 * N
  static ExactRational d2d_alpha() { return {1, 2}; }            // low demand when alpha*N >= L
  static ExactRational d2d_low_high() { return {1, 5}; }         // 0.2 * N
  static ExactRational d2d_high_split() { return {1, 3}; }       // N / 3
  static ExactRational d2d_single_first() { return {2, 3}; }     // files
  static ExactRational d2d_single_second() { return {1}; }       // files
  static int cen_multi_small_system() { return 10; }             // min{N/L, K} <= 10
  static int cen_single_small_system() { return 8; }             // min{N, K} <= 8
  static std::vector<ExactRational> d2d_single_thresholds() { return {1, 3, 6, 8}; }
};

// --- gaps -------------------------------------------------------------------

struct GapRecord {
  DeliveryMode mode = DeliveryMode::Centralized;
  int n_files = 0;
  int n_users = 0;
  int demands = 0;
  ExactRational cache_size;

  ExactRational achievable_envelope;
  ExactRational achievable_formula;
  ExactRational lower_bound;
  ExactRational cutset;
  /// achievable / lower_bound; 1 when both are 0; empty when degenerate.
  std::optional<ExactRational> gap;
  std::optional<ExactRational> gap_formula;
  /// achievable > 0 while lower_bound = 0.
  bool degenerate = false;
  RegimeLabel regime;

  std::string key() const;  // "cen N=5 K=5 L=1 M=1"
};

GapRecord gap_at(const SystemConfig& config);

// --- sweeps -----------------------------------------------------------------

/// Marker in SweepGrid::demand_values for "L = N".
inline constexpr int kAllFiles = -1;

struct SweepGrid {
  int n_min = 1, n_max = 1;
  int k_min = 1, k_max = 1;
  /// Values of L; kAllFiles stands for L = N. Values above N are skipped.
  std::vector<int> demand_values{1};
  /// Uniform refinement points per unit of M/N.
  int density = 20;
};

/// Admissible M values for one (mode, N, K, L): every corner, every regime
/// boundary and the uniform refinement, sorted and deduplicated.
std::vector<ExactRational> sweep_memories(DeliveryMode mode, int n_files, int n_users, int demands,
                                          int density);

struct TheoremCheck {
  std::string name;  // e.g. "cen_L1"
  ExactRational threshold;
  std::size_t records = 0;
  std::optional<ExactRational> observed_max;
  std::string argmax;  // record key
  bool pass = true;
  /// Records whose closed-form (non-envelope) gap exceeds the threshold;
  /// reported only.
  std::size_t formula_exceedances = 0;
};

struct SweepSummary {
  DeliveryMode mode = DeliveryMode::Centralized;
  std::size_t records = 0;
  std::size_t degenerate = 0;
  std::optional<ExactRational> max_gap;
  std::optional<GapRecord> argmax;
  std::vector<TheoremCheck> checks;

  bool all_pass() const;
};

struct SweepResult {
  std::vector<GapRecord> records;  // sorted by (N, K, L, M)
  SweepSummary summary;
};

/// Evaluates gap_at over the grid on `jobs` threads. Output ordering does not
/// depend on `jobs`. Never throws for threshold violations.
SweepResult sweep(const SweepGrid& grid, DeliveryMode mode, int jobs = 1);

/// Summary over already computed records of one mode.
SweepSummary summarize(DeliveryMode mode, const std::vector<GapRecord>& records);

// --- curves -----------------------------------------------------------------

struct CurveRow {
  ExactRational memory;
  ExactRational lb_new;
  ExactRational lb_cutset;
  ExactRational rate_envelope;
  ExactRational rate_formula;
};

struct CurveData {
  DeliveryMode mode = DeliveryMode::Centralized;
  int n_files = 0, n_users = 0, demands = 0;
  std::vector<CurveRow> rows;  // strictly increasing memory
};

/// `points` uniformly spaced M values over [min_cache, N] plus every corner.
/// Throws OutOfRange when points < 2.
CurveData curve(int n_files, int n_users, int demands, DeliveryMode mode, int points);

std::string curve_csv(const CurveData& data);

// --- case studies -----------------------------------------------------------

enum class CaseStudy { CEN_N3K3, CEN_N2K2, D2D_N3K3 };

std::string_view to_string(CaseStudy preset);
CaseStudy parse_case_study(std::string_view text);
std::vector<CaseStudy> all_case_studies();

/// Which family a case-study term comes from.
enum class TermFamily { New, Cutset };

/// Value of the (s, ell) member of a bound family at config.cache_size,
/// unclamped. The default reads the bounds module; tests substitute faulty
/// versions.
using TermEvaluator =
    std::function<ExactRational(const SystemConfig&, TermFamily, int s, int ell)>;

ExactRational default_term_evaluator(const SystemConfig& config, TermFamily family, int s, int ell);

struct IdentityCheck {
  std::string name;  // e.g. "3R+6M>=8"
  bool pass = false;
  std::string detail;  // first mismatch, if any
};

struct CaseStudyResult {
  CaseStudy preset = CaseStudy::CEN_N3K3;
  std::vector<IdentityCheck> identities;

  bool all_pass() const;
};

/// Checks each published inequality of the preset as an exact identity
/// between the matching (s, ell) term and the published line, at 10 M values.
CaseStudyResult case_study(CaseStudy preset);
CaseStudyResult case_study(CaseStudy preset, const TermEvaluator& evaluator);

}  // namespace cachelab
