#pragma once

#include <span>
#include <vector>

#include "cachelab/model.hpp"
#include "cachelab/rational.hpp"

namespace cachelab {

/// How an achievable rate is evaluated between corner points M = N*t/K.
enum class EvalMode {
  /// Memory sharing: lower convex envelope through the corner points.
  CornerEnvelope,
  /// The closed-form rate expression evaluated directly at M.
  FormulaAtM,
};

std::string_view to_string(EvalMode mode);

struct BoundTerm {
  int s = 0;
  int ell = 0;
  int mu = 0;
  ExactRational value;  // not clamped
};

/// Maximum of a family of (s, ell) terms, clamped below at zero. Ties in
/// the argmax go to the smallest s, then the smallest ell. An empty family
/// (e.g. D2D with K = 1) yields value 0 and best_s = best_ell = 0.
struct BoundResult {
  ExactRational value;
  int best_s = 0;
  int best_ell = 0;
  int mu_at_best = 0;
  std::vector<BoundTerm> terms;
};

struct EnvelopePoint {
  ExactRational memory;
  ExactRational rate;
};

/// intercept + slope * M; every lower-bound term is affine in the cache size.
struct LinearInM {
  ExactRational intercept;
  ExactRational slope;

  ExactRational at(const ExactRational& m) const { return intercept + slope * m; }
  friend bool operator==(const LinearInM&, const LinearInM&) = default;
};

/// mu = min(ceil(N/(L*ell)), K) - s
int bound_mu(int n_files, int n_users, int demands, int s, int ell);

// --- achievable rates -----------------------------------------------------

/// K*L*(1 - M/N) * min(1/(1 + K*M/N), N/(K*L)).
ExactRational rate_ach_centralized(const SystemConfig& config, EvalMode mode);
/// min{(L*N/M)(1 - M/N), N}.
ExactRational rate_ach_d2d(const SystemConfig& config, EvalMode mode = EvalMode::FormulaAtM);
/// Dispatches on config.mode.
ExactRational rate_achievable(const SystemConfig& config, EvalMode mode);

/// Closed-form rate at each corner M = N*t/K (t from 0 for centralized,
/// from 1 for D2D), in increasing memory order.
std::vector<EnvelopePoint> corner_points(const SystemConfig& config);

/// Piecewise-linear interpolation of the lower convex hull of `points`
/// (sorted by memory). Throws DomainError when `at` is outside their range.
ExactRational convex_envelope(std::span<const EnvelopePoint> points, const ExactRational& at);

// --- centralized lower bounds -------------------------------------------

/// Valid (s, ell): s in [1 : min(ceil(N/L), K)], ell in [1 : ceil(N/(L*s))].
LinearInM lb_term_centralized_form(int n_files, int n_users, int demands, int s, int ell);
ExactRational lb_term_centralized(const SystemConfig& config, int s, int ell);
BoundResult lb_centralized(const SystemConfig& config);

/// L = 1: classical max over s of s - s*M/floor(N/s). L > 1: the centralized
/// family restricted to ell = ceil(N/(L*s)).
BoundResult lb_cutset_centralized(const SystemConfig& config);

// --- D2D lower bounds -----------------------------------------------------

/// Valid (s, ell): s in [1 : min(ceil(N/L), K-1)], ell in [1 : ceil(N/(L*s))].
/// s = K is excluded because the (K-s)/K factor vanishes there.
LinearInM lb_term_d2d_form(int n_files, int n_users, int demands, int s, int ell);
ExactRational lb_term_d2d(const SystemConfig& config, int s, int ell);
BoundResult lb_d2d(const SystemConfig& config);

/// The D2D family restricted to ell = ceil(N/(L*s)).
BoundResult lb_cutset_d2d(const SystemConfig& config);

/// lb_centralized or lb_d2d depending on config.mode.
BoundResult lower_bound(const SystemConfig& config);
BoundResult cutset_bound(const SystemConfig& config);

}  // namespace cachelab
