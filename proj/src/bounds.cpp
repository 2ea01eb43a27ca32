#include "cachelab/bounds.hpp"

#include <algorithm>
#include <tuple>

#include "cachelab/error.hpp"

namespace cachelab {

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::CornerEnvelope ? "envelope" : "formula";
}

namespace {

void require_mode(const SystemConfig& config, DeliveryMode expected, const char* op) {
  if (config.mode != expected) {
    throw Error(ErrorCode::ModeMismatch, std::string(op) + " expects a " +
                                             std::string(to_string(expected)) + " config");
  }
}

int max_s_centralized(int n, int k, int l) {
  return static_cast<int>(std::min<std::int64_t>(ceil_div(n, l), k));
}

int max_s_d2d(int n, int k, int l) {
  return static_cast<int>(std::min<std::int64_t>(ceil_div(n, l), k - 1));
}

int max_ell(int n, int l, int s) { return static_cast<int>(ceil_div(n, static_cast<std::int64_t>(l) * s)); }

void check_domain(int s, int ell, int s_max, int ell_max, const char* family) {
  if (s < 1 || s > s_max || ell < 1 || ell > ell_max) {
    throw Error(ErrorCode::DomainError,
                std::string(family) + " term (s=" + std::to_string(s) + ", ell=" +
                    std::to_string(ell) + ") outside s in [1:" + std::to_string(s_max) +
                    "], ell in [1:" + std::to_string(ell_max) + "]");
  }
}

// N - mu*(N - L*ell*s)^+/(s + mu): the part of both families shared before
// the cache term and the normalization.
ExactRational coupled_files(int n, int k, int l, int s, int ell) {
  const int mu = bound_mu(n, k, l, s, ell);
  const std::int64_t uncovered = std::max<std::int64_t>(n - static_cast<std::int64_t>(l) * ell * s, 0);
  ExactRational out(n);
  if (uncovered > 0) {
    // uncovered > 0 forces mu >= 0, and s + mu = min(ceil(N/(L*ell)), K) >= 1
    out -= ExactRational(static_cast<std::int64_t>(mu) * uncovered, s + mu);
  }
  return out;
}

// Picks the argmax with smallest-(s, ell) tie-breaking and clamps at zero.
BoundResult finalize(std::vector<BoundTerm> terms) {
  BoundResult result;
  result.value = 0;
  const BoundTerm* best = nullptr;
  for (const auto& t : terms) {
    if (best == nullptr || t.value > best->value ||
        (t.value == best->value && std::tie(t.s, t.ell) < std::tie(best->s, best->ell))) {
      best = &t;
    }
  }
  if (best != nullptr) {
    result.best_s = best->s;
    result.best_ell = best->ell;
    result.mu_at_best = best->mu;
    result.value = positive_part(best->value);
  }
  result.terms = std::move(terms);
  return result;
}

}  // namespace

int bound_mu(int n_files, int n_users, int demands, int s, int ell) {
  const auto c = ceil_div(n_files, static_cast<std::int64_t>(demands) * ell);
  return static_cast<int>(std::min<std::int64_t>(c, n_users)) - s;
}

// --- achievable -----------------------------------------------------------

namespace {

ExactRational centralized_formula(int n, int k, int l, const ExactRational& m) {
  const ExactRational kl(static_cast<std::int64_t>(k) * l);
  const ExactRational left = ExactRational(1) - m / ExactRational(n);
  const ExactRational coded = ExactRational(1) / (ExactRational(1) + ExactRational(k) * m / ExactRational(n));
  const ExactRational unicast = ExactRational(n) / kl;
  return kl * left * min(coded, unicast);
}

ExactRational d2d_formula(int n, int l, const ExactRational& m) {
  const ExactRational coded =
      ExactRational(static_cast<std::int64_t>(l) * n) / m * (ExactRational(1) - m / ExactRational(n));
  return min(coded, ExactRational(n));
}

}  // namespace

std::vector<EnvelopePoint> corner_points(const SystemConfig& config) {
  const int n = config.n_files;
  const int k = config.n_users;
  const int l = config.demands_per_user;
  std::vector<EnvelopePoint> pts;
  const int first = config.mode == DeliveryMode::D2D ? 1 : 0;
  for (int t = first; t <= k; ++t) {
    const ExactRational m(static_cast<std::int64_t>(n) * t, k);
    pts.push_back({m, config.mode == DeliveryMode::D2D ? d2d_formula(n, l, m)
                                                       : centralized_formula(n, k, l, m)});
  }
  return pts;
}

ExactRational convex_envelope(std::span<const EnvelopePoint> points, const ExactRational& at) {
  if (points.empty()) throw Error(ErrorCode::DomainError, "empty envelope");
  if (at < points.front().memory || at > points.back().memory) {
    throw Error(ErrorCode::DomainError, "envelope evaluated at " + at.str() + " outside [" +
                                            points.front().memory.str() + ", " +
                                            points.back().memory.str() + "]");
  }
  // Andrew's monotone chain, lower half only.
  std::vector<EnvelopePoint> hull;
  for (const auto& p : points) {
    if (!hull.empty() && hull.back().memory == p.memory) {
      if (p.rate < hull.back().rate) hull.pop_back();
      else continue;
    }
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const ExactRational cross =
          (b.memory - a.memory) * (p.rate - a.rate) - (b.rate - a.rate) * (p.memory - a.memory);
      if (cross.sign() > 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (at >= a.memory && at <= b.memory) {
      return a.rate + (b.rate - a.rate) * (at - a.memory) / (b.memory - a.memory);
    }
  }
  return hull.back().rate;  // single point, at == its memory
}

ExactRational rate_ach_centralized(const SystemConfig& config, EvalMode mode) {
  require_mode(config, DeliveryMode::Centralized, "rate_ach_centralized");
  if (mode == EvalMode::FormulaAtM) {
    return centralized_formula(config.n_files, config.n_users, config.demands_per_user,
                               config.cache_size);
  }
  const auto pts = corner_points(config);
  return convex_envelope(pts, config.cache_size);
}

ExactRational rate_ach_d2d(const SystemConfig& config, EvalMode mode) {
  require_mode(config, DeliveryMode::D2D, "rate_ach_d2d");
  if (mode == EvalMode::FormulaAtM) {
    return d2d_formula(config.n_files, config.demands_per_user, config.cache_size);
  }
  const auto pts = corner_points(config);
  return convex_envelope(pts, config.cache_size);
}

ExactRational rate_achievable(const SystemConfig& config, EvalMode mode) {
  return config.mode == DeliveryMode::D2D ? rate_ach_d2d(config, mode)
                                          : rate_ach_centralized(config, mode);
}

// --- centralized ------------------------------------------------------------

LinearInM lb_term_centralized_form(int n, int k, int l, int s, int ell) {
  check_domain(s, ell, max_s_centralized(n, k, l), max_ell(n, l, s), "centralized");
  const std::int64_t unserved = std::max<std::int64_t>(n - static_cast<std::int64_t>(k) * l * ell, 0);
  const ExactRational inv_ell(1, ell);
  return {(coupled_files(n, k, l, s, ell) - ExactRational(unserved)) * inv_ell,
          ExactRational(-s, ell)};
}

ExactRational lb_term_centralized(const SystemConfig& config, int s, int ell) {
  return lb_term_centralized_form(config.n_files, config.n_users, config.demands_per_user, s, ell)
      .at(config.cache_size);
}

BoundResult lb_centralized(const SystemConfig& config) {
  require_mode(config, DeliveryMode::Centralized, "lb_centralized");
  const int n = config.n_files, k = config.n_users, l = config.demands_per_user;
  std::vector<BoundTerm> terms;
  for (int s = 1; s <= max_s_centralized(n, k, l); ++s) {
    for (int ell = 1; ell <= max_ell(n, l, s); ++ell) {
      terms.push_back({s, ell, bound_mu(n, k, l, s, ell), lb_term_centralized(config, s, ell)});
    }
  }
  return finalize(std::move(terms));
}

BoundResult lb_cutset_centralized(const SystemConfig& config) {
  require_mode(config, DeliveryMode::Centralized, "lb_cutset_centralized");
  const int n = config.n_files, k = config.n_users, l = config.demands_per_user;
  std::vector<BoundTerm> terms;
  if (l == 1) {
    for (int s = 1; s <= std::min(n, k); ++s) {
      const int ell = n / s;
      const ExactRational v = ExactRational(s) - ExactRational(s) * config.cache_size / ExactRational(ell);
      terms.push_back({s, ell, bound_mu(n, k, l, s, ell), v});
    }
  } else {
    for (int s = 1; s <= max_s_centralized(n, k, l); ++s) {
      const int ell = max_ell(n, l, s);
      terms.push_back({s, ell, bound_mu(n, k, l, s, ell), lb_term_centralized(config, s, ell)});
    }
  }
  return finalize(std::move(terms));
}

// --- D2D --------------------------------------------------------------------

LinearInM lb_term_d2d_form(int n, int k, int l, int s, int ell) {
  check_domain(s, ell, max_s_d2d(n, k, l), max_ell(n, l, s), "d2d");
  // divide by ell*(K-s)/K
  const ExactRational scale(k, static_cast<std::int64_t>(ell) * (k - s));
  return {coupled_files(n, k, l, s, ell) * scale, ExactRational(-s) * scale};
}

ExactRational lb_term_d2d(const SystemConfig& config, int s, int ell) {
  return lb_term_d2d_form(config.n_files, config.n_users, config.demands_per_user, s, ell)
      .at(config.cache_size);
}

BoundResult lb_d2d(const SystemConfig& config) {
  require_mode(config, DeliveryMode::D2D, "lb_d2d");
  const int n = config.n_files, k = config.n_users, l = config.demands_per_user;
  std::vector<BoundTerm> terms;
  for (int s = 1; s <= max_s_d2d(n, k, l); ++s) {
    for (int ell = 1; ell <= max_ell(n, l, s); ++ell) {
      terms.push_back({s, ell, bound_mu(n, k, l, s, ell), lb_term_d2d(config, s, ell)});
    }
  }
  return finalize(std::move(terms));
}

BoundResult lb_cutset_d2d(const SystemConfig& config) {
  require_mode(config, DeliveryMode::D2D, "lb_cutset_d2d");
  const int n = config.n_files, k = config.n_users, l = config.demands_per_user;
  std::vector<BoundTerm> terms;
  for (int s = 1; s <= max_s_d2d(n, k, l); ++s) {
    const int ell = max_ell(n, l, s);
    terms.push_back({s, ell, bound_mu(n, k, l, s, ell), lb_term_d2d(config, s, ell)});
  }
  return finalize(std::move(terms));
}

BoundResult lower_bound(const SystemConfig& config) {
  return config.mode == DeliveryMode::D2D ? lb_d2d(config) : lb_centralized(config);
}

BoundResult cutset_bound(const SystemConfig& config) {
  return config.mode == DeliveryMode::D2D ? lb_cutset_d2d(config) : lb_cutset_centralized(config);
}

}  // namespace cachelab
