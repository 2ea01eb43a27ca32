#include "cachelab/verify.hpp"

#include <algorithm>

#include "cachelab/error.hpp"
#include "cachelab/schemes.hpp"

namespace cachelab {

bool VerifyReport::all_pass() const { return first_failure() == nullptr; }

const NamedCheck* VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

namespace {

struct Scale {
  int tight_max;      // tight-point grid
  int sim_max;        // simulator grid for N and K
  int sim_demands;    // max L simulated
  int sim_trials;     // random demand matrices per config
  int sweep_max;      // gap / bound grid
};

Scale scale_for(VerifyLevel level) {
  if (level == VerifyLevel::Full) return {12, 6, 3, 100, 20};
  return {6, 4, 2, 5, 8};
}

const char* mode_name(DeliveryMode mode) { return mode == DeliveryMode::D2D ? "d2d" : "cen"; }

void add_case_studies(VerifyReport& report, const TermEvaluator& evaluator) {
  for (auto preset : all_case_studies()) {
    const auto result = case_study(preset, evaluator);
    for (const auto& id : result.identities) {
      report.checks.push_back({"case_study:" + std::string(to_string(preset)) + ":" + id.name,
                               id.pass, id.detail});
    }
  }
}

void add_tight_points(VerifyReport& report, int grid) {
  {
    const auto config = make_config(3, 3, 1, ExactRational(1), DeliveryMode::D2D);
    const auto lb = lb_d2d(config).value;
    report.checks.push_back({"tight:d2d:N3K3:M=1", lb == ExactRational(2), "lb_d2d = " + lb.str()});
  }
  NamedCheck check{"tight:d2d:L1:M=N/K", true, {}};
  for (int n = 1; n <= grid && check.pass; ++n) {
    for (int k = 1; k <= grid; ++k) {
      const auto config = make_config(n, k, 1, ExactRational(n, k), DeliveryMode::D2D);
      const ExactRational expected(std::min(k - 1, n));
      const auto lb = lb_d2d(config).value;
      const auto ach = rate_ach_d2d(config, EvalMode::CornerEnvelope);
      if (lb != expected || ach != expected) {
        check.pass = false;
        check.detail = "N=" + std::to_string(n) + " K=" + std::to_string(k) + ": lb " + lb.str() +
                       ", achievable " + ach.str() + ", expected " + expected.str();
        break;
      }
    }
  }
  report.checks.push_back(std::move(check));
}

// Recomputes every D2D payload from its sender's cache alone.
bool d2d_locality(const SystemConfig& config, int t, const DemandMatrix& demands, std::string& detail) {
  const auto bits = default_file_bits(config, t);
  const Library library(config.n_files, bits, 0);
  const auto caches = place_d2d(config, t, library);
  const auto log = deliver_d2d(config, t, caches, demands);
  for (const auto& tx : log.transmissions) {
    if (tx.sender.is_server() ||
        !(reencode_from_sender(config, t, tx, caches.user(tx.sender.device), demands) == tx.payload)) {
      detail = "transmission from " + tx.sender.str() + " is not a function of its cache";
      return false;
    }
  }
  return true;
}

void add_simulation(VerifyReport& report, DeliveryMode mode, const Scale& scale) {
  NamedCheck check{std::string("simulate:") + mode_name(mode), true, {}};
  std::size_t runs = 0;
  auto fail = [&](const SystemConfig& c, int t, const std::string& why) {
    check.pass = false;
    check.detail = "N=" + std::to_string(c.n_files) + " K=" + std::to_string(c.n_users) +
                   " L=" + std::to_string(c.demands_per_user) + " t=" + std::to_string(t) + ": " + why;
  };
  for (int n = 1; n <= scale.sim_max && check.pass; ++n) {
    for (int k = 1; k <= scale.sim_max && check.pass; ++k) {
      for (int l = 1; l <= std::min(scale.sim_demands, n) && check.pass; ++l) {
        for (int t = mode == DeliveryMode::D2D ? 1 : 0; t <= k && check.pass; ++t) {
          const auto config = make_config(n, k, l, ExactRational(static_cast<std::int64_t>(n) * t, k), mode);
          std::optional<ExactRational> rate;
          for (int trial = 0; trial <= scale.sim_trials && check.pass; ++trial) {
            // trial 0 is the worst-case demand matrix
            const auto demands =
                trial == 0 ? worst_case_demands(config) : random_demands(config, static_cast<std::uint64_t>(trial));
            const auto r = simulate(config, t, demands, static_cast<std::uint64_t>(trial));
            ++runs;
            if (!r.all_decoded()) fail(config, t, "decode failure");
            else if (r.measured_rate != r.formula_rate)
              fail(config, t, "rate " + r.measured_rate.str() + " != " + r.formula_rate.str());
            else if (!r.storage_exact) fail(config, t, "cache size differs from M*B");
            else if (rate && *rate != r.measured_rate) fail(config, t, "rate depends on demands");
            rate = r.measured_rate;
          }
          std::string why;
          if (check.pass && mode == DeliveryMode::D2D &&
              !d2d_locality(config, t, worst_case_demands(config), why)) {
            fail(config, t, why);
          }
        }
      }
    }
  }
  if (check.pass) check.detail = std::to_string(runs) + " runs";
  report.checks.push_back(std::move(check));
}

void add_bounds_and_gaps(VerifyReport& report, DeliveryMode mode, const Scale& scale, int jobs) {
  const SweepGrid grid{1, scale.sweep_max, 1, scale.sweep_max, {1, 2, 3, kAllFiles}, 20};
  const auto result = sweep(grid, mode, jobs);
  const std::string prefix = mode_name(mode);

  NamedCheck dominance{"bounds:" + prefix + ":dominance", true, {}};
  NamedCheck sandwich{"bounds:" + prefix + ":sandwich", true, {}};
  for (const auto& r : result.records) {
    if (dominance.pass && r.lower_bound < r.cutset) {
      dominance.pass = false;
      dominance.detail = r.key() + ": lb_new " + r.lower_bound.str() + " < lb_cutset " + r.cutset.str();
    }
    if (sandwich.pass && r.lower_bound > r.achievable_envelope) {
      sandwich.pass = false;
      sandwich.detail = r.key() + ": lb_new " + r.lower_bound.str() + " > achievable " +
                        r.achievable_envelope.str();
    }
  }
  report.checks.push_back(std::move(dominance));
  report.checks.push_back(std::move(sandwich));

  for (const auto& c : result.summary.checks) {
    std::string detail = std::to_string(c.records) + " records";
    if (c.observed_max) detail += ", max " + c.observed_max->str() + " at " + c.argmax;
    detail += ", threshold " + c.threshold.str();
    report.checks.push_back({"gap:" + c.name, c.pass, detail});
  }
}

void add_curves(VerifyReport& report, DeliveryMode mode) {
  const std::string prefix = mode_name(mode);
  for (int l : {1, 2}) {
    const auto first = curve(5, 5, l, mode, 41);
    const std::string tag = "curve:" + prefix + ":N5K5L" + std::to_string(l);

    const auto strict = std::find_if(first.rows.begin(), first.rows.end(),
                                     [](const CurveRow& r) { return r.lb_new > r.lb_cutset; });
    report.checks.push_back({tag + ":separation", strict != first.rows.end(),
                             strict != first.rows.end() ? "M=" + strict->memory.str() : "none"});

    if (mode == DeliveryMode::D2D) {
      const auto row = std::find_if(first.rows.begin(), first.rows.end(),
                                    [](const CurveRow& r) { return r.memory == ExactRational(1); });
      const bool tight = row != first.rows.end() && row->lb_new == row->rate_envelope;
      report.checks.push_back({tag + ":tight_at_N/K", tight,
                               row == first.rows.end() ? "no M=1 row"
                                                       : row->lb_new.str() + " vs " + row->rate_envelope.str()});
    }
    const bool same = curve_csv(first) == curve_csv(curve(5, 5, l, mode, 41));
    report.checks.push_back({tag + ":deterministic", same, {}});
  }
}

}  // namespace

VerifyReport run_verify(VerifyLevel level, const TermEvaluator& evaluator, int jobs) {
  const Scale scale = scale_for(level);
  VerifyReport report;
  add_case_studies(report, evaluator);
  add_tight_points(report, scale.tight_max);
  for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
    add_simulation(report, mode, scale);
    add_bounds_and_gaps(report, mode, scale, jobs);
    add_curves(report, mode);
  }
  return report;
}

}  // namespace cachelab
