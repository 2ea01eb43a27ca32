// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails or overruns its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cachelab/analysis.hpp"
#include "cachelab/bounds.hpp"
#include "cachelab/cli.hpp"
#include "cachelab/schemes.hpp"

using namespace cachelab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int jobs() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

Outcome case_studies() {
  Outcome o;
  std::size_t n = 0;
  for (auto preset : all_case_studies()) {
    const auto r = case_study(preset);
    for (const auto& id : r.identities) {
      ++n;
      if (!id.pass) o.fail(std::string(to_string(preset)) + ":" + id.name + " " + id.detail);
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " identities exact at 10 sampled M each";
  return o;
}

Outcome tight_points() {
  Outcome o;
  const auto v = lb_d2d(make_config(3, 3, 1, ExactRational(1), DeliveryMode::D2D)).value;
  if (v != ExactRational(2)) o.fail("lb_d2d(3,3,1,1) = " + v.str());
  int configs = 0;
  for (int n = 1; n <= 20; ++n) {
    for (int k = 1; k <= 20; ++k) {
      const auto c = make_config(n, k, 1, ExactRational(n, k), DeliveryMode::D2D);
      const ExactRational expect(std::min(k - 1, n));
      const auto lb = lb_d2d(c).value;
      const auto ach = rate_ach_d2d(c);
      ++configs;
      if (lb != expect || ach != expect) {
        o.fail("N=" + std::to_string(n) + " K=" + std::to_string(k) + ": lb " + lb.str() + ", rate " +
               ach.str());
      }
    }
  }
  if (o.pass) o.detail = "lb_d2d(3,3,1,1) = 2; " + std::to_string(configs) + " configs with M = N/K tight";
  return o;
}

Outcome simulator_agreement() {
  Outcome o;
  std::size_t runs = 0;
  for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
    for (int n = 1; n <= 6; ++n) {
      for (int k = 1; k <= 6; ++k) {
        for (int l = 1; l <= std::min(n, 3); ++l) {
          for (int t = mode == DeliveryMode::D2D ? 1 : 0; t <= k; ++t) {
            const auto c = make_config(n, k, l, ExactRational(static_cast<std::int64_t>(n) * t, k), mode);
            const auto formula = rate_achievable(c, EvalMode::FormulaAtM);
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
              const auto r = simulate(c, t, random_demands(c, seed), seed);
              ++runs;
              if (!r.all_decoded() || r.measured_rate != formula) {
                std::ostringstream os;
                os << to_string(mode) << " N=" << n << " K=" << k << " L=" << l << " t=" << t << " seed=" << seed
                   << ": rate " << r.measured_rate << " vs " << formula;
                o.fail(os.str());
              }
            }
          }
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " runs decoded bit-exactly at the closed-form rate";
  return o;
}

Outcome dominance_and_sandwich() {
  Outcome o;
  std::size_t points = 0;
  for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
    for (int n = 1; n <= 12; ++n) {
      for (int k = 1; k <= 12; ++k) {
        for (int l : {1, 2, 3, n}) {
          if (l > n) continue;
          for (const auto& m : sweep_memories(mode, n, k, l, 20)) {
            const auto c = make_config(n, k, l, m, mode);
            const auto lb = lower_bound(c).value;
            const auto cut = cutset_bound(c).value;
            const auto ach = rate_achievable(c, EvalMode::CornerEnvelope);
            ++points;
            if (lb < cut || lb > ach) {
              std::ostringstream os;
              os << to_string(mode) << " N=" << n << " K=" << k << " L=" << l << " M=" << m << ": lb " << lb
                 << " cutset " << cut << " rate " << ach;
              o.fail(os.str());
            }
          }
        }
      }
    }
    for (int l : {1, 2}) {
      bool strict = false;
      for (const auto& m : sweep_memories(mode, 5, 5, l, 20)) {
        const auto c = make_config(5, 5, l, m, mode);
        strict = strict || lower_bound(c).value > cutset_bound(c).value;
      }
      if (!strict) o.fail(std::string(to_string(mode)) + " N=K=5 L=" + std::to_string(l) + ": no strict point");
    }
  }
  if (o.pass) o.detail = std::to_string(points) + " points; strict separation at N=K=5, L=1,2, both modes";
  return o;
}

Outcome gap_theorems() {
  Outcome o;
  SweepGrid grid;
  grid.n_max = 20;
  grid.k_max = 20;
  grid.demand_values = {1, 2, 3, kAllFiles};
  std::ostringstream os;
  const char* sep = "";
  for (auto mode : {DeliveryMode::Centralized, DeliveryMode::D2D}) {
    const auto s = sweep(grid, mode, jobs()).summary;
    for (const auto& c : s.checks) {
      os << sep << c.name << " max " << (c.observed_max ? c.observed_max->decimal(4) : "-") << " <= " << c.threshold;
      sep = "; ";
      if (!c.pass) o.fail(c.name + " exceeded at " + c.argmax);
    }
    if (s.degenerate) o.fail(std::to_string(s.degenerate) + " degenerate records");
  }
  if (o.pass) o.detail = os.str();
  return o;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Outcome figure_data() {
  Outcome o;
  for (const std::string mode : {"cen", "d2d"}) {
    for (const std::string l : {"1", "2"}) {
      const std::vector<std::string> args{"curve", "--mode", mode, "--N", "5", "--K", "5", "--L", l};
      std::ostringstream a, b, err;
      const std::string tag = mode + " L=" + l;
      if (run_cli(args, a, err) != kExitOk || run_cli(args, b, err) != kExitOk) {
        o.fail(tag + ": " + err.str());
        continue;
      }
      if (a.str() != b.str()) o.fail(tag + ": output differs between runs");
      bool strict = false, tight_seen = false;
      for (const auto& row : csv_rows(a.str())) {
        const auto m = ExactRational::parse(row.at(0));
        const auto lb = ExactRational::parse(row.at(1));
        const auto cut = ExactRational::parse(row.at(2));
        const auto env = ExactRational::parse(row.at(3));
        strict = strict || lb > cut;
        if (mode == "d2d" && m == ExactRational(1)) {
          tight_seen = true;
          if (lb != env) o.fail(tag + ": M=1 row has lb " + lb.str() + " vs " + env.str());
        }
      }
      if (!strict) o.fail(tag + ": lb_new never exceeds lb_cutset");
      if (mode == "d2d" && !tight_seen) o.fail(tag + ": no M=N/K row");
    }
  }
  if (o.pass) o.detail = "4 curves byte-identical across runs, separation and M=N/K tightness present";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 case-study exactness", 1, case_studies},
      {"2 tight points", 60, tight_points},
      {"3 simulator/formula agreement", 60, simulator_agreement},
      {"4 bound dominance and sandwich", 120, dominance_and_sandwich},
      {"5 gap theorems", 600, gap_theorems},
      {"6 figure data", 60, figure_data},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) o.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_s));
    all = all && o.pass;
    std::printf("%s criterion %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
