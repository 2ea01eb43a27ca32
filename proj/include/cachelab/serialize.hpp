#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cachelab/analysis.hpp"
#include "cachelab/bounds.hpp"
#include "cachelab/data_model.hpp"
#include "cachelab/model.hpp"
#include "cachelab/schemes.hpp"

// JSON and CSV renderings. Every rational is written as an exact "p/q"
// string; the *_from_json functions read them back.

namespace cachelab {

using Json = nlohmann::ordered_json;

Json to_json(const SystemConfig& config);

Json to_json(const BoundResult& result, bool include_terms);
BoundResult bound_result_from_json(const Json& j);
/// s,ell,mu,value
std::string terms_csv(const BoundResult& result);

Json to_json(const SimReport& report);
SimReport sim_report_from_json(const Json& j);

/// Full transmission trace with payloads in hex.
Json trace_json(const SystemConfig& config, const DemandMatrix& demands, std::uint64_t seed,
                const TransmissionLog& log);
TransmissionLog transmission_log_from_json(const Json& trace);

Json to_json(const RegimeLabel& label);
Json to_json(const GapRecord& record);
Json to_json(const SweepSummary& summary);
/// Restores the scalar fields; `argmax` comes back with its key fields and
/// gap only.
SweepSummary sweep_summary_from_json(const Json& j);
/// One row per record.
std::string sweep_csv(const std::vector<GapRecord>& records);

Json to_json(const CurveData& data);
CurveData curve_from_json(const Json& j);

Json to_json(const CaseStudyResult& result);

}  // namespace cachelab
