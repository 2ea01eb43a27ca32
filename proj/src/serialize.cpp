#include "cachelab/serialize.hpp"

#include <sstream>

#include "cachelab/error.hpp"

namespace cachelab {

namespace {

ExactRational rational(const Json& j) {
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "expected an exact rational string");
  return ExactRational::parse(j.get<std::string>());
}

Json optional_rational(const std::optional<ExactRational>& r) {
  return r ? Json(r->str()) : Json(nullptr);
}

std::optional<ExactRational> optional_rational(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return rational(j);
}

std::string_view to_string(TransmissionKind kind) {
  switch (kind) {
    case TransmissionKind::CodedMulticast: return "coded";
    case TransmissionKind::RawPiece: return "raw";
    case TransmissionKind::Parity: return "parity";
  }
  return "?";
}

TransmissionKind parse_kind(const std::string& s) {
  if (s == "coded") return TransmissionKind::CodedMulticast;
  if (s == "raw") return TransmissionKind::RawPiece;
  if (s == "parity") return TransmissionKind::Parity;
  throw Error(ErrorCode::ParseError, "unknown transmission kind '" + s + "'");
}

DeliveryStrategy parse_strategy(const std::string& s) {
  if (s == "coded") return DeliveryStrategy::Coded;
  if (s == "fallback") return DeliveryStrategy::Fallback;
  throw Error(ErrorCode::ParseError, "unknown strategy '" + s + "'");
}

Json piece_json(const SubfilePieceId& id) {
  Json j;
  j["file"] = id.file;
  j["subset"] = id.subset;
  j["owner"] = id.piece_owner ? Json(*id.piece_owner) : Json(nullptr);
  return j;
}

SubfilePieceId piece_from_json(const Json& j) {
  SubfilePieceId id;
  id.file = j.at("file").get<int>();
  id.subset = j.at("subset").get<Subset>();
  if (!j.at("owner").is_null()) id.piece_owner = j.at("owner").get<int>();
  return id;
}

}  // namespace

Json to_json(const SystemConfig& config) {
  Json j;
  j["mode"] = to_string(config.mode);
  j["N"] = config.n_files;
  j["K"] = config.n_users;
  j["L"] = config.demands_per_user;
  j["M"] = config.cache_size.str();
  return j;
}

// --- bounds -------------------------------------------------------------------

Json to_json(const BoundResult& result, bool include_terms) {
  Json j;
  j["value"] = result.value.str();
  j["s"] = result.best_s;
  j["ell"] = result.best_ell;
  j["mu"] = result.mu_at_best;
  if (include_terms) {
    Json terms = Json::array();
    for (const auto& t : result.terms) {
      terms.push_back({{"s", t.s}, {"ell", t.ell}, {"mu", t.mu}, {"value", t.value.str()}});
    }
    j["terms"] = std::move(terms);
  }
  return j;
}

BoundResult bound_result_from_json(const Json& j) {
  BoundResult r;
  r.value = rational(j.at("value"));
  r.best_s = j.at("s").get<int>();
  r.best_ell = j.at("ell").get<int>();
  r.mu_at_best = j.at("mu").get<int>();
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      r.terms.push_back({t.at("s").get<int>(), t.at("ell").get<int>(), t.at("mu").get<int>(),
                         rational(t.at("value"))});
    }
  }
  return r;
}

std::string terms_csv(const BoundResult& result) {
  std::ostringstream os;
  os << "s,ell,mu,value\n";
  for (const auto& t : result.terms) os << t.s << ',' << t.ell << ',' << t.mu << ',' << t.value << '\n';
  return os.str();
}

// --- simulation ---------------------------------------------------------------

Json to_json(const SimReport& report) {
  Json j;
  j["t"] = report.t;
  j["strategy"] = to_string(report.strategy);
  j["file_bits"] = report.file_bits;
  j["transmissions"] = report.transmissions;
  j["total_bits"] = report.total_bits;
  j["measured_rate"] = report.measured_rate.str();
  j["formula_rate"] = report.formula_rate.str();
  j["rate_match"] = report.rate_match;
  j["storage_exact"] = report.storage_exact;
  j["decode_ok"] = report.decode_ok;
  j["per_device_uniform"] =
      report.per_device_uniform ? Json(*report.per_device_uniform) : Json(nullptr);
  return j;
}

SimReport sim_report_from_json(const Json& j) {
  SimReport r;
  r.t = j.at("t").get<int>();
  r.strategy = parse_strategy(j.at("strategy").get<std::string>());
  r.file_bits = j.at("file_bits").get<std::int64_t>();
  r.transmissions = j.at("transmissions").get<std::size_t>();
  r.total_bits = j.at("total_bits").get<std::int64_t>();
  r.measured_rate = rational(j.at("measured_rate"));
  r.formula_rate = rational(j.at("formula_rate"));
  r.rate_match = j.at("rate_match").get<bool>();
  r.storage_exact = j.at("storage_exact").get<bool>();
  r.decode_ok = j.at("decode_ok").get<std::vector<bool>>();
  if (!j.at("per_device_uniform").is_null()) r.per_device_uniform = j.at("per_device_uniform").get<bool>();
  return r;
}

Json trace_json(const SystemConfig& config, const DemandMatrix& demands, std::uint64_t seed,
                const TransmissionLog& log) {
  Json j;
  j["config"] = to_json(config);
  j["seed"] = seed;
  j["demands"] = demands.rows();
  j["total_bits"] = log.total_bits;
  Json txs = Json::array();
  for (const auto& tx : log.transmissions) {
    Json t;
    t["kind"] = to_string(tx.kind);
    t["sender"] = tx.sender.device;
    t["round"] = tx.round;
    if (tx.subset) t["subset"] = *tx.subset;
    if (tx.piece) t["piece"] = piece_json(*tx.piece);
    if (tx.kind == TransmissionKind::Parity) {
      t["file"] = tx.file;
      t["parity_row"] = tx.parity_row;
    }
    t["bits"] = tx.bit_count;
    t["payload"] = tx.payload.hex();
    txs.push_back(std::move(t));
  }
  j["transmissions"] = std::move(txs);
  return j;
}

TransmissionLog transmission_log_from_json(const Json& trace) {
  TransmissionLog log;
  for (const auto& t : trace.at("transmissions")) {
    Transmission tx;
    tx.kind = parse_kind(t.at("kind").get<std::string>());
    tx.sender = Sender::of_device(t.at("sender").get<int>());
    tx.round = t.at("round").get<int>();
    if (t.contains("subset")) tx.subset = t.at("subset").get<Subset>();
    if (t.contains("piece")) tx.piece = piece_from_json(t.at("piece"));
    if (t.contains("file")) tx.file = t.at("file").get<int>();
    if (t.contains("parity_row")) tx.parity_row = t.at("parity_row").get<int>();
    tx.bit_count = t.at("bits").get<std::int64_t>();
    tx.payload = BitString::from_hex(t.at("payload").get<std::string>(),
                                     static_cast<std::size_t>(tx.bit_count));
    log.push(std::move(tx));
  }
  if (log.total_bits != trace.at("total_bits").get<std::int64_t>()) {
    throw Error(ErrorCode::ParseError, "trace total_bits does not match its transmissions");
  }
  return log;
}

// --- analysis -----------------------------------------------------------------

Json to_json(const RegimeLabel& label) {
  Json j;
  j["family"] = to_string(label.family);
  j["index"] = label.index;
  j["name"] = label.name;
  j["nominal"] = {label.nominal_lower.str(), label.nominal_upper.str()};
  j["interval"] = {label.lower.str(), label.upper.str()};
  j["closed_lower"] = label.closed_lower;
  j["gap_threshold"] = optional_rational(label.gap_threshold);
  j["note"] = label.note;
  return j;
}

Json to_json(const GapRecord& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["N"] = r.n_files;
  j["K"] = r.n_users;
  j["L"] = r.demands;
  j["M"] = r.cache_size.str();
  j["rate_envelope"] = r.achievable_envelope.str();
  j["rate_formula"] = r.achievable_formula.str();
  j["lb_new"] = r.lower_bound.str();
  j["lb_cutset"] = r.cutset.str();
  j["gap"] = optional_rational(r.gap);
  j["gap_formula"] = optional_rational(r.gap_formula);
  j["degenerate"] = r.degenerate;
  j["regime"] = to_json(r.regime);
  return j;
}

Json to_json(const SweepSummary& s) {
  Json j;
  j["mode"] = to_string(s.mode);
  j["records"] = s.records;
  j["degenerate"] = s.degenerate;
  j["max_gap"] = optional_rational(s.max_gap);
  if (s.argmax) {
    j["argmax"] = {{"N", s.argmax->n_files},
                   {"K", s.argmax->n_users},
                   {"L", s.argmax->demands},
                   {"M", s.argmax->cache_size.str()},
                   {"mode", to_string(s.argmax->mode)}};
  } else {
    j["argmax"] = nullptr;
  }
  Json checks = Json::object();
  Json details = Json::array();
  for (const auto& c : s.checks) {
    checks[c.name] = c.pass ? "pass" : "fail";
    details.push_back({{"name", c.name},
                       {"threshold", c.threshold.str()},
                       {"records", c.records},
                       {"observed_max", optional_rational(c.observed_max)},
                       {"argmax", c.argmax},
                       {"formula_exceedances", c.formula_exceedances}});
  }
  j["theorem_checks"] = std::move(checks);
  j["theorem_details"] = std::move(details);
  return j;
}

SweepSummary sweep_summary_from_json(const Json& j) {
  SweepSummary s;
  s.mode = parse_mode(j.at("mode").get<std::string>());
  s.records = j.at("records").get<std::size_t>();
  s.degenerate = j.at("degenerate").get<std::size_t>();
  s.max_gap = optional_rational(j.at("max_gap"));
  if (!j.at("argmax").is_null()) {
    const auto& a = j.at("argmax");
    GapRecord r;
    r.mode = parse_mode(a.at("mode").get<std::string>());
    r.n_files = a.at("N").get<int>();
    r.n_users = a.at("K").get<int>();
    r.demands = a.at("L").get<int>();
    r.cache_size = rational(a.at("M"));
    r.gap = s.max_gap;
    s.argmax = r;
  }
  for (const auto& d : j.at("theorem_details")) {
    TheoremCheck c;
    c.name = d.at("name").get<std::string>();
    c.threshold = rational(d.at("threshold"));
    c.records = d.at("records").get<std::size_t>();
    c.observed_max = optional_rational(d.at("observed_max"));
    c.argmax = d.at("argmax").get<std::string>();
    c.formula_exceedances = d.at("formula_exceedances").get<std::size_t>();
    c.pass = j.at("theorem_checks").at(c.name).get<std::string>() == "pass";
    s.checks.push_back(std::move(c));
  }
  return s;
}

std::string sweep_csv(const std::vector<GapRecord>& records) {
  std::ostringstream os;
  os << "mode,N,K,L,M,regime,lb_new,lb_cutset,rate_envelope,rate_formula,gap,gap_formula,degenerate\n";
  auto opt = [](const std::optional<ExactRational>& r) { return r ? r->str() : std::string(); };
  for (const auto& r : records) {
    os << to_string(r.mode) << ',' << r.n_files << ',' << r.n_users << ',' << r.demands << ','
       << r.cache_size << ',' << to_string(r.regime.family) << ':' << r.regime.index << ','
       << r.lower_bound << ',' << r.cutset << ',' << r.achievable_envelope << ','
       << r.achievable_formula << ',' << opt(r.gap) << ',' << opt(r.gap_formula) << ','
       << (r.degenerate ? 1 : 0) << '\n';
  }
  return os.str();
}

Json to_json(const CurveData& data) {
  Json j;
  j["mode"] = to_string(data.mode);
  j["N"] = data.n_files;
  j["K"] = data.n_users;
  j["L"] = data.demands;
  Json rows = Json::array();
  for (const auto& r : data.rows) {
    rows.push_back({{"M", r.memory.str()},
                    {"lb_new", r.lb_new.str()},
                    {"lb_cutset", r.lb_cutset.str()},
                    {"rate_envelope", r.rate_envelope.str()},
                    {"rate_formula", r.rate_formula.str()}});
  }
  j["rows"] = std::move(rows);
  return j;
}

CurveData curve_from_json(const Json& j) {
  CurveData d;
  d.mode = parse_mode(j.at("mode").get<std::string>());
  d.n_files = j.at("N").get<int>();
  d.n_users = j.at("K").get<int>();
  d.demands = j.at("L").get<int>();
  for (const auto& r : j.at("rows")) {
    d.rows.push_back({rational(r.at("M")), rational(r.at("lb_new")), rational(r.at("lb_cutset")),
                      rational(r.at("rate_envelope")), rational(r.at("rate_formula"))});
  }
  return d;
}

Json to_json(const CaseStudyResult& result) {
  Json j;
  j["preset"] = to_string(result.preset);
  Json ids = Json::array();
  for (const auto& c : result.identities) {
    ids.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  j["identities"] = std::move(ids);
  return j;
}

}  // namespace cachelab
