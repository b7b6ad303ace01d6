#include "wsketch/report_io.hpp"

#include <cmath>
#include <json.hpp>
#include <ostream>

#include "wsketch/errors.hpp"
#include "wsketch/trace.hpp"

namespace wsketch::io {

using nlohmann::json;

namespace {

json interval_json(const WeightEstimate& e) { return json{{"point", e.point}, {"lo", e.lo}, {"hi", e.hi}}; }

}  // namespace

void write_sketch_report(std::ostream& out, const SketchReport& report) {
  const auto& h = report.header;
  const bool combined = h.algo == "cws";
  json head{{"type", "header"},          {"algo", h.algo},
            {"k", h.capacity},           {"buckets", h.buckets},
            {"rho", h.rho},              {"hash_seed", h.hash_seed},
            {"confidence", h.conf.level}, {"a_delta", h.conf.coefficient},
            {"tau", h.tau},              {"elements", h.elements},
            {"entries", h.entries},      {"serialized_bytes", h.serialized_bytes}};
  out << head.dump() << '\n';
  for (const auto& r : report.records) {
    const WeightEstimate d = estimate_distinct(r.card_est, r.std_error, r.tau_entry, h.conf);
    json rec{{"key", r.key},   {"cardest", r.card_est}, {"lo", d.lo},          {"hi", d.hi},
             {"point", d.point}, {"tau_entry", r.tau_entry}, {"seed", r.seed}, {"std_error", r.std_error}};
    if (combined) {
      const WeightEstimate c =
          estimate_combined(r.card_est, r.std_error, r.tau_entry, h.rho, static_cast<double>(r.f), h.conf);
      rec["f"] = r.f;
      rec["combined"] = interval_json(c);
    }
    out << rec.dump() << '\n';
  }
}

SketchReport parse_sketch_report(const std::vector<std::string>& lines) {
  SketchReport report;
  bool have_header = false;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("report line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (j.value("type", "") == "header") {
        auto& h = report.header;
        h.algo = j.at("algo").get<std::string>();
        h.capacity = j.at("k").get<std::uint64_t>();
        h.buckets = j.at("buckets").get<std::uint32_t>();
        h.rho = j.value("rho", 0.0);
        h.hash_seed = j.value("hash_seed", std::uint64_t{0});
        h.conf = {j.value("confidence", 0.95), j.value("a_delta", 2.0)};
        h.tau = j.value("tau", 1.0);
        h.elements = j.value("elements", std::uint64_t{0});
        h.entries = j.value("entries", std::uint64_t{0});
        h.serialized_bytes = j.value("serialized_bytes", std::uint64_t{0});
        have_header = true;
        continue;
      }
      if (!have_header) throw ParseError("report line " + std::to_string(lineno) + ": record before header");
      ReportRecord r;
      r.key = j.at("key").get<std::string>();
      r.card_est = j.at("cardest").get<double>();
      r.tau_entry = j.at("tau_entry").get<double>();
      r.seed = j.value("seed", 1.0);
      r.f = j.value("f", std::uint64_t{0});
      r.std_error = j.contains("std_error")
                        ? j.at("std_error").get<double>()
                        : r.card_est / std::sqrt(2.0 * static_cast<double>(report.header.buckets));
      report.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError("report line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw ParseError("report has no header record");
  return report;
}

SketchReport read_sketch_report(const std::string& path) { return parse_sketch_report(read_data_lines(path)); }

void write_signature_report(std::ostream& out, const SignatureReportHeader& h,
                            const std::vector<dns::Signature>& signatures) {
  json head{{"type", "header"},
            {"hash_seed", h.hash_seed},
            {"k", h.capacity},
            {"buckets", h.buckets},
            {"rho", h.rho},
            {"zone_depth", h.zone_depth},
            {"min_distinct_estimate", h.min_distinct_estimate},
            {"confidence", h.conf.level},
            {"a_delta", h.conf.coefficient},
            {"queries", h.counts.queries},
            {"parse_errors", h.counts.parse_errors},
            {"sketched", h.counts.sketched},
            {"subkey_whitelisted", h.counts.subkey_whitelisted},
            {"zone_whitelisted", h.counts.zone_whitelisted},
            {"signatures", signatures.size()}};
  out << head.dump() << '\n';
  for (const auto& s : signatures) {
    json rec{{"type", "signature"},
             {"zone", s.zone},
             {"estimated_distinct", s.estimated_distinct},
             {"estimated_combined", s.estimated_combined},
             {"distinct_interval", interval_json(s.distinct_interval)},
             {"combined_interval", interval_json(s.combined_interval)},
             {"rule", s.rule}};
    out << rec.dump() << '\n';
  }
}

void write_eval_jsonl(std::ostream& out, const EvalReport& report, const EvalParams& params) {
  const EvalSummary& s = report.summary;
  json head{{"type", "header"},
            {"kind", params.kind == WeightKind::kCombined ? "combined" : "distinct"},
            {"k", params.capacity},
            {"buckets", params.buckets},
            {"rho", params.rho},
            {"a_delta", params.conf.coefficient},
            {"threshold", s.threshold},
            {"fn_rule", "uncached and truth - t > a_delta * truth / sqrt(2*buckets)"},
            {"fp_rule", "cached, estimate >= t, truth < t and t - truth > a_delta * cardest / sqrt(2*buckets)"},
            {"keys", s.keys},
            {"cached", s.cached},
            {"detected", s.detected},
            {"heavy", s.heavy},
            {"heavy_cached", s.heavy_cached},
            {"coverage", s.coverage()},
            {"false_positives", s.false_positives},
            {"false_negatives", s.false_negatives},
            {"overestimates", s.overestimates},
            {"overestimates_beyond_interval", s.overestimates_beyond_interval},
            {"mean_error", s.mean_error},
            {"median_error", s.median_error}};
  out << head.dump() << '\n';
  for (const auto& r : report.rows) {
    json rec{{"key", r.key},       {"true_h", r.true_h}, {"true_w", r.true_w}, {"truth", r.truth},
             {"cached", r.cached}, {"estimate", r.estimate}, {"lo", r.lo}, {"hi", r.hi},
             {"detected", r.detected}, {"fn", r.false_negative}, {"fp", r.false_positive}};
    out << rec.dump() << '\n';
  }
}

}  // namespace wsketch::io
