#pragma once

// Line-delimited JSON records: one header object followed by one object per row.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wsketch/dns.hpp"
#include "wsketch/estimate.hpp"
#include "wsketch/evaluate.hpp"
#include "wsketch/sampling_cache.hpp"

namespace wsketch::io {

struct SketchReportHeader {
  std::string algo = "dws";  // "dws" or "cws"
  std::uint64_t capacity = 0;
  std::uint32_t buckets = 0;
  double rho = 0.0;
  std::uint64_t hash_seed = 0;
  Confidence conf = Confidence::standard();
  double tau = 1.0;
  std::uint64_t elements = 0;
  std::uint64_t entries = 0;
  std::uint64_t serialized_bytes = 0;
};

struct SketchReport {
  SketchReportHeader header;
  std::vector<ReportRecord> records;
};

// Each record carries key, cardest, lo, hi, tau_entry, seed; cws adds f and combined.
void write_sketch_report(std::ostream& out, const SketchReport& report);
[[nodiscard]] SketchReport read_sketch_report(const std::string& path);
[[nodiscard]] SketchReport parse_sketch_report(const std::vector<std::string>& lines);

struct SignatureReportHeader {
  std::uint64_t hash_seed = 0;
  std::uint64_t capacity = 0;
  std::uint32_t buckets = 0;
  double rho = 0.0;
  std::uint64_t zone_depth = 2;
  double min_distinct_estimate = 0.0;
  Confidence conf = Confidence::standard();
  dns::PhaseCounts counts;
};

void write_signature_report(std::ostream& out, const SignatureReportHeader& header,
                            const std::vector<dns::Signature>& signatures);

// Header with the deviation rules and summary, then one record per oracle key.
void write_eval_jsonl(std::ostream& out, const EvalReport& report, const EvalParams& params);

}  // namespace wsketch::io
