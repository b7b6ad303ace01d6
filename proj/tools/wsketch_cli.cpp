// wsketch: distinct / combined heavy hitter sketches and the DNS
// random-subdomain detection pipeline.

#include <CLI11.hpp>
#include <json.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wsketch/chh_sketch.hpp"
#include "wsketch/classic_hh.hpp"
#include "wsketch/dns.hpp"
#include "wsketch/dws_sketch.hpp"
#include "wsketch/errors.hpp"
#include "wsketch/evaluate.hpp"
#include "wsketch/hashing.hpp"
#include "wsketch/kernels.hpp"
#include "wsketch/oracle.hpp"
#include "wsketch/report_io.hpp"
#include "wsketch/synthetic.hpp"
#include "wsketch/trace.hpp"

namespace {

using namespace wsketch;

struct GlobalOptions {
  std::string hash_seed = "0x5eed";
  std::size_t capacity = 2000;
  std::uint32_t buckets = 64;
  double rho = 0.1;
  std::size_t zone_depth = 2;
  std::optional<double> confidence;
  std::optional<double> a_delta;
  std::string simd = "auto";
  bool leftmost_label = false;

  [[nodiscard]] std::uint64_t seed() const {
    const auto v = parse_seed(hash_seed);
    if (!v) throw InvalidParameter("--hash-seed: expected a decimal or 0x-prefixed hex value");
    return *v;
  }
  [[nodiscard]] Confidence conf() const {
    Confidence c = confidence ? Confidence::normal(*confidence) : Confidence::standard();
    if (a_delta) c.coefficient = *a_delta;
    return c;
  }
  [[nodiscard]] dns::DetectorConfig detector() const {
    dns::DetectorConfig d;
    d.capacity = capacity;
    d.buckets = buckets;
    d.rho = rho;
    d.hash_seed = seed();
    d.zone_depth = zone_depth;
    d.subkey_mode = leftmost_label ? dns::SubkeyMode::kLeftmostLabel : dns::SubkeyMode::kFullPrefix;
    return d;
  }
};

// Output stream for a path, "-" meaning stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

TraceFormat parse_format(const std::string& s) {
  if (s == "auto") return TraceFormat::kAuto;
  if (s == "pairs") return TraceFormat::kPairs;
  if (s == "dns") return TraceFormat::kDns;
  throw InvalidParameter("--format must be auto, pairs or dns");
}

struct LoadedTrace {
  Trace pairs;
  std::uint64_t parse_errors = 0;
  TraceFormat format = TraceFormat::kPairs;
};

// Reads a pair trace or a DNS trace (split into zone / VAR pairs).
LoadedTrace load_trace(const std::string& path, TraceFormat format, const GlobalOptions& g) {
  const auto lines = read_data_lines(path);
  LoadedTrace out;
  out.format = format == TraceFormat::kAuto ? (lines.empty() ? TraceFormat::kPairs : detect_line_format(lines[0]))
                                            : format;
  out.pairs.reserve(lines.size());
  const auto mode = g.leftmost_label ? dns::SubkeyMode::kLeftmostLabel : dns::SubkeyMode::kFullPrefix;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (out.format == TraceFormat::kPairs) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0) {
        throw ParseError("line " + std::to_string(lineno) + ": expected key<TAB>subkey");
      }
      out.pairs.push_back({line.substr(0, tab), line.substr(tab + 1)});
      continue;
    }
    try {
      const auto rec = parse_dns_line(line);
      auto split = dns::parse_query(rec.qname, g.zone_depth, mode);
      out.pairs.push_back({std::move(split.key), std::move(split.subkey)});
    } catch (const ParseError&) {
      ++out.parse_errors;
    }
  }
  return out;
}

int run_gen(const GlobalOptions&, const std::string& kind, std::uint64_t seed, const std::string& output,
            const std::string& labels_path, synthetic::PairTraceConfig pairs_cfg,
            const std::vector<std::string>& inject, bool no_inject, std::optional<std::uint64_t> queries,
            double onset) {
  Output out(output);
  if (kind == "pairs") {
    pairs_cfg.rng_seed = seed;
    if (no_inject) pairs_cfg.injected.clear();
    if (!inject.empty()) {
      pairs_cfg.injected.clear();
      for (std::size_t i = 0; i < inject.size(); ++i) {
        const auto parts = split(inject[i], ':');
        synthetic::InjectedKey key;
        key.cardinality = std::stoull(std::string(parts[0]));
        key.repetitions = parts.size() > 1 ? std::stoull(std::string(parts[1])) : 1;
        char name[32];
        std::snprintf(name, sizeof(name), "x%07zu", i);
        key.key = name;
        pairs_cfg.injected.push_back(key);
      }
    }
    write_pairs(out.stream(), synthetic::generate_pairs(pairs_cfg));
    return 0;
  }
  synthetic::DnsCaptureConfig cfg;
  if (kind == "dns-attack") {
    cfg = synthetic::attack_capture_config(seed);
  } else if (kind == "dns-peacetime") {
    cfg = synthetic::peacetime_capture_config(seed);
  } else {
    throw InvalidParameter("--kind must be pairs, dns-attack or dns-peacetime");
  }
  if (queries) cfg.total_queries = *queries;
  cfg.attack_onset = onset;
  const auto capture = synthetic::generate_dns(cfg);
  out.stream() << "# synthetic " << kind << " capture, seed " << seed << "\n";
  write_dns(out.stream(), capture.records);
  if (!labels_path.empty()) {
    Output lab(labels_path);
    for (auto l : capture.labels) lab.stream() << static_cast<int>(l) << '\n';
  }
  return 0;
}

int run_sketch(const GlobalOptions& g, const std::string& algo, const std::string& input, const std::string& format,
               const std::string& output, const std::string& state_out, std::size_t ss_capacity) {
  const auto trace = load_trace(input, parse_format(format), g);
  Output out(output);
  if (algo == "ss") {
    SpaceSaving ss(ss_capacity);
    for (const auto& e : trace.pairs) ss.process(e.key);
    out.stream() << R"({"type":"header","algo":"ss","capacity":)" << ss_capacity << R"(,"elements":)" << ss.total()
                 << "}\n";
    for (const auto& item : ss.top(1)) {
      out.stream() << nlohmann::json{{"key", item.key}, {"count", item.count}, {"bound", item.bound}}.dump() << '\n';
    }
    return 0;
  }
  io::SketchReport report;
  auto& h = report.header;
  h.algo = algo;
  h.capacity = g.capacity;
  h.buckets = g.buckets;
  h.hash_seed = g.seed();
  h.conf = g.conf();
  h.elements = trace.pairs.size();
  std::string state;
  if (algo == "dws") {
    DwsSketch sketch(g.capacity, g.buckets, h.hash_seed);
    for (const auto& e : trace.pairs) sketch.process(e.key, e.subkey);
    report.records = sketch.report();
    h.tau = sketch.tau();
    state = sketch.serialize();
  } else if (algo == "cws") {
    ChhSketch sketch(g.capacity, g.buckets, g.rho, h.hash_seed);
    for (const auto& e : trace.pairs) sketch.process(e.key, e.subkey);
    report.records = sketch.report();
    h.tau = sketch.tau();
    h.rho = g.rho;
    state = sketch.serialize();
  } else {
    throw InvalidParameter("--algo must be dws, cws or ss");
  }
  h.entries = report.records.size();
  h.serialized_bytes = state.size();
  if (!state_out.empty()) {
    Output st(state_out);
    st.stream().write(state.data(), static_cast<std::streamsize>(state.size()));
  }
  io::write_sketch_report(out.stream(), report);
  return 0;
}

int run_peacetime(const GlobalOptions& g, const std::string& input, const std::string& output,
                  std::optional<double> zone_min, std::optional<double> subkey_min, std::size_t ss_capacity,
                  const std::string& state_out) {
  auto cfg = g.detector();
  cfg.subkey_capacity = ss_capacity;
  dns::PeacetimeState state(cfg);
  for_each_data_line(input, [&](std::string_view line) {
    try {
      state.process(parse_dns_line(line).qname);
    } catch (const ParseError&) {
      state.process("");  // counted as a parse error
    }
  });
  auto th = dns::default_whitelist_thresholds(state);
  if (zone_min) th.zone_min_combined = *zone_min;
  if (subkey_min) th.subkey_min_freq = *subkey_min;
  const auto wl = dns::build_whitelists(state, th, g.conf());
  Output out(output);
  out.stream() << "# peacetime queries=" << state.counts().queries << " parse_errors=" << state.counts().parse_errors
               << " zone_min_combined=" << th.zone_min_combined << " subkey_min_freq=" << th.subkey_min_freq
               << " hash_seed=" << cfg.hash_seed << "\n";
  dns::write_whitelist(out.stream(), wl);
  if (!state_out.empty()) {
    const std::string bytes = state.zones().serialize();
    Output st(state_out);
    st.stream().write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  return 0;
}

int run_detect(const GlobalOptions& g, const std::string& input, const std::string& whitelist,
               const std::string& output, std::optional<double> min_distinct) {
  const auto cfg = g.detector();
  dns::AttackState state(cfg, whitelist.empty() ? dns::Whitelist{} : dns::read_whitelist(whitelist));
  for_each_data_line(input, [&](std::string_view line) {
    try {
      state.process(parse_dns_line(line).qname);
    } catch (const ParseError&) {
      state.process("");
    }
  });
  io::SignatureReportHeader h;
  h.hash_seed = cfg.hash_seed;
  h.capacity = cfg.capacity;
  h.buckets = cfg.buckets;
  h.rho = cfg.rho;
  h.zone_depth = cfg.zone_depth;
  h.min_distinct_estimate = min_distinct.value_or(dns::default_min_distinct(state));
  h.conf = g.conf();
  h.counts = state.counts();
  Output out(output);
  io::write_signature_report(out.stream(), h, dns::signatures(state, h.min_distinct_estimate, h.conf));
  return 0;
}

int run_eval(const GlobalOptions& g, const std::string& trace_path, const std::string& format,
             const std::string& report_path, const std::string& kind, const std::string& csv,
             const std::string& jsonl, std::size_t rows) {
  const auto report = io::read_sketch_report(report_path);
  const auto trace = load_trace(trace_path, parse_format(format), g);
  const auto oracle = ExactOracle::from_trace(trace.pairs);
  EvalParams params;
  params.capacity = report.header.capacity;
  params.buckets = report.header.buckets;
  params.conf = report.header.conf;
  params.rho = report.header.algo == "cws" ? report.header.rho : g.rho;
  const std::string k = kind == "auto" ? (report.header.algo == "cws" ? "combined" : "distinct") : kind;
  if (k == "combined") {
    params.kind = WeightKind::kCombined;
  } else if (k != "distinct") {
    throw InvalidParameter("--kind must be auto, distinct or combined");
  }
  const auto result = evaluate(report.records, oracle, params);
  write_eval_table(std::cout, result, rows);
  std::cout << "sketch entries=" << report.header.entries << " serialized_bytes=" << report.header.serialized_bytes
            << " oracle distinct_pairs=" << oracle.distinct_pairs() << " oracle_bytes=" << oracle.payload_bytes()
            << "\n";
  if (!csv.empty()) {
    Output out(csv);
    write_eval_csv(out.stream(), result);
  }
  if (!jsonl.empty()) {
    Output out(jsonl);
    io::write_eval_jsonl(out.stream(), result, params);
  }
  return 0;
}

int run_oracle(const GlobalOptions& g, const std::string& input, const std::string& format,
               const std::string& output) {
  const auto trace = load_trace(input, parse_format(format), g);
  const auto oracle = ExactOracle::from_trace(trace.pairs);
  Output out(output);
  out.stream() << "# key\th\tw\tcombined(rho=" << g.rho << ")\n";
  char buf[64];
  for (const auto& key : oracle.keys()) {
    const auto* kw = oracle.find(key);
    std::snprintf(buf, sizeof(buf), "%.6g", kw->combined(g.rho));
    out.stream() << key << '\t' << kw->h << '\t' << kw->w << '\t' << buf << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distinct and combined heavy hitter sketches; DNS random-subdomain attack detection"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--hash-seed", g.hash_seed, "Hash seed, decimal or 0x-prefixed hex");
  app.add_option("-k,--cache-size", g.capacity, "Sketch cache size k")->check(CLI::PositiveNumber);
  app.add_option("-l,--buckets", g.buckets, "Buckets per distinct counter")->check(CLI::Range(2u, 1u << 20));
  app.add_option("--rho", g.rho, "Combined weight mixing parameter")->check(CLI::Range(1e-9, 1.0));
  app.add_option("--zone-depth", g.zone_depth, "Labels in a DNS zone key")->check(CLI::PositiveNumber);
  app.add_option("--confidence", g.confidence, "Confidence level; a_delta from the normal quantile")
      ->check(CLI::Range(0.5, 0.999999));
  app.add_option("--a-delta", g.a_delta, "Override the interval coefficient a_delta");
  app.add_flag("--leftmost-label", g.leftmost_label, "Use only the leftmost label as the DNS subkey");
  app.add_option("--simd", g.simd, "Kernel variant: auto, scalar, avx2, neon");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic trace");
  std::string gen_kind = "pairs", gen_out = "-", gen_labels;
  std::uint64_t gen_seed = 1;
  std::vector<std::string> inject;
  bool no_inject = false;
  std::optional<std::uint64_t> gen_queries;
  double gen_onset = 0.0;
  auto pairs_cfg = synthetic::replica_config();
  gen->add_option("--kind", gen_kind, "pairs | dns-attack | dns-peacetime");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("-o,--output", gen_out, "Output file ('-' for stdout)");
  gen->add_option("--keys", pairs_cfg.num_keys, "Background keys");
  gen->add_option("--pairs", pairs_cfg.background_pairs, "Background elements");
  gen->add_option("--skew", pairs_cfg.key_skew, "Key popularity exponent");
  gen->add_option("--new-subkey-prob", pairs_cfg.new_subkey_prob, "Chance of a fresh background subkey");
  gen->add_option("--inject", inject, "Injected key as cardinality[:repetitions]; repeatable");
  gen->add_flag("--no-inject", no_inject, "Background only");
  gen->add_option("--queries", gen_queries, "DNS capture size");
  gen->add_option("--labels", gen_labels, "Write per-query labels (DNS kinds)");
  gen->add_option("--attack-onset", gen_onset, "Fraction of the capture before the attack starts")
      ->check(CLI::Range(0.0, 0.999));

  // sketch
  auto* sk = app.add_subcommand("sketch", "Run a sketch over a trace and emit a report");
  std::string sk_algo = "dws", sk_in = "-", sk_format = "auto", sk_out = "-", sk_state;
  std::size_t ss_capacity = 256;
  sk->add_option("--algo", sk_algo, "dws | cws | ss");
  sk->add_option("-i,--input", sk_in, "Trace file ('-' for stdin; gzip accepted)");
  sk->add_option("--format", sk_format, "auto | pairs | dns");
  sk->add_option("-o,--output", sk_out, "Report file");
  sk->add_option("--save-state", sk_state, "Write the binary sketch state");
  sk->add_option("--ss-capacity", ss_capacity, "Space-Saving counters")->check(CLI::PositiveNumber);

  // peacetime
  auto* pt = app.add_subcommand("peacetime", "Build zone and subkey whitelists from a peacetime DNS trace");
  std::string pt_in = "-", pt_out = "-", pt_state;
  std::optional<double> zone_min, subkey_min;
  std::size_t pt_ss = 256;
  pt->add_option("-i,--input", pt_in, "DNS trace");
  pt->add_option("-o,--output", pt_out, "Whitelist file");
  pt->add_option("--zone-min-combined", zone_min, "Combined estimate needed to whitelist a zone");
  pt->add_option("--subkey-min-freq", subkey_min, "Fraction of queries needed to whitelist a subkey");
  pt->add_option("--ss-capacity", pt_ss, "Space-Saving counters")->check(CLI::PositiveNumber);
  pt->add_option("--state-out", pt_state, "Write the binary peacetime zone sketch");

  // detect
  auto* dt = app.add_subcommand("detect", "Emit attack signatures for a DNS trace");
  std::string dt_in = "-", dt_wl, dt_out = "-";
  std::optional<double> min_distinct;
  dt->add_option("-i,--input", dt_in, "DNS trace of the attack window");
  dt->add_option("-w,--whitelist", dt_wl, "Whitelist from the peacetime phase");
  dt->add_option("-o,--output", dt_out, "Signature report");
  dt->add_option("--min-distinct", min_distinct, "Distinct estimate needed for a signature");

  // eval
  auto* ev = app.add_subcommand("eval", "Compare a sketch report with exact counts");
  std::string ev_trace, ev_format = "auto", ev_report = "-", ev_kind = "auto", ev_csv, ev_jsonl;
  std::size_t ev_rows = 20;
  ev->add_option("--trace", ev_trace, "Trace the report was built from")->required();
  ev->add_option("--format", ev_format, "auto | pairs | dns");
  ev->add_option("--report", ev_report, "Sketch report ('-' for stdin)");
  ev->add_option("--kind", ev_kind, "auto | distinct | combined");
  ev->add_option("--csv", ev_csv, "Write per-key CSV");
  ev->add_option("--jsonl", ev_jsonl, "Write per-key JSON lines");
  ev->add_option("--rows", ev_rows, "Rows in the table");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact per-key h, w and combined weight");
  std::string or_in = "-", or_format = "auto", or_out = "-";
  orc->add_option("-i,--input", or_in, "Trace");
  orc->add_option("--format", or_format, "auto | pairs | dns");
  orc->add_option("-o,--output", or_out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g.simd != "auto") kernels::set_active_isa(kernels::parse_isa(g.simd));
    if (*gen) return run_gen(g, gen_kind, gen_seed, gen_out, gen_labels, pairs_cfg, inject, no_inject, gen_queries,
                                gen_onset);
    if (*sk) return run_sketch(g, sk_algo, sk_in, sk_format, sk_out, sk_state, ss_capacity);
    if (*pt) return run_peacetime(g, pt_in, pt_out, zone_min, subkey_min, pt_ss, pt_state);
    if (*dt) return run_detect(g, dt_in, dt_wl, dt_out, min_distinct);
    if (*ev) return run_eval(g, ev_trace, ev_format, ev_report, ev_kind, ev_csv, ev_jsonl, ev_rows);
    if (*orc) return run_oracle(g, or_in, or_format, or_out);
  } catch (const std::exception& e) {
    std::cerr << "wsketch: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
