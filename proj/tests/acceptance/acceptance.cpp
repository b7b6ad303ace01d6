// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wsketch/chh_sketch.hpp"
#include "wsketch/classic_hh.hpp"
#include "wsketch/distinct_counter.hpp"
#include "wsketch/dns.hpp"
#include "wsketch/dws_sketch.hpp"
#include "wsketch/evaluate.hpp"
#include "wsketch/hashing.hpp"
#include "wsketch/oracle.hpp"
#include "wsketch/synthetic.hpp"

namespace {

using namespace wsketch;

// Tolerances.
constexpr double kC1NrmseLo = 0.08;
constexpr double kC1NrmseHi = 0.12;
constexpr double kC1MaxSeconds = 30.0;
constexpr int kC2Seeds = 100;
constexpr int kC2RequiredHits = 99;
constexpr int kC2ErrorSeeds = 20;
constexpr double kC2MaxMedianError = 5.0;
constexpr double kC2MaxSecondsPerRun = 120.0;
constexpr double kC3MaxBeyondFraction = 0.01;
constexpr int kC3RequiredCleanSeeds = 95;
constexpr int kC4Seeds = 100000;
constexpr double kC4Sigmas = 3.0;
constexpr int kC5Traces = 50;
constexpr int kC6Seeds = 500;
constexpr double kC6MinCoverage = 0.90;
constexpr int kC7Seeds = 100;
constexpr int kC7RequiredOutrank = 99;
constexpr int kC7RequiredAbsent = 95;
constexpr int kC8Seeds = 100;
constexpr double kC8MinRatio = 0.99;
constexpr int kC8RequiredRuns = 95;
constexpr double kC9MinOracleGrowth = 9.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const char* name, const Outcome& o) {
  std::printf("CRITERION %d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void info(int id, const std::string& text) {
  std::printf("  [%d] %s\n", id, text.c_str());
  std::fflush(stdout);
}

// 1. HIP accuracy.
Outcome hip_accuracy() {
  constexpr int kSeeds = 200;
  constexpr int kN = 100000;
  constexpr std::uint32_t kL = 50;
  const auto t0 = std::chrono::steady_clock::now();
  double sq = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const PairHasher hasher(0xC1000 + s, kL);
    DistinctCounter c(kL);
    for (int i = 0; i < kN; ++i) c.merge(hasher("key", std::to_string(i)));
    const double rel = (c.card_est() - kN) / kN;
    sq += rel * rel;
  }
  const double nrmse = std::sqrt(sq / kSeeds);
  const double secs = seconds_since(t0);
  return {nrmse >= kC1NrmseLo && nrmse <= kC1NrmseHi && secs < kC1MaxSeconds,
          format("NRMSE=%.4f (need [%.2f, %.2f]); predicted 1/sqrt(2l)=%.4f; %d seeds x %d merges, l=%u; %.1fs",
                 nrmse, kC1NrmseLo, kC1NrmseHi, 1.0 / std::sqrt(2.0 * kL), kSeeds, kN, kL, secs)};
}

// 2 and 3 share the replica runs.
struct ReplicaRun {
  bool all_injected = false;
  std::vector<double> errors;  // |card_est - w| per cached key
  std::vector<double> errors_w10;  // same, keys with w >= 10
  std::size_t cached = 0;
  std::size_t beyond = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double seconds = 0.0;
};

ReplicaRun replica_run(std::uint64_t seed) {
  constexpr std::size_t kK = 2000;
  constexpr std::uint32_t kL = 64;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = synthetic::replica_config(seed);
  const Trace trace = synthetic::generate_pairs(cfg);
  DwsSketch sketch(kK, kL, 0xC2000 + seed);
  for (const auto& e : trace) sketch.process(e.key, e.subkey);
  const auto records = sketch.report();
  const auto oracle = ExactOracle::from_trace(trace);

  ReplicaRun run;
  run.all_injected = true;
  for (const auto& inj : cfg.injected) run.all_injected &= sketch.cache().find(inj.key).has_value();
  EvalParams params;
  params.capacity = kK;
  params.buckets = kL;
  const auto ev = evaluate(records, oracle, params);
  for (const auto& r : records) {
    const auto w = static_cast<double>(oracle.find(r.key)->w);
    run.errors.push_back(std::abs(r.card_est - w));
    if (w >= 10) run.errors_w10.push_back(std::abs(r.card_est - w));
  }
  run.cached = ev.summary.cached;
  run.beyond = ev.summary.overestimates_beyond_interval;
  run.false_positives = ev.summary.false_positives;
  run.false_negatives = ev.summary.false_negatives;
  run.seconds = seconds_since(t0);
  return run;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid))) / 2.0;
  }
  return m;
}

void replica_criteria() {
  std::vector<ReplicaRun> runs;
  for (int s = 1; s <= kC2Seeds; ++s) runs.push_back(replica_run(static_cast<std::uint64_t>(s)));

  int hits = 0;
  double max_secs = 0.0;
  std::vector<double> pooled, pooled_w10;
  double mean_sum = 0.0;
  std::size_t mean_n = 0;
  for (int i = 0; i < kC2Seeds; ++i) {
    hits += runs[i].all_injected ? 1 : 0;
    max_secs = std::max(max_secs, runs[i].seconds);
    if (i < kC2ErrorSeeds) {
      pooled.insert(pooled.end(), runs[i].errors.begin(), runs[i].errors.end());
      pooled_w10.insert(pooled_w10.end(), runs[i].errors_w10.begin(), runs[i].errors_w10.end());
      for (double e : runs[i].errors) mean_sum += e;
      mean_n += runs[i].errors.size();
    }
  }
  const double med = median(pooled);
  info(2, format("informational: median |CardEst - w| over cached keys with w >= 10: %.3f (%zu keys)",
                 median(pooled_w10), pooled_w10.size()));
  report(2, "replica_detection",
         {hits >= kC2RequiredHits && med <= kC2MaxMedianError && max_secs < kC2MaxSecondsPerRun,
          format("all 4 injected keys cached in %d/%d runs (need >= %d); median |CardEst - w| over cached keys of "
                 "%d runs = %.3f (need <= %.1f), mean = %.3f; slowest run %.2fs",
                 hits, kC2Seeds, kC2RequiredHits, kC2ErrorSeeds, med, kC2MaxMedianError,
                 mean_n ? mean_sum / static_cast<double>(mean_n) : 0.0, max_secs)});

  std::size_t cached = 0, beyond = 0, fn = 0;
  int clean = 0;
  for (const auto& r : runs) {
    cached += r.cached;
    beyond += r.beyond;
    fn += r.false_negatives;
    clean += r.false_positives == 0 ? 1 : 0;
  }
  const double frac = static_cast<double>(beyond) / static_cast<double>(std::max<std::size_t>(cached, 1));
  report(3, "overestimate_and_fp_discipline",
         {frac <= kC3MaxBeyondFraction && clean >= kC3RequiredCleanSeeds,
          format("cached keys with w below the interval: %zu/%zu = %.5f (need <= %.2f); runs without FP: %d/%d "
                 "(need >= %d); FN total %zu",
                 beyond, cached, frac, kC3MaxBeyondFraction, clean, kC2Seeds, kC3RequiredCleanSeeds, fn)});
}

// 4. ppswor.
std::map<std::pair<int, int>, double> ppswor_pairs(const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  std::map<std::pair<int, int>, double> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      out[{static_cast<int>(i), static_cast<int>(j)}] =
          w[i] / total * w[j] / (total - w[i]) + w[j] / total * w[i] / (total - w[j]);
    }
  }
  return out;
}

struct PpsworCheck {
  bool pass = true;
  double worst_z = 0.0;
};

PpsworCheck compare(const std::map<std::pair<int, int>, int>& counts, const std::map<std::pair<int, int>, double>& p,
                    int n) {
  PpsworCheck c;
  for (const auto& [cell, prob] : p) {
    const auto it = counts.find(cell);
    const double observed = it == counts.end() ? 0.0 : it->second;
    const double z = std::abs(observed - n * prob) / std::sqrt(n * prob * (1.0 - prob));
    c.worst_z = std::max(c.worst_z, z);
    c.pass &= z <= kC4Sigmas;
  }
  return c;
}

Outcome ppswor() {
  const std::vector<double> w{8, 4, 2, 1, 1};
  const auto expected = ppswor_pairs(w);
  std::map<std::pair<int, int>, int> sh_counts, dws_counts;
  const std::string names = "abcde";
  for (int s = 0; s < kC4Seeds; ++s) {
    // Elements interleaved round-robin so no key arrives as a block.
    auto sh = SampleAndHold::fixed_size(2, 0xC4000 + s);
    DwsSketch dws(2, 2, 0xC4000 + s);
    for (int r = 0; r < 8; ++r) {
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (r >= w[k]) continue;
        const std::string key(1, names[k]);
        sh.process(key);
        dws.process(key, std::to_string(r));
      }
    }
    auto sh_it = sh.entries().begin();
    ++sh_counts[{sh_it->first[0] - 'a', std::next(sh_it)->first[0] - 'a'}];
    std::vector<int> d;
    for (const auto& e : dws.cache().entries()) d.push_back(e.key[0] - 'a');
    std::sort(d.begin(), d.end());
    ++dws_counts[{d[0], d[1]}];
  }
  const auto a = compare(sh_counts, expected, kC4Seeds);
  const auto b = compare(dws_counts, expected, kC4Seeds);
  return {a.pass && b.pass,
          format("10 pair cells over %d seeds; worst |z| S&H(by h) = %.2f, dWS(by w) = %.2f (need <= %.1f)", kC4Seeds,
                 a.worst_z, b.worst_z, kC4Sigmas)};
}

// 5. Duplicate insensitivity.
Outcome duplicates() {
  std::mt19937_64 rng(0xC5);
  int identical = 0;
  for (int t = 0; t < kC5Traces; ++t) {
    std::uniform_int_distribution<int> keys(1, 60);
    const int nkeys = keys(rng);
    std::uniform_int_distribution<int> key(0, nkeys - 1);
    std::uniform_int_distribution<int> sub(0, 200);
    Trace trace(200 + t * 20);
    for (auto& e : trace) e = {"k" + std::to_string(key(rng)), "s" + std::to_string(sub(rng))};
    DwsSketch once(8, 32, 0xC5000 + t);
    DwsSketch ten(8, 32, 0xC5000 + t);
    for (const auto& e : trace) once.process(e.key, e.subkey);
    for (const auto& e : trace) {
      for (int r = 0; r < 10; ++r) ten.process(e.key, e.subkey);
    }
    identical += once.serialize() == ten.serialize() ? 1 : 0;
  }
  return {identical == kC5Traces,
          format("%d/%d traces give byte-identical serialized state after 10x replay", identical, kC5Traces)};
}

// 6. Interval coverage.
Outcome coverage() {
  constexpr std::size_t kK = 200;
  constexpr std::uint32_t kL = 64;
  auto cfg = synthetic::replica_config(0xC6);
  cfg.num_keys = 3000;
  cfg.background_pairs = 100000;
  const Trace trace = synthetic::generate_pairs(cfg);
  const auto oracle = ExactOracle::from_trace(trace);
  EvalParams params;
  params.capacity = kK;
  params.buckets = kL;
  std::size_t covered = 0, total = 0, heavy = 0;
  for (int s = 0; s < kC6Seeds; ++s) {
    DwsSketch sketch(kK, kL, 0xC6000 + s);
    for (const auto& e : trace) sketch.process(e.key, e.subkey);
    const auto ev = evaluate(sketch.report(), oracle, params);
    covered += ev.summary.heavy_covered;
    total += ev.summary.heavy_cached;
    heavy += ev.summary.heavy;
  }
  const double cov = static_cast<double>(covered) / static_cast<double>(std::max<std::size_t>(total, 1));
  return {cov >= kC6MinCoverage,
          format("w in [lo,hi] for %zu/%zu (seed, heavy cached key) pairs = %.4f (need >= %.2f); %zu of %zu heavy "
                 "pairs cached; %d seeds, k=%zu, l=%u, a=2",
                 covered, total, cov, kC6MinCoverage, total, heavy, kC6Seeds, kK, kL)};
}

// 7. Combined ordering. A volume key (h = 10^4, w = 10) among keys with
// h = w <= 500, elements shuffled.
Outcome combined_ordering() {
  constexpr std::size_t kK = 500;
  constexpr std::uint32_t kL = 64;
  constexpr double kRho = 0.1;
  Trace trace;
  for (int i = 0; i < 10000; ++i) trace.push_back({"volume", "v" + std::to_string(i % 10)});
  for (int j = 1; j <= 10; ++j) {
    for (int i = 0; i < 50 * j; ++i) trace.push_back({"mid" + std::to_string(j), "s" + std::to_string(i)});
  }
  for (int j = 0; j < 18000; ++j) trace.push_back({"light" + std::to_string(j), "s"});

  int outranks = 0, absent_detected = 0, absent_cache = 0;
  double min_margin = 1e300;
  for (int s = 0; s < kC7Seeds; ++s) {
    std::mt19937_64 rng(0xC7000 + s);
    std::shuffle(trace.begin(), trace.end(), rng);
    ChhSketch cws(kK, kL, kRho, 0xC7000 + s);
    DwsSketch dws(kK, kL, 0xC7000 + s);
    for (const auto& e : trace) {
      cws.process(e.key, e.subkey);
      dws.process(e.key, e.subkey);
    }
    double volume = -1.0, best_other = 0.0;
    for (const auto& r : cws.report()) {
      const double est = cws.estimate(r).point;
      if (r.key == "volume") {
        volume = est;
      } else {
        best_other = std::max(best_other, est);
      }
    }
    if (volume > best_other) ++outranks;
    min_margin = std::min(min_margin, volume - best_other);

    // dWS heavy-hitter output: cached keys whose distinct estimate reaches
    // t = (estimated total distinct weight) / k.
    double total = 0.0;
    const auto dws_report = dws.report();
    for (const auto& r : dws_report) total += dws.estimate(r).point;
    const double t = total / static_cast<double>(kK);
    bool detected = false;
    for (const auto& r : dws_report) detected |= r.key == "volume" && r.card_est >= t;
    absent_detected += detected ? 0 : 1;
    absent_cache += dws.cache().find("volume").has_value() ? 0 : 1;
  }
  info(7, format("informational: volume key not cached at all by dWS in %d/%d runs", absent_cache, kC7Seeds));
  return {outranks >= kC7RequiredOutrank && absent_detected >= kC7RequiredAbsent,
          format("cWS combined estimate of the volume key beats every other key in %d/%d runs (need >= %d, smallest "
                 "margin %.1f); volume key absent from the dWS heavy-hitter output in %d/%d runs (need >= %d)",
                 outranks, kC7Seeds, kC7RequiredOutrank, min_margin, absent_detected, kC7Seeds, kC7RequiredAbsent)};
}

// Identification ratio and signature count for one peacetime/attack pair.
struct DnsRun {
  double ratio = 0.0;
  bool unique_victim = false;
  std::uint64_t whitelisted_victim = 0;
  std::uint64_t leaked = 0;
};

DnsRun dns_run(dns::DetectorConfig cfg, int s, double onset) {
  cfg.hash_seed = 0xC8000 + s;
  const auto peace = synthetic::generate_dns(synthetic::peacetime_capture_config(2 * s + 1000));
  auto attack_cfg = synthetic::attack_capture_config(2 * s + 1001);
  attack_cfg.attack_onset = onset;
  const auto attack = synthetic::generate_dns(attack_cfg);
  const std::string& victim = attack_cfg.attacks.at(0).victim;

  dns::PeacetimeState pt(cfg);
  for (const auto& r : peace.records) pt.process(r.qname);
  dns::AttackState st(cfg, dns::build_whitelists(pt, dns::default_whitelist_thresholds(pt)));
  DnsRun run;
  std::uint64_t attack_total = 0, attack_counted = 0;
  for (std::size_t i = 0; i < attack.records.size(); ++i) {
    const auto out = st.process(attack.records[i].qname);
    if (attack.labels[i] == synthetic::QueryLabel::kAttack) {
      ++attack_total;
      attack_counted += out.disposition == dns::Disposition::kSketched && out.result.counted() ? 1 : 0;
    }
    if (out.split.key == victim && !out.split.subkey.empty() && st.whitelist().has_subkey(out.split.subkey)) {
      ++run.whitelisted_victim;
      run.leaked += out.disposition == dns::Disposition::kSketched ? 1 : 0;
    }
  }
  run.ratio = static_cast<double>(attack_counted) / static_cast<double>(attack_total);
  const auto sigs = dns::signatures(st, dns::default_min_distinct(st));
  run.unique_victim = sigs.size() == 1 && sigs[0].zone == victim;
  return run;
}

// 8. DNS identification.
Outcome dns_identification() {
  dns::DetectorConfig cfg;
  cfg.capacity = 50;
  cfg.buckets = 256;
  cfg.rho = 0.1;
  int good_ratio = 0, unique_victim = 0;
  std::uint64_t leaked = 0, whitelisted_victim = 0;
  double worst = 1.0;
  for (int s = 0; s < kC8Seeds; ++s) {
    const auto run = dns_run(cfg, s, 0.0);
    worst = std::min(worst, run.ratio);
    good_ratio += run.ratio >= kC8MinRatio ? 1 : 0;
    unique_victim += run.unique_victim ? 1 : 0;
    leaked += run.leaked;
    whitelisted_victim += run.whitelisted_victim;
  }
  // Attack starting mid-capture, when the cache is already full.
  double late_sum = 0.0, late_worst = 1.0;
  constexpr int kLateSeeds = 20;
  for (int s = 0; s < kLateSeeds; ++s) {
    const double r = dns_run(cfg, s, 0.5).ratio;
    late_sum += r;
    late_worst = std::min(late_worst, r);
  }
  info(8, format("informational: attack starting at 50%% of the capture: mean ratio %.4f, worst %.4f (%d runs)",
                 late_sum / kLateSeeds, late_worst, kLateSeeds));
  return {good_ratio >= kC8RequiredRuns && unique_victim == kC8Seeds && leaked == 0,
          format("identification ratio >= %.2f in %d/%d runs (need >= %d, worst %.4f); victim is the only signature "
                 "in %d/%d runs; whitelisted-subkey victim queries sketched: %llu of %llu",
                 kC8MinRatio, good_ratio, kC8Seeds, kC8RequiredRuns, worst, unique_victim, kC8Seeds,
                 static_cast<unsigned long long>(leaked), static_cast<unsigned long long>(whitelisted_victim))};
}

// 9. Memory shape.
Outcome memory_shape() {
  constexpr std::size_t kK = 2000;
  constexpr std::uint32_t kL = 64;
  struct Point {
    std::uint64_t length;
    std::size_t entries;
    std::size_t bytes;
    std::uint64_t oracle_entries;
  };
  std::vector<Point> points;
  for (std::uint64_t length : {100000ULL, 1000000ULL}) {
    auto cfg = synthetic::replica_config(0xC9);
    cfg.background_pairs = length;
    cfg.num_keys = length / 30;
    cfg.injected.clear();
    const Trace trace = synthetic::generate_pairs(cfg);
    DwsSketch sketch(kK, kL, 0xC9);
    for (const auto& e : trace) sketch.process(e.key, e.subkey);
    const auto oracle = ExactOracle::from_trace(trace);
    points.push_back({length, sketch.size(), sketch.serialize().size(), oracle.table_entries()});
  }
  const double growth = static_cast<double>(points[1].oracle_entries) / static_cast<double>(points[0].oracle_entries);
  const bool pass = points[0].entries == points[1].entries && points[0].bytes == points[1].bytes &&
                    growth >= kC9MinOracleGrowth;
  return {pass, format("background 1e5 -> 1e6: sketch entries %zu -> %zu, serialized bytes %zu -> %zu; oracle "
                       "entries %llu -> %llu (x%.2f, need >= %.0f)",
                       points[0].entries, points[1].entries, points[0].bytes, points[1].bytes,
                       static_cast<unsigned long long>(points[0].oracle_entries),
                       static_cast<unsigned long long>(points[1].oracle_entries), growth, kC9MinOracleGrowth)};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  report(1, "hip_accuracy", hip_accuracy());
  replica_criteria();
  report(4, "ppswor", ppswor());
  report(5, "duplicate_insensitivity", duplicates());
  report(6, "interval_coverage", coverage());
  report(7, "combined_ordering", combined_ordering());
  report(8, "dns_identification", dns_identification());
  report(9, "memory_shape", memory_shape());
  std::printf("acceptance: %d failing criteria, %.1fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
