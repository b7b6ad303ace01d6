#include "wsketch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "wsketch/errors.hpp"
#include "wsketch/hashing.hpp"

namespace wsketch::synthetic {
namespace {

// Platform-independent draws on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return to_unit(gen_()); }
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

// Inverse-CDF sampler for P(i) proportional to (i+1)^-skew.
class PowerLaw {
 public:
  PowerLaw(std::uint64_t n, double skew) : cdf_(n) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      acc += std::pow(static_cast<double>(i + 1), -skew);
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }
  std::uint64_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::string fixed_name(char prefix, std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%07llu", prefix, static_cast<unsigned long long>(id));
  return buf;
}

std::string random_label(Rng& rng, std::size_t len) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string s(len, 'a');
  for (auto& c : s) c = kAlphabet[rng.below(sizeof(kAlphabet) - 1)];
  return s;
}

}  // namespace

PairTraceConfig replica_config(std::uint64_t rng_seed) {
  PairTraceConfig c;
  c.rng_seed = rng_seed;
  c.injected = {{"x0002000", 2000, 1}, {"x0001000", 1000, 1}, {"x0000500", 500, 1}, {"x0000250", 250, 1}};
  return c;
}

Trace generate_pairs(const PairTraceConfig& config) {
  if (config.num_keys == 0 && config.injected.empty()) throw InvalidParameter("generator: nothing to generate");
  if (config.background_pairs < config.num_keys) {
    throw InvalidParameter("generator: background pairs must cover every background key once");
  }
  if (!(config.new_subkey_prob >= 0.0 && config.new_subkey_prob <= 1.0)) {
    throw InvalidParameter("generator: new_subkey_prob must be in [0,1]");
  }
  for (const auto& inj : config.injected) {
    if (inj.cardinality == 0 || inj.repetitions == 0) {
      throw InvalidParameter("generator: injected keys need cardinality and repetitions >= 1");
    }
  }
  Rng rng(config.rng_seed);

  // Per-key element counts: one each, the rest by the power law.
  std::vector<std::uint64_t> counts(config.num_keys, 1);
  if (config.num_keys > 0) {
    const PowerLaw law(config.num_keys, config.key_skew);
    for (std::uint64_t i = config.num_keys; i < config.background_pairs; ++i) ++counts[law(rng)];
  }

  Trace trace;
  std::uint64_t total = config.background_pairs;
  for (const auto& inj : config.injected) total += inj.cardinality * inj.repetitions;
  trace.reserve(total);

  for (std::uint64_t k = 0; k < config.num_keys; ++k) {
    const std::string key = fixed_name('k', k);
    std::uint64_t distinct = 0;
    for (std::uint64_t n = 0; n < counts[k]; ++n) {
      std::uint64_t sub;
      if (distinct == 0 || rng.uniform() < config.new_subkey_prob) {
        sub = distinct++;
      } else {
        sub = rng.below(distinct);
      }
      trace.push_back({key, "s" + std::to_string(sub)});
    }
  }
  for (const auto& inj : config.injected) {
    for (std::uint64_t s = 0; s < inj.cardinality; ++s) {
      for (std::uint64_t r = 0; r < inj.repetitions; ++r) trace.push_back({inj.key, "u" + std::to_string(s)});
    }
  }
  rng.shuffle(trace);
  return trace;
}

const std::vector<std::string>& common_labels() {
  static const std::vector<std::string> labels = {"www", "mail", "api", "cdn", "m", "smtp", "img", "static",
                                                  "login", "app", "ns1", "ns2", "ftp", "news", "shop", "mx"};
  return labels;
}

DnsCaptureConfig attack_capture_config(std::uint64_t rng_seed) {
  DnsCaptureConfig c;
  c.rng_seed = rng_seed;
  c.disposable = {{"dsp-metrics.net", 0.20, 200000}, {"cdn-beacon.com", 0.15, 200000}};
  c.attacks = {{"victim-shop.com", 4133, 2051, 40}};
  return c;
}

DnsCaptureConfig peacetime_capture_config(std::uint64_t rng_seed) {
  DnsCaptureConfig c = attack_capture_config(rng_seed);
  c.attacks.clear();
  return c;
}

namespace {

// Keeps the first `onset` fraction of the capture free of attack queries and
// interleaves them uniformly over the rest.
void delay_attacks(std::vector<std::pair<QueryLabel, std::string>>& queries, double onset, Rng& rng) {
  std::vector<std::pair<QueryLabel, std::string>> attack, other;
  for (auto& q : queries) (q.first == QueryLabel::kAttack ? attack : other).push_back(std::move(q));
  const auto head = std::min(other.size(), static_cast<std::size_t>(onset * static_cast<double>(queries.size())));
  std::vector<char> is_attack(queries.size() - head, 0);
  std::fill(is_attack.begin(), is_attack.begin() + static_cast<std::ptrdiff_t>(attack.size()), 1);
  rng.shuffle(is_attack);
  std::size_t a = 0, o = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    queries[i] = i >= head && is_attack[i - head] != 0 ? std::move(attack[a++]) : std::move(other[o++]);
  }
}

}  // namespace

DnsCapture generate_dns(const DnsCaptureConfig& config) {
  std::uint64_t attack_total = 0;
  for (const auto& a : config.attacks) {
    if (a.distinct == 0 || a.distinct > a.queries) throw InvalidParameter("generator: attack needs 1 <= distinct <= queries");
    attack_total += a.queries + a.legit_queries;
  }
  if (attack_total > config.total_queries) throw InvalidParameter("generator: attacks exceed the capture size");
  if (config.num_zones == 0) throw InvalidParameter("generator: need at least one background zone");
  if (!(config.attack_onset >= 0.0 && config.attack_onset < 1.0)) {
    throw InvalidParameter("generator: attack onset must be in [0,1)");
  }
  double disposable_share = 0.0;
  for (const auto& d : config.disposable) disposable_share += d.share;
  if (disposable_share >= 1.0) throw InvalidParameter("generator: disposable shares must sum below 1");

  Rng rng(config.rng_seed);
  const PowerLaw zones(config.num_zones, config.zone_skew);
  const PowerLaw labels(common_labels().size(), 1.0);
  std::vector<std::pair<QueryLabel, std::string>> queries;
  queries.reserve(config.total_queries);

  const std::uint64_t background = config.total_queries - attack_total;
  for (std::uint64_t i = 0; i < background; ++i) {
    double u = rng.uniform();
    bool done = false;
    for (const auto& d : config.disposable) {
      if (u < d.share) {
        queries.emplace_back(QueryLabel::kDisposable,
                             "d" + std::to_string(rng.below(d.distinct_subkeys)) + "." + d.zone);
        done = true;
        break;
      }
      u -= d.share;
    }
    if (done) continue;
    const std::uint64_t z = zones(rng);
    const std::string zone = "zone" + std::to_string(z) + (z % 3 == 0 ? ".net" : ".com");
    const double v = rng.uniform();
    std::string name;
    if (v < config.apex_prob) {
      name = zone;
    } else if (v < config.apex_prob + config.common_label_prob) {
      name = common_labels()[labels(rng)] + "." + zone;
    } else {
      name = "host" + std::to_string(z) + "-" + std::to_string(rng.below(config.host_labels_per_zone)) + "." + zone;
    }
    queries.emplace_back(QueryLabel::kBackground, std::move(name));
  }

  for (const auto& a : config.attacks) {
    std::vector<std::string> vars;
    vars.reserve(a.distinct);
    while (vars.size() < a.distinct) {
      std::string s = random_label(rng, 7 + rng.below(6));
      if (std::find(vars.begin(), vars.end(), s) == vars.end()) vars.push_back(std::move(s));
    }
    for (std::uint64_t q = 0; q < a.queries; ++q) {
      const std::string& var = q < a.distinct ? vars[q] : vars[rng.below(a.distinct)];
      queries.emplace_back(QueryLabel::kAttack, var + "." + a.victim);
    }
    for (std::uint64_t q = 0; q < a.legit_queries; ++q) {
      queries.emplace_back(QueryLabel::kVictimLegit, common_labels()[labels(rng)] + "." + a.victim);
    }
  }
  rng.shuffle(queries);
  if (config.attack_onset > 0.0) delay_attacks(queries, config.attack_onset, rng);

  DnsCapture capture;
  capture.records.reserve(queries.size());
  capture.labels.reserve(queries.size());
  const double step = queries.empty() ? 0.0 : config.duration_seconds / static_cast<double>(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double ts = std::round((config.start_epoch + step * static_cast<double>(i)) * 1000.0) / 1000.0;
    capture.records.push_back({ts, std::move(queries[i].second), "A"});
    capture.labels.push_back(queries[i].first);
  }
  return capture;
}

}  // namespace wsketch::synthetic
