#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsketch/trace.hpp"

namespace wsketch::synthetic {

// A key injected with `cardinality` unique subkeys, each repeated `repetitions` times.
struct InjectedKey {
  std::string key;
  std::uint64_t cardinality = 0;
  std::uint64_t repetitions = 1;
};

// Skewed (key, subkey) background plus injected high-cardinality keys,
// shuffled into one stream.
struct PairTraceConfig {
  std::uint64_t num_keys = 33973;          // background keys; each appears at least once
  std::uint64_t background_pairs = 990000; // background elements
  double key_skew = 1.0;                   // power-law exponent of key popularity
  double new_subkey_prob = 0.0158;         // chance a background element uses a fresh subkey
  std::vector<InjectedKey> injected;
  std::uint64_t rng_seed = 1;
};

// The injected-key replica: ~993,750 pairs, ~33,977 keys, ~52,859 distinct pairs,
// with injected cardinalities 2000/1000/500/250.
[[nodiscard]] PairTraceConfig replica_config(std::uint64_t rng_seed = 1);

// Throws InvalidParameter for infeasible configurations.
[[nodiscard]] Trace generate_pairs(const PairTraceConfig& config);

enum class QueryLabel : std::uint8_t { kBackground, kDisposable, kAttack, kVictimLegit };

struct DisposableZone {
  std::string zone;
  double share = 0.05;                 // fraction of background queries
  std::uint64_t distinct_subkeys = 5000;
};

struct AttackSpec {
  std::string victim;
  std::uint64_t queries = 0;
  std::uint64_t distinct = 0;
  std::uint64_t legit_queries = 0;     // queries to the victim with a common (whitelistable) label
};

// DNS capture: popular zones queried mostly with common labels, per-zone
// host labels, apex queries, disposable zones and optional attacks.
struct DnsCaptureConfig {
  std::uint64_t total_queries = 92469;
  std::uint64_t num_zones = 4000;
  double zone_skew = 1.0;
  double common_label_prob = 0.85;
  double apex_prob = 0.05;
  std::uint64_t host_labels_per_zone = 6;
  std::vector<DisposableZone> disposable;
  std::vector<AttackSpec> attacks;
  double attack_onset = 0.0;  // fraction of the capture before the first attack query
  double start_epoch = 1400000000.0;
  double duration_seconds = 600.0;
  std::uint64_t rng_seed = 1;
};

struct DnsCapture {
  std::vector<DnsQueryRecord> records;
  std::vector<QueryLabel> labels;  // parallel to records
};

// A single-victim capture shaped like the 92,469-query / 4,133-attack (2,051
// distinct) recording, with two disposable zones.
[[nodiscard]] DnsCaptureConfig attack_capture_config(std::uint64_t rng_seed = 1);
// Same background without attacks, for whitelist learning.
[[nodiscard]] DnsCaptureConfig peacetime_capture_config(std::uint64_t rng_seed = 2);

[[nodiscard]] DnsCapture generate_dns(const DnsCaptureConfig& config);

// Common host labels used for legitimate queries.
[[nodiscard]] const std::vector<std::string>& common_labels();

}  // namespace wsketch::synthetic
