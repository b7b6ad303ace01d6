#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wsketch/chh_sketch.hpp"
#include "wsketch/classic_hh.hpp"
#include "wsketch/distinct_counter.hpp"
#include "wsketch/estimate.hpp"

namespace wsketch::dns {

// How the variable part of a query name is extracted.
enum class SubkeyMode {
  kFullPrefix,     // every label left of the zone ("bjsufyd.www")
  kLeftmostLabel,  // only the least significant label ("bjsufyd")
};

struct ZoneSplit {
  std::string key;     // zone: the last zone_depth labels
  std::string subkey;  // remaining prefix, possibly empty
};

// Lowercases, strips one trailing dot, rejects empty names and empty labels.
[[nodiscard]] std::string normalize_qname(std::string_view qname);

// Splits a query name into (zone, VAR). Throws ParseError for unparseable names
// and InvalidParameter when zone_depth == 0.
[[nodiscard]] ZoneSplit parse_query(std::string_view qname, std::size_t zone_depth,
                                    SubkeyMode mode = SubkeyMode::kFullPrefix);

struct DetectorConfig {
  std::size_t capacity = 50;  // cHH cache size k
  std::uint32_t buckets = 256;
  double rho = 0.1;
  std::uint64_t hash_seed = 0;
  std::size_t zone_depth = 2;
  SubkeyMode subkey_mode = SubkeyMode::kFullPrefix;
  std::size_t subkey_capacity = 256;  // Space-Saving counters for the subkey whitelist
};

// Running totals for one phase.
struct PhaseCounts {
  std::uint64_t queries = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t sketched = 0;
  std::uint64_t subkey_whitelisted = 0;
  std::uint64_t zone_whitelisted = 0;
};

// Peacetime state: a combined sampler over (zone, VAR) and a Space-Saving
// summary over VAR strings.
class PeacetimeState {
 public:
  explicit PeacetimeState(const DetectorConfig& config);

  // Returns false (and counts a parse error) when the name is unparseable.
  bool process(std::string_view qname);

  [[nodiscard]] const DetectorConfig& config() const noexcept { return config_; }
  [[nodiscard]] const ChhSketch& zones() const noexcept { return zones_; }
  [[nodiscard]] const SpaceSaving& subkeys() const noexcept { return subkeys_; }
  [[nodiscard]] const PhaseCounts& counts() const noexcept { return counts_; }
  // HIP estimate of the number of distinct (zone, VAR) pairs seen.
  [[nodiscard]] double distinct_pairs_estimate() const noexcept { return pairs_.card_est(); }

 private:
  DetectorConfig config_;
  PairHasher pair_hasher_;
  ChhSketch zones_;
  SpaceSaving subkeys_;
  DistinctCounter pairs_;
  PhaseCounts counts_;
};

// Zones and subkeys exempt from attack signatures. Entries are lowercase.
struct Whitelist {
  std::map<std::string, std::uint64_t> zones;    // zone -> rounded combined estimate
  std::map<std::string, std::uint64_t> subkeys;  // subkey -> peacetime count

  [[nodiscard]] bool has_zone(std::string_view z) const { return zones.find(std::string(z)) != zones.end(); }
  [[nodiscard]] bool has_subkey(std::string_view s) const {
    return subkeys.find(std::string(s)) != subkeys.end();
  }
};

struct WhitelistThresholds {
  double zone_min_combined = 0.0;  // combined point estimate needed to whitelist a zone
  double subkey_min_freq = 0.0;    // fraction of peacetime queries needed to whitelist a subkey
};

// 10 * (estimated distinct pairs / k) for zones and 0.1% for subkeys.
[[nodiscard]] WhitelistThresholds default_whitelist_thresholds(const PeacetimeState& state);

// Throws InvalidParameter when a threshold is <= 0.
[[nodiscard]] Whitelist build_whitelists(const PeacetimeState& state, const WhitelistThresholds& thresholds,
                                         Confidence conf = Confidence::standard());

// `[zones]` / `[subkeys]` sections, one entry per line with optional <TAB>count.
void write_whitelist(std::ostream& out, const Whitelist& wl);
[[nodiscard]] Whitelist parse_whitelist(std::string_view text);
[[nodiscard]] Whitelist read_whitelist(const std::string& path);

enum class Disposition : std::uint8_t { kSketched, kSubkeyWhitelisted, kZoneWhitelisted, kParseError };

struct AttackOutcome {
  Disposition disposition = Disposition::kParseError;
  ZoneSplit split;
  ProcessResult result;  // meaningful when sketched
};

// Attack-window state: whitelist filter in front of a fresh combined sampler.
class AttackState {
 public:
  AttackState(const DetectorConfig& config, Whitelist whitelist);

  AttackOutcome process(std::string_view qname);
  // Drops the sketch and counters and starts a new window.
  void reset_window();

  [[nodiscard]] const DetectorConfig& config() const noexcept { return config_; }
  [[nodiscard]] const Whitelist& whitelist() const noexcept { return whitelist_; }
  [[nodiscard]] const ChhSketch& sketch() const noexcept { return sketch_; }
  [[nodiscard]] const PhaseCounts& counts() const noexcept { return counts_; }
  [[nodiscard]] double distinct_pairs_estimate() const noexcept { return pairs_.card_est(); }

 private:
  DetectorConfig config_;
  Whitelist whitelist_;
  PairHasher pair_hasher_;
  ChhSketch sketch_;
  DistinctCounter pairs_;
  PhaseCounts counts_;
};

struct Signature {
  std::string zone;
  double estimated_distinct = 0.0;  // HIP distinct count since the zone was cached
  double estimated_combined = 0.0;
  WeightEstimate distinct_interval;
  WeightEstimate combined_interval;
  std::string rule;
};

// Estimated distinct pairs in the window divided by k.
[[nodiscard]] double default_min_distinct(const AttackState& state);

// Cached zones whose distinct count estimate reaches the threshold and that
// are not zone-whitelisted, by descending estimate.
[[nodiscard]] std::vector<Signature> signatures(const AttackState& state, double min_distinct_estimate,
                                                Confidence conf = Confidence::standard());

}  // namespace wsketch::dns
