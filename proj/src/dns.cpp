#include "wsketch/dns.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wsketch/errors.hpp"
#include "wsketch/trace.hpp"

namespace wsketch::dns {

std::string normalize_qname(std::string_view qname) {
  if (!qname.empty() && qname.back() == '.') qname.remove_suffix(1);
  if (qname.empty()) throw ParseError("empty query name");
  std::string out(qname);
  for (char& c : out) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u == 0x7f) throw ParseError("query name contains whitespace or control bytes");
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (out.front() == '.' || out.find("..") != std::string::npos) throw ParseError("query name has an empty label");
  return out;
}

ZoneSplit parse_query(std::string_view qname, std::size_t zone_depth, SubkeyMode mode) {
  if (zone_depth == 0) throw InvalidParameter("zone depth must be positive");
  std::string name = normalize_qname(qname);
  // Walk zone_depth dots from the right.
  std::size_t cut = name.size();
  std::size_t labels = 0;
  while (labels < zone_depth) {
    const std::size_t dot = cut == 0 ? std::string::npos : name.rfind('.', cut - 1);
    ++labels;
    if (dot == std::string::npos) {
      return {std::move(name), std::string()};
    }
    cut = dot;
  }
  ZoneSplit split{name.substr(cut + 1), name.substr(0, cut)};
  if (mode == SubkeyMode::kLeftmostLabel) {
    const std::size_t dot = split.subkey.find('.');
    if (dot != std::string::npos) split.subkey.resize(dot);
  }
  return split;
}

PeacetimeState::PeacetimeState(const DetectorConfig& config)
    : config_(config),
      pair_hasher_(config.hash_seed, config.buckets),
      zones_(config.capacity, config.buckets, config.rho, config.hash_seed),
      subkeys_(config.subkey_capacity),
      pairs_(config.buckets) {}

bool PeacetimeState::process(std::string_view qname) {
  ++counts_.queries;
  ZoneSplit split;
  try {
    split = parse_query(qname, config_.zone_depth, config_.subkey_mode);
  } catch (const ParseError&) {
    ++counts_.parse_errors;
    return false;
  }
  ++counts_.sketched;
  zones_.process(split.key, split.subkey);
  pairs_.merge(pair_hasher_(split.key, split.subkey));
  if (!split.subkey.empty()) subkeys_.process(split.subkey);
  return true;
}

WhitelistThresholds default_whitelist_thresholds(const PeacetimeState& state) {
  const double per_slot = state.distinct_pairs_estimate() / static_cast<double>(state.config().capacity);
  return {std::max(10.0 * per_slot, 1.0), 0.001};
}

Whitelist build_whitelists(const PeacetimeState& state, const WhitelistThresholds& thresholds, Confidence conf) {
  if (!(thresholds.zone_min_combined > 0.0) || !(thresholds.subkey_min_freq > 0.0)) {
    throw InvalidParameter("whitelist thresholds must be positive");
  }
  Whitelist wl;
  for (const auto& r : state.zones().report()) {
    const auto est = state.zones().estimate(r, conf);
    if (est.point >= thresholds.zone_min_combined) {
      wl.zones.emplace(r.key, static_cast<std::uint64_t>(std::llround(est.point)));
    }
  }
  const double min_count = thresholds.subkey_min_freq * static_cast<double>(state.counts().sketched);
  const auto min_int = static_cast<std::uint64_t>(std::ceil(std::max(min_count, 1.0)));
  // Space-Saving counts are upper bounds; whitelist on the guaranteed part.
  for (const auto& item : state.subkeys().top(min_int)) {
    if (item.count - item.bound >= min_int) wl.subkeys.emplace(item.key, item.count - item.bound);
  }
  return wl;
}

void write_whitelist(std::ostream& out, const Whitelist& wl) {
  out << "[zones]\n";
  for (const auto& [zone, count] : wl.zones) out << zone << '\t' << count << '\n';
  out << "[subkeys]\n";
  for (const auto& [sub, count] : wl.subkeys) out << sub << '\t' << count << '\n';
}

Whitelist parse_whitelist(std::string_view text) {
  Whitelist wl;
  std::map<std::string, std::uint64_t>* section = nullptr;
  std::size_t lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '#') continue;
    if (line == "[zones]") {
      section = &wl.zones;
      continue;
    }
    if (line == "[subkeys]") {
      section = &wl.subkeys;
      continue;
    }
    if (section == nullptr) throw ParseError("whitelist line " + std::to_string(lineno) + ": entry outside a section");
    const auto fields = split(line, '\t');
    std::uint64_t count = 0;
    if (fields.size() > 2) throw ParseError("whitelist line " + std::to_string(lineno) + ": too many fields");
    if (fields.size() == 2) {
      try {
        std::size_t used = 0;
        count = std::stoull(std::string(fields[1]), &used);
        if (used != fields[1].size()) throw ParseError("");
      } catch (const std::exception&) {
        throw ParseError("whitelist line " + std::to_string(lineno) + ": bad count");
      }
    }
    std::string entry(fields[0]);
    std::transform(entry.begin(), entry.end(), entry.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (section == &wl.zones) entry = normalize_qname(entry);
    auto [it, inserted] = section->emplace(entry, count);
    if (!inserted) it->second = std::max(it->second, count);
  }
  return wl;
}

Whitelist read_whitelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open whitelist " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_whitelist(ss.str());
}

AttackState::AttackState(const DetectorConfig& config, Whitelist whitelist)
    : config_(config),
      whitelist_(std::move(whitelist)),
      pair_hasher_(config.hash_seed, config.buckets),
      sketch_(config.capacity, config.buckets, config.rho, config.hash_seed),
      pairs_(config.buckets) {}

AttackOutcome AttackState::process(std::string_view qname) {
  ++counts_.queries;
  AttackOutcome out;
  try {
    out.split = parse_query(qname, config_.zone_depth, config_.subkey_mode);
  } catch (const ParseError&) {
    ++counts_.parse_errors;
    return out;
  }
  if (!out.split.subkey.empty() && whitelist_.has_subkey(out.split.subkey)) {
    ++counts_.subkey_whitelisted;
    out.disposition = Disposition::kSubkeyWhitelisted;
    return out;
  }
  if (whitelist_.has_zone(out.split.key)) {
    ++counts_.zone_whitelisted;
    out.disposition = Disposition::kZoneWhitelisted;
    return out;
  }
  ++counts_.sketched;
  out.disposition = Disposition::kSketched;
  out.result = sketch_.process(out.split.key, out.split.subkey);
  pairs_.merge(pair_hasher_(out.split.key, out.split.subkey));
  return out;
}

void AttackState::reset_window() {
  sketch_ = ChhSketch(config_.capacity, config_.buckets, config_.rho, config_.hash_seed);
  pairs_.reset();
  counts_ = {};
}

double default_min_distinct(const AttackState& state) {
  return std::max(state.distinct_pairs_estimate() / static_cast<double>(state.config().capacity), 1.0);
}

std::vector<Signature> signatures(const AttackState& state, double min_distinct_estimate, Confidence conf) {
  std::vector<Signature> out;
  for (const auto& r : state.sketch().report()) {
    if (r.card_est < min_distinct_estimate) continue;
    if (state.whitelist().has_zone(r.key)) continue;
    Signature s;
    s.zone = r.key;
    s.estimated_distinct = r.card_est;
    s.distinct_interval = state.sketch().distinct_estimate(r, conf);
    s.combined_interval = state.sketch().estimate(r, conf);
    s.estimated_combined = s.combined_interval.point;
    s.rule = "allow " + r.key + " queries whose subkey is whitelisted; block all other queries to " + r.key;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace wsketch::dns
