#include "wsketch/oracle.hpp"

#include <algorithm>

namespace wsketch {

void ExactOracle::add(std::string_view key, std::string_view subkey) {
  ++elements_;
  std::string pair;
  pair.reserve(key.size() + 1 + subkey.size());
  pair.append(key).push_back('\0');
  pair.append(subkey);
  auto it = table_.find(std::string(key));
  if (it == table_.end()) {
    it = table_.emplace(std::string(key), KeyWeights{}).first;
    payload_bytes_ += key.size();
  }
  it->second.h += 1;
  if (pairs_.insert(std::move(pair)).second) {
    it->second.w += 1;
    payload_bytes_ += key.size() + 1 + subkey.size();
  }
}

ExactOracle ExactOracle::from_trace(const Trace& trace) {
  ExactOracle o;
  for (const auto& e : trace) o.add(e.key, e.subkey);
  return o;
}

const KeyWeights* ExactOracle::find(std::string_view key) const {
  const auto it = table_.find(std::string(key));
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<std::string> ExactOracle::keys() const {
  std::vector<std::string> out;
  out.reserve(table_.size());
  for (const auto& [k, _] : table_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wsketch
