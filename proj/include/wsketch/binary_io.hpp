#pragma once

// Little-endian primitives for the versioned binary records.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "wsketch/errors.hpp"

namespace wsketch::binary {

static_assert(std::endian::native == std::endian::little, "binary records assume a little-endian host");

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

inline void put_bytes(std::string& out, std::string_view bytes) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bytes.size()));
  out.append(bytes);
}

template <typename T>
T get(std::string_view& in) {
  if (in.size() < sizeof(T)) throw ParseError("binary record truncated");
  T value;
  std::memcpy(&value, in.data(), sizeof(T));
  in.remove_prefix(sizeof(T));
  return value;
}

inline std::string_view get_bytes(std::string_view& in) {
  const auto n = get<std::uint32_t>(in);
  if (in.size() < n) throw ParseError("binary record truncated");
  std::string_view s = in.substr(0, n);
  in.remove_prefix(n);
  return s;
}

inline void expect_magic(std::string_view& in, std::string_view magic) {
  if (in.substr(0, magic.size()) != magic) throw ParseError("bad record magic, expected " + std::string(magic));
  in.remove_prefix(magic.size());
}

}  // namespace wsketch::binary
