#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wsketch {

// One (key, subkey) observation.
struct StreamElement {
  std::string key;
  std::string subkey;

  friend bool operator==(const StreamElement&, const StreamElement&) = default;
};

using Trace = std::vector<StreamElement>;

// One line of a DNS query trace: `epoch-seconds<TAB>qname<TAB>qtype`.
struct DnsQueryRecord {
  std::optional<double> timestamp;
  std::string qname;
  std::string qtype = "A";
};

enum class TraceFormat { kAuto, kPairs, kDns };

// Line source over a plain or gzip-compressed file; "-" reads stdin.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Next line without its terminator; false at end of input.
  bool next(std::string& line);

 private:
  void* handle_;  // gzFile
  std::string buffer_;
};

// Calls `on_line` for every non-empty, non-comment line.
void for_each_data_line(const std::string& path, const std::function<void(std::string_view)>& on_line);

// `key<TAB>subkey` lines. Throws ParseError on a line without a tab.
[[nodiscard]] Trace read_pairs(const std::string& path);
void write_pairs(std::ostream& out, const Trace& trace);

// Parses one DNS trace line. Throws ParseError when the line has no qname.
[[nodiscard]] DnsQueryRecord parse_dns_line(std::string_view line);
[[nodiscard]] std::vector<DnsQueryRecord> read_dns(const std::string& path);
void write_dns(std::ostream& out, const std::vector<DnsQueryRecord>& records);

// All non-empty, non-comment lines.
[[nodiscard]] std::vector<std::string> read_data_lines(const std::string& path);
// Format of a single data line.
[[nodiscard]] TraceFormat detect_line_format(std::string_view line);

// Guesses the format from the first data line: three tab-separated fields with
// a numeric first field is DNS, otherwise pairs.
[[nodiscard]] TraceFormat detect_format(const std::string& path);

[[nodiscard]] std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace wsketch
