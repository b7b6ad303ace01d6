#include "wsketch/trace.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <unistd.h>

#include "wsketch/errors.hpp"

namespace wsketch {

LineReader::LineReader(const std::string& path) {
  handle_ = path == "-" ? gzdopen(dup(fileno(stdin)), "rb") : gzopen(path.c_str(), "rb");
  if (handle_ == nullptr) throw ParseError("cannot open " + path);
  gzbuffer(static_cast<gzFile>(handle_), 1 << 17);
}

LineReader::~LineReader() { gzclose(static_cast<gzFile>(handle_)); }

bool LineReader::next(std::string& line) {
  line.clear();
  char chunk[4096];
  auto* f = static_cast<gzFile>(handle_);
  while (gzgets(f, chunk, sizeof(chunk)) != nullptr) {
    line.append(chunk);
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
  }
  int err = Z_OK;
  gzerror(f, &err);
  if (err != Z_OK && err != Z_STREAM_END) throw ParseError("read error in compressed input");
  return !line.empty();
}

void for_each_data_line(const std::string& path, const std::function<void(std::string_view)>& on_line) {
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line[0] == '#') continue;
    on_line(line);
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

Trace read_pairs(const std::string& path) {
  Trace trace;
  std::size_t lineno = 0;
  for_each_data_line(path, [&](std::string_view line) {
    ++lineno;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError("pair trace line " + std::to_string(lineno) + ": expected key<TAB>subkey");
    }
    trace.push_back({std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))});
  });
  return trace;
}

void write_pairs(std::ostream& out, const Trace& trace) {
  for (const auto& e : trace) out << e.key << '\t' << e.subkey << '\n';
}

DnsQueryRecord parse_dns_line(std::string_view line) {
  const auto fields = split(line, '\t');
  DnsQueryRecord r;
  std::string_view qname;
  if (fields.size() >= 2) {
    double ts = 0.0;
    const auto f0 = fields[0];
    const auto [ptr, ec] = std::from_chars(f0.data(), f0.data() + f0.size(), ts);
    if (ec != std::errc{} || ptr != f0.data() + f0.size()) {
      throw ParseError("dns trace: bad timestamp '" + std::string(f0) + "'");
    }
    r.timestamp = ts;
    qname = fields[1];
    if (fields.size() >= 3 && !fields[2].empty()) r.qtype = std::string(fields[2]);
  } else {
    qname = fields[0];
  }
  if (qname.empty()) throw ParseError("dns trace: empty qname");
  r.qname = std::string(qname);
  return r;
}

std::vector<DnsQueryRecord> read_dns(const std::string& path) {
  std::vector<DnsQueryRecord> out;
  for_each_data_line(path, [&](std::string_view line) { out.push_back(parse_dns_line(line)); });
  return out;
}

void write_dns(std::ostream& out, const std::vector<DnsQueryRecord>& records) {
  char ts[32];
  for (const auto& r : records) {
    const double t = r.timestamp.value_or(0.0);
    const auto res = std::to_chars(ts, ts + sizeof(ts), t, std::chars_format::fixed, 3);
    out << std::string_view(ts, res.ptr - ts) << '\t' << r.qname << '\t' << r.qtype << '\n';
  }
}

std::vector<std::string> read_data_lines(const std::string& path) {
  std::vector<std::string> out;
  for_each_data_line(path, [&](std::string_view line) { out.emplace_back(line); });
  return out;
}

TraceFormat detect_line_format(std::string_view line) {
  const auto fields = split(line, '\t');
  if (fields.size() == 3) {
    double ts = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), ts);
    if (ec == std::errc{} && ptr == fields[0].data() + fields[0].size()) return TraceFormat::kDns;
  }
  return TraceFormat::kPairs;
}

TraceFormat detect_format(const std::string& path) {
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line[0] == '#') continue;
    return detect_line_format(line);
  }
  return TraceFormat::kPairs;
}

}  // namespace wsketch
