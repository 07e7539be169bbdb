#include "pprwatch/event_log.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "pprwatch/errors.hpp"

namespace pprwatch {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::vector<LogRecord> read_event_log(std::istream& in, bool allow_unsorted) {
  std::vector<LogRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  bool sorted = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;

    const auto fields = split_tabs(view);
    double time = 0.0;
    if (!parse_double(fields[0], time)) {
      if (!seen_data) {
        seen_data = true;  // header
        continue;
      }
      throw ParseError(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
    }
    seen_data = true;
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected 5 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    LogRecord rec;
    rec.time = time;
    rec.line = line_no;
    rec.src = std::string(fields[1]);
    rec.dst = std::string(fields[2]);
    if (rec.src.empty() || rec.dst.empty()) throw ParseError(line_no, "empty node id");
    if (!parse_double(fields[3], rec.delta_weight)) {
      throw ParseError(line_no, "bad weight delta '" + std::string(fields[3]) + "'");
    }
    if (fields[4] == "1") {
      rec.anomalous = true;
    } else if (fields[4] != "0") {
      throw ParseError(line_no, "label must be 0 or 1");
    }
    if (!records.empty() && rec.time < records.back().time) {
      if (!allow_unsorted) {
        throw ParseError(line_no, "timestamp goes backwards (use --allow-unsorted to sort)");
      }
      sorted = false;
    }
    records.push_back(std::move(rec));
  }
  if (!sorted) {
    std::stable_sort(records.begin(), records.end(),
                     [](const LogRecord& a, const LogRecord& b) { return a.time < b.time; });
  }
  return records;
}

std::vector<LogRecord> read_event_log_file(const std::filesystem::path& path, bool allow_unsorted) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open event log " + path.string());
  return read_event_log(in, allow_unsorted);
}

void write_event_log(std::ostream& out, std::span<const LogRecord> records) {
  out << "time\tsrc\tdst\tdelta_weight\tlabel\n";
  for (const auto& r : records) {
    out << format_number(r.time) << '\t' << r.src << '\t' << r.dst << '\t'
        << format_number(r.delta_weight) << '\t' << (r.anomalous ? '1' : '0') << '\n';
  }
}

NodeId IdMap::intern(std::string_view original) {
  auto it = dense_.find(std::string(original));
  if (it != dense_.end()) return it->second;
  const auto id = static_cast<NodeId>(originals_.size());
  originals_.emplace_back(original);
  dense_.emplace(originals_.back(), id);
  return id;
}

std::optional<NodeId> IdMap::find(std::string_view original) const {
  auto it = dense_.find(std::string(original));
  if (it == dense_.end()) return std::nullopt;
  return it->second;
}

IdMap IdMap::load(std::istream& in) {
  std::vector<std::pair<std::string, NodeId>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_tabs(view);
    if (fields.size() != 2) throw ParseError(line_no, "id map lines need 2 fields");
    NodeId dense = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), dense);
    if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size()) {
      if (line_no == 1) continue;  // header
      throw ParseError(line_no, "bad dense id");
    }
    rows.emplace_back(std::string(fields[0]), dense);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  IdMap map;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].second != i) throw InvalidInputError("id map dense ids are not 0..n-1");
    if (map.intern(rows[i].first) != i) throw InvalidInputError("duplicate original id in id map");
  }
  return map;
}

IdMap IdMap::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open id map " + path.string());
  return load(in);
}

void IdMap::save(std::ostream& out) const {
  out << "original_id\tdense_id\n";
  for (std::size_t i = 0; i < originals_.size(); ++i) out << originals_[i] << '\t' << i << '\n';
}

void IdMap::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write id map " + path.string());
  save(out);
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  std::array<char, 17> hex{};
  std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(hex.data(), 16);
}

}  // namespace pprwatch
