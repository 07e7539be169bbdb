#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pprwatch/graph_store.hpp"

namespace pprwatch {

// One line of the event log: `time<TAB>src<TAB>dst<TAB>delta_weight<TAB>label`.
// Ids are kept as text until they are interned into dense node ids.
struct LogRecord {
  double time = 0.0;
  std::string src;
  std::string dst;
  double delta_weight = 0.0;
  bool anomalous = false;
  std::size_t line = 0;  // 1-based source line, 0 when generated
};

/// Reads the TSV event log. Blank lines and `#` comments are skipped; a first
/// data line whose time field is not numeric is taken as a header. Timestamps
/// must be non-decreasing unless `allow_unsorted`, in which case records are
/// stable-sorted by time. Throws ParseError with the offending line number.
std::vector<LogRecord> read_event_log(std::istream& in, bool allow_unsorted = false);
std::vector<LogRecord> read_event_log_file(const std::filesystem::path& path,
                                           bool allow_unsorted = false);

// Writes records with a header line. Numbers use the shortest exact form.
void write_event_log(std::ostream& out, std::span<const LogRecord> records);

// Original id <-> dense id. Persisted as TSV `original_id<TAB>dense_id`.
class IdMap {
 public:
  NodeId intern(std::string_view original);
  std::optional<NodeId> find(std::string_view original) const;
  const std::string& original(NodeId dense) const { return originals_.at(dense); }
  std::size_t size() const noexcept { return originals_.size(); }

  // Loading requires dense ids to be exactly 0..n-1.
  static IdMap load(std::istream& in);
  static IdMap load_file(const std::filesystem::path& path);
  void save(std::ostream& out) const;
  void save_file(const std::filesystem::path& path) const;

 private:
  std::unordered_map<std::string, NodeId> dense_;
  std::vector<std::string> originals_;
};

// 64-bit FNV-1a over the file bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

// Shortest decimal that round-trips.
std::string format_number(double value);

}  // namespace pprwatch
