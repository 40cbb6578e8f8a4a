#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coword/corpus.hpp"

namespace coword {

// Key under which raw keywords are matched: NFC composition, full Unicode
// case folding, trimmed, internal whitespace runs collapsed to one space.
std::string match_key(std::string_view raw);

// Human-authored keyword -> descriptor table. Many-to-one merges are
// allowed; a key never maps to two descriptors.
class MappingTable {
 public:
  MappingTable() = default;

  // Explicit entries keyed by match_key(raw).
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  // Descriptor for a raw keyword, if any. A descriptor's own match key also
  // resolves to it, so canonical text maps to itself.
  std::optional<std::string_view> lookup(std::string_view raw) const;

  friend MappingTable parse_mapping(std::string_view, const std::string&);

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, std::string> canonical_;
};

// Lines of the form `raw -> canonical`; '#' comments and blank lines are
// ignored. Throws InputError on malformed lines, empty canonicals, keys that
// collide with conflicting targets, and chains (a canonical whose key is
// itself mapped elsewhere).
MappingTable parse_mapping(std::string_view text, const std::string& source_name);
MappingTable load_mapping(const std::string& path);

struct RecordDescriptors {
  std::string record_id;
  std::set<std::string> descriptors;
  friend bool operator==(const RecordDescriptors&, const RecordDescriptors&) = default;
};

struct OccurrenceIndex {
  std::vector<RecordDescriptors> per_record;  // record order
  std::map<std::string, std::size_t> totals;  // records containing each descriptor
  std::map<std::string, std::size_t> unmapped;  // match key -> raw token count
  std::size_t token_count = 0;  // mapped or passed-through tokens before dedup

  std::size_t total_occurrences() const noexcept;
};

// Applies the table to every record. Unmapped keywords become their match
// key when `passthrough`, and are always tallied in `unmapped`.
OccurrenceIndex normalize(const RecordSet& rs, const MappingTable& table, bool passthrough);

// Rebuilds totals from per-record sets (token_count is the sum of set sizes).
OccurrenceIndex index_from_sets(std::vector<RecordDescriptors> per_record);

struct RankedDescriptor {
  std::string text;
  std::size_t count = 0;
  friend bool operator==(const RankedDescriptor&, const RankedDescriptor&) = default;
};

// Count descending, then descriptor text ascending.
std::vector<RankedDescriptor> descriptor_frequencies(const OccurrenceIndex& idx,
                                                     std::optional<std::size_t> limit = {});

struct CoverageStats {
  std::size_t min_occurrences = 1;
  std::size_t descriptors_total = 0;
  std::size_t occurrences_total = 0;
  std::size_t descriptors_retained = 0;
  std::size_t occurrences_retained = 0;
  int percent_retained = 0;
  bool empty_universe = false;  // no occurrences at all; percent forced to 0
};

CoverageStats coverage_stats(const OccurrenceIndex& idx, std::size_t min_occ);

}  // namespace coword
