#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coword {

// Controlled vocabulary: an ordered list of distinct, nonempty labels.
struct ClassScheme {
  std::string name;
  std::vector<std::string> labels;

  std::optional<std::size_t> index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return index_of(label).has_value(); }
};

// One label per line; '#' starts a comment line. Throws InputError on
// duplicate labels or an empty scheme.
ClassScheme parse_scheme(std::string_view text, std::string name,
                         const std::string& source_name = "<scheme>");
ClassScheme load_scheme(const std::string& path, std::string name);

// Inclusive range of calendar years.
struct PeriodWindow {
  int start_year = 0;
  int end_year = 0;

  bool contains(int year) const noexcept { return year >= start_year && year <= end_year; }
  bool overlaps(const PeriodWindow& other) const noexcept {
    return start_year <= other.end_year && other.start_year <= end_year;
  }
  std::string label() const;  // "2001-2006"

  // Accepts "2001-2006" or a single year "2004". Throws InputError.
  static PeriodWindow parse(std::string_view text);
  friend bool operator==(const PeriodWindow&, const PeriodWindow&) = default;
};

// Comma-separated list of windows, e.g. "2001-2006,2007-2012".
std::vector<PeriodWindow> parse_windows(std::string_view text);

enum class ClassSlot { a, b };

struct Record {
  std::string id;
  std::string source;  // "BAD", "WOS", or any other nonempty tag
  int year = 0;
  std::string title;
  std::optional<std::string> class_a;
  std::optional<std::string> class_b;
  std::vector<std::string> raw_keywords;

  const std::optional<std::string>& class_in(ClassSlot slot) const {
    return slot == ClassSlot::a ? class_a : class_b;
  }
  friend bool operator==(const Record&, const Record&) = default;
};

struct RecordSet {
  std::vector<Record> records;
  std::vector<std::string> provenance;  // one entry per applied step
  std::size_t dropped = 0;              // records removed by split_periods

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

inline constexpr std::string_view kRecordsHeader =
    "id,source,year,title,class_a,class_b,keywords";

struct ParseOptions {
  PeriodWindow years{2001, 2012};
};

// Reads the records file. Row order is preserved and keywords are split on
// ';' and trimmed. Throws InputError naming the line and field on malformed
// rows, duplicate ids and unknown class labels.
RecordSet parse_records(const std::string& path, const ClassScheme& scheme_a,
                        const ClassScheme& scheme_b, const ParseOptions& options = {});
RecordSet parse_records_text(std::string_view text, const std::string& source_name,
                             const ClassScheme& scheme_a, const ClassScheme& scheme_b,
                             const ParseOptions& options = {});

// Canonical serialization readable by parse_records.
std::string format_records(const RecordSet& rs);

struct RecordFilter {
  std::optional<std::string> source;
  std::optional<PeriodWindow> years;
};

RecordSet filter_records(const RecordSet& rs, const RecordFilter& filter);

// One set per window, in window order. Records outside every window are
// dropped and counted in each output's `dropped`. Throws InputError if two
// windows overlap.
std::vector<RecordSet> split_periods(const RecordSet& rs,
                                     std::span<const PeriodWindow> windows);

inline constexpr std::string_view kUnclassified = "(unclassified)";

struct DistributionRow {
  std::string label;
  std::size_t count = 0;
  int percent = 0;
  friend bool operator==(const DistributionRow&, const DistributionRow&) = default;
};

// Rows in scheme order; an "(unclassified)" row is appended only when some
// record has no label in that slot.
std::vector<DistributionRow> class_distribution(const RecordSet& rs,
                                                const ClassScheme& scheme,
                                                ClassSlot slot);

// Counts by (class_a, class_b). The last row and column are the
// "(unclassified)" buckets so marginals always equal the distributions.
struct CrossTab {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::size_t> cells;  // row-major

  std::size_t at(std::size_t row, std::size_t col) const {
    return cells[row * col_labels.size() + col];
  }
  std::size_t row_sum(std::size_t row) const;
  std::size_t col_sum(std::size_t col) const;
};

CrossTab class_crosstab(const RecordSet& rs, const ClassScheme& a, const ClassScheme& b);

}  // namespace coword
