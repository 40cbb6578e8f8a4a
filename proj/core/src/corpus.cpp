#include "coword/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "coword/csv.hpp"
#include "coword/error.hpp"
#include "coword/text.hpp"

namespace coword {
namespace {

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::optional<std::string> class_field(const std::string& raw, const ClassScheme& scheme,
                                       const std::string& source_name, std::size_t line) {
  auto label = trim(raw);
  if (label.empty()) return std::nullopt;
  if (!scheme.contains(label)) {
    throw InputError("unknown class label '" + std::string(label) + "' in scheme '" +
                         scheme.name + "'",
                     source_name, line);
  }
  return std::string(label);
}

std::string describe(const RecordFilter& filter) {
  std::string out = "filter";
  if (filter.source) out += " source=" + *filter.source;
  if (filter.years) out += " years=" + filter.years->label();
  if (!filter.source && !filter.years) out += " (none)";
  return out;
}

}  // namespace

std::optional<std::size_t> ClassScheme::index_of(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

ClassScheme parse_scheme(std::string_view text, std::string name,
                         const std::string& source_name) {
  ClassScheme scheme{std::move(name), {}};
  std::map<std::string, std::size_t, std::less<>> seen;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  auto lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto label = trim(lines[i]);
    if (label.empty() || label.front() == '#') continue;
    if (auto it = seen.find(label); it != seen.end()) {
      throw InputError("duplicate label '" + std::string(label) + "' (first on line " +
                           std::to_string(it->second) + ")",
                       source_name, i + 1);
    }
    seen.emplace(std::string(label), i + 1);
    scheme.labels.emplace_back(label);
  }
  if (scheme.labels.empty()) throw InputError("scheme has no labels", source_name);
  return scheme;
}

ClassScheme load_scheme(const std::string& path, std::string name) {
  return parse_scheme(read_file(path), std::move(name), path);
}

std::string PeriodWindow::label() const {
  return std::to_string(start_year) + "-" + std::to_string(end_year);
}

PeriodWindow PeriodWindow::parse(std::string_view text) {
  auto t = trim(text);
  auto dash = t.find('-', 1);
  std::optional<int> first, last;
  if (dash == std::string_view::npos) {
    first = last = parse_int(t);
  } else {
    first = parse_int(t.substr(0, dash));
    last = parse_int(t.substr(dash + 1));
  }
  if (!first || !last) throw InputError("invalid year window '" + std::string(t) + "'");
  if (*first > *last) {
    throw InputError("year window '" + std::string(t) + "' ends before it starts");
  }
  return {*first, *last};
}

std::vector<PeriodWindow> parse_windows(std::string_view text) {
  std::vector<PeriodWindow> windows;
  if (trim(text).empty()) return windows;
  for (auto part : split(text, ',')) windows.push_back(PeriodWindow::parse(part));
  return windows;
}

RecordSet parse_records_text(std::string_view text, const std::string& source_name,
                             const ClassScheme& scheme_a, const ClassScheme& scheme_b,
                             const ParseOptions& options) {
  auto rows = csv::parse(text, source_name);
  if (rows.empty()) {
    throw InputError("missing header row (expected '" + std::string(kRecordsHeader) + "')",
                     source_name, 1);
  }
  {
    std::string header;
    for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
      if (i) header += ',';
      header += trim(rows[0].fields[i]);
    }
    if (header != kRecordsHeader) {
      throw InputError("unexpected header '" + header + "' (expected '" +
                           std::string(kRecordsHeader) + "')",
                       source_name, rows[0].line);
    }
  }

  constexpr std::size_t kFields = 7;
  RecordSet rs;
  std::map<std::string, std::size_t> id_lines;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto fail = [&](std::string_view field, const std::string& why) -> InputError {
      return InputError("field '" + std::string(field) + "': " + why, source_name, row.line);
    };
    if (row.fields.size() != kFields) {
      throw InputError("expected " + std::to_string(kFields) + " fields, found " +
                           std::to_string(row.fields.size()),
                       source_name, row.line);
    }
    Record rec;
    rec.id = std::string(trim(row.fields[0]));
    if (rec.id.empty()) throw fail("id", "empty");
    if (auto [it, inserted] = id_lines.emplace(rec.id, row.line); !inserted) {
      throw InputError("duplicate id '" + rec.id + "' on lines " +
                           std::to_string(it->second) + " and " + std::to_string(row.line),
                       source_name, row.line);
    }
    rec.source = std::string(trim(row.fields[1]));
    if (rec.source.empty()) throw fail("source", "empty");
    auto year = parse_int(row.fields[2]);
    if (!year) throw fail("year", "not an integer: '" + row.fields[2] + "'");
    if (!options.years.contains(*year)) {
      throw fail("year", std::to_string(*year) + " outside corpus range " +
                             options.years.label());
    }
    rec.year = *year;
    rec.title = std::string(trim(row.fields[3]));
    rec.class_a = class_field(row.fields[4], scheme_a, source_name, row.line);
    rec.class_b = class_field(row.fields[5], scheme_b, source_name, row.line);
    for (auto kw : split(row.fields[6], ';')) {
      kw = trim(kw);
      if (!kw.empty()) rec.raw_keywords.emplace_back(kw);
    }
    rs.records.push_back(std::move(rec));
  }
  rs.provenance.push_back("parsed " + source_name + " (" + std::to_string(rs.size()) +
                          " records)");
  return rs;
}

RecordSet parse_records(const std::string& path, const ClassScheme& scheme_a,
                        const ClassScheme& scheme_b, const ParseOptions& options) {
  return parse_records_text(read_file(path), path, scheme_a, scheme_b, options);
}

std::string format_records(const RecordSet& rs) {
  std::string out(kRecordsHeader);
  out.push_back('\n');
  for (const auto& rec : rs.records) {
    std::string keywords;
    for (std::size_t i = 0; i < rec.raw_keywords.size(); ++i) {
      if (i) keywords += "; ";
      keywords += rec.raw_keywords[i];
    }
    const std::string fields[] = {rec.id,
                                  rec.source,
                                  std::to_string(rec.year),
                                  rec.title,
                                  rec.class_a.value_or(""),
                                  rec.class_b.value_or(""),
                                  keywords};
    out += csv::format_row(fields);
  }
  return out;
}

RecordSet filter_records(const RecordSet& rs, const RecordFilter& filter) {
  RecordSet out;
  out.provenance = rs.provenance;
  out.dropped = rs.dropped;
  for (const auto& rec : rs.records) {
    if (filter.source && rec.source != *filter.source) continue;
    if (filter.years && !filter.years->contains(rec.year)) continue;
    out.records.push_back(rec);
  }
  out.provenance.push_back(describe(filter) + " -> " + std::to_string(out.size()) +
                           " records");
  return out;
}

std::vector<RecordSet> split_periods(const RecordSet& rs,
                                     std::span<const PeriodWindow> windows) {
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      if (windows[i].overlaps(windows[j])) {
        throw InputError("overlapping period windows " + windows[i].label() + " and " +
                         windows[j].label());
      }
    }
  }
  std::vector<RecordSet> out(windows.size());
  std::size_t dropped = 0;
  for (const auto& rec : rs.records) {
    auto it = std::find_if(windows.begin(), windows.end(),
                           [&](const PeriodWindow& w) { return w.contains(rec.year); });
    if (it == windows.end()) {
      ++dropped;
      continue;
    }
    out[static_cast<std::size_t>(it - windows.begin())].records.push_back(rec);
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out[i].provenance = rs.provenance;
    out[i].dropped = dropped;
    out[i].provenance.push_back("period " + windows[i].label() + " -> " +
                                std::to_string(out[i].size()) + " records (" +
                                std::to_string(dropped) + " outside all windows)");
  }
  return out;
}

std::vector<DistributionRow> class_distribution(const RecordSet& rs,
                                                const ClassScheme& scheme,
                                                ClassSlot slot) {
  std::vector<std::size_t> counts(scheme.labels.size() + 1, 0);
  for (const auto& rec : rs.records) {
    const auto& label = rec.class_in(slot);
    auto idx = label ? scheme.index_of(*label) : std::nullopt;
    ++counts[idx ? *idx : scheme.labels.size()];
  }
  std::vector<DistributionRow> rows;
  for (std::size_t i = 0; i < scheme.labels.size(); ++i) {
    rows.push_back({scheme.labels[i], counts[i], percent_half_up(counts[i], rs.size())});
  }
  if (counts.back() > 0) {
    rows.push_back({std::string(kUnclassified), counts.back(),
                    percent_half_up(counts.back(), rs.size())});
  }
  return rows;
}

std::size_t CrossTab::row_sum(std::size_t row) const {
  std::size_t sum = 0;
  for (std::size_t c = 0; c < col_labels.size(); ++c) sum += at(row, c);
  return sum;
}

std::size_t CrossTab::col_sum(std::size_t col) const {
  std::size_t sum = 0;
  for (std::size_t r = 0; r < row_labels.size(); ++r) sum += at(r, col);
  return sum;
}

CrossTab class_crosstab(const RecordSet& rs, const ClassScheme& a, const ClassScheme& b) {
  CrossTab tab;
  tab.row_labels = a.labels;
  tab.row_labels.emplace_back(kUnclassified);
  tab.col_labels = b.labels;
  tab.col_labels.emplace_back(kUnclassified);
  tab.cells.assign(tab.row_labels.size() * tab.col_labels.size(), 0);
  for (const auto& rec : rs.records) {
    auto i = rec.class_a ? a.index_of(*rec.class_a) : std::nullopt;
    auto j = rec.class_b ? b.index_of(*rec.class_b) : std::nullopt;
    std::size_t row = i.value_or(a.labels.size());
    std::size_t col = j.value_or(b.labels.size());
    ++tab.cells[row * tab.col_labels.size() + col];
  }
  return tab;
}

}  // namespace coword
