#include "coword/vocabulary.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "coword/error.hpp"
#include "coword/text.hpp"

namespace coword {

std::string match_key(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");

  auto text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  // Folding can decompose (e.g. U+0130), so compose once more afterwards.
  icu::UnicodeString folded = nfc->normalize(text, status).foldCase();
  folded = nfc->normalize(folded, status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");

  std::string utf8;
  folded.toUTF8String(utf8);

  std::string out;
  out.reserve(utf8.size());
  bool pending_space = false;
  for (char c : trim(utf8)) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::optional<std::string_view> MappingTable::lookup(std::string_view raw) const {
  auto key = match_key(raw);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  if (auto it = canonical_.find(key); it != canonical_.end()) return it->second;
  return std::nullopt;
}

MappingTable parse_mapping(std::string_view text, const std::string& source_name) {
  MappingTable table;
  std::map<std::string, std::size_t> key_lines;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  auto lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line = i + 1;
    auto content = trim(lines[i]);
    if (content.empty() || content.front() == '#') continue;
    auto arrow = content.find("->");
    if (arrow == std::string_view::npos) {
      throw InputError("expected 'raw -> canonical'", source_name, line);
    }
    auto raw = trim(content.substr(0, arrow));
    auto canonical = std::string(trim(content.substr(arrow + 2)));
    if (raw.empty()) throw InputError("empty raw keyword", source_name, line);
    if (canonical.empty()) throw InputError("empty canonical descriptor", source_name, line);
    if (canonical.find(';') != std::string::npos) {
      throw InputError("canonical descriptor may not contain ';'", source_name, line);
    }
    auto key = match_key(raw);
    auto [it, inserted] = table.entries_.emplace(key, canonical);
    if (!inserted && it->second != canonical) {
      throw InputError("key '" + key + "' maps to '" + it->second + "' on line " +
                           std::to_string(key_lines[key]) + " and to '" + canonical +
                           "' on line " + std::to_string(line),
                       source_name, line);
    }
    key_lines.emplace(key, line);
  }
  for (const auto& [key, canonical] : table.entries_) {
    auto own = match_key(canonical);
    if (auto it = table.entries_.find(own); it != table.entries_.end()) {
      if (it->second != canonical) {
        throw InputError("descriptor '" + canonical + "' is itself mapped to '" +
                             it->second + "' on line " + std::to_string(key_lines[own]) +
                             " (chained mapping)",
                         source_name, key_lines[key]);
      }
      continue;
    }
    auto [cit, inserted] = table.canonical_.emplace(own, canonical);
    if (!inserted && cit->second != canonical) {
      throw InputError("descriptors '" + cit->second + "' and '" + canonical +
                           "' differ only in case or spacing",
                       source_name, key_lines[key]);
    }
  }
  return table;
}

MappingTable load_mapping(const std::string& path) {
  return parse_mapping(read_file(path), path);
}

std::size_t OccurrenceIndex::total_occurrences() const noexcept {
  std::size_t sum = 0;
  for (const auto& [_, n] : totals) sum += n;
  return sum;
}

OccurrenceIndex normalize(const RecordSet& rs, const MappingTable& table, bool passthrough) {
  OccurrenceIndex idx;
  idx.per_record.reserve(rs.size());
  for (const auto& rec : rs.records) {
    RecordDescriptors entry{rec.id, {}};
    for (const auto& raw : rec.raw_keywords) {
      if (auto descriptor = table.lookup(raw)) {
        entry.descriptors.emplace(*descriptor);
        ++idx.token_count;
        continue;
      }
      auto key = match_key(raw);
      if (key.empty()) continue;
      ++idx.unmapped[key];
      if (passthrough) {
        entry.descriptors.insert(std::move(key));
        ++idx.token_count;
      }
    }
    for (const auto& d : entry.descriptors) ++idx.totals[d];
    idx.per_record.push_back(std::move(entry));
  }
  return idx;
}

OccurrenceIndex index_from_sets(std::vector<RecordDescriptors> per_record) {
  OccurrenceIndex idx;
  idx.per_record = std::move(per_record);
  for (const auto& entry : idx.per_record) {
    idx.token_count += entry.descriptors.size();
    for (const auto& d : entry.descriptors) ++idx.totals[d];
  }
  return idx;
}

std::vector<RankedDescriptor> descriptor_frequencies(const OccurrenceIndex& idx,
                                                     std::optional<std::size_t> limit) {
  std::vector<RankedDescriptor> ranked;
  ranked.reserve(idx.totals.size());
  for (const auto& [text, count] : idx.totals) ranked.push_back({text, count});
  // totals is already sorted by text, so a stable sort on count suffices.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& l, const auto& r) { return l.count > r.count; });
  if (limit && ranked.size() > *limit) ranked.resize(*limit);
  return ranked;
}

CoverageStats coverage_stats(const OccurrenceIndex& idx, std::size_t min_occ) {
  if (min_occ < 1) throw std::invalid_argument("coverage_stats: min_occ must be >= 1");
  CoverageStats stats;
  stats.min_occurrences = min_occ;
  for (const auto& [_, count] : idx.totals) {
    if (count == 0) continue;
    ++stats.descriptors_total;
    stats.occurrences_total += count;
    if (count >= min_occ) {
      ++stats.descriptors_retained;
      stats.occurrences_retained += count;
    }
  }
  stats.empty_universe = stats.occurrences_total == 0;
  stats.percent_retained = percent_half_up(stats.occurrences_retained, stats.occurrences_total);
  return stats;
}

}  // namespace coword
