#include "coword/tables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "coword/csv.hpp"
#include "coword/error.hpp"
#include "coword/text.hpp"

namespace coword {
namespace {

std::string row(std::initializer_list<std::string> fields) {
  std::vector<std::string> v(fields);
  return csv::format_row(v);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <typename T>
std::optional<T> number(std::string_view s) {
  s = trim(s);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::vector<csv::Row> parse_with_header(std::string_view text, const std::string& name,
                                        std::string_view header) {
  auto rows = csv::parse(text, name);
  if (rows.empty()) throw InputError("missing header '" + std::string(header) + "'", name, 1);
  std::string got;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    if (i) got += ',';
    got += rows[0].fields[i];
  }
  if (got != header) {
    throw InputError("unexpected header '" + got + "' (expected '" + std::string(header) + "')",
                     name, rows[0].line);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto want = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1);
    if (rows[r].fields.size() != want) {
      throw InputError("expected " + std::to_string(want) + " fields, found " +
                           std::to_string(rows[r].fields.size()),
                       name, rows[r].line);
    }
  }
  rows.erase(rows.begin());
  return rows;
}

}  // namespace

std::string format_distribution_csv(std::span<const DistributionRow> rows) {
  std::string out = "label,count,percent\n";
  for (const auto& r : rows) {
    out += row({r.label, std::to_string(r.count), std::to_string(r.percent)});
  }
  return out;
}

std::string format_grouped_distribution_csv(std::span<const std::string> group_labels,
                                            std::span<const std::vector<DistributionRow>> groups) {
  std::vector<std::string> header{"label"};
  for (const auto& g : group_labels) {
    header.push_back(g + "_count");
    header.push_back(g + "_percent");
  }
  std::string out = csv::format_row(header);

  std::vector<std::string> labels;
  for (const auto& g : groups) {
    for (const auto& r : g) {
      if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) {
        labels.push_back(r.label);
      }
    }
  }
  for (const auto& label : labels) {
    std::vector<std::string> fields{label};
    for (const auto& g : groups) {
      auto it = std::find_if(g.begin(), g.end(), [&](const auto& r) { return r.label == label; });
      fields.push_back(it == g.end() ? "0" : std::to_string(it->count));
      fields.push_back(it == g.end() ? "0" : std::to_string(it->percent));
    }
    out += csv::format_row(fields);
  }
  return out;
}

std::string format_crosstab_csv(const CrossTab& tab) {
  const std::size_t last_row = tab.row_labels.size() - 1;
  const std::size_t last_col = tab.col_labels.size() - 1;
  const bool keep_row = tab.row_sum(last_row) > 0;
  const bool keep_col = tab.col_sum(last_col) > 0;
  std::vector<std::string> header{"class_a"};
  for (std::size_t c = 0; c < tab.col_labels.size(); ++c) {
    if (c == last_col && !keep_col) continue;
    header.push_back(tab.col_labels[c]);
  }
  header.emplace_back("total");
  std::string out = csv::format_row(header);
  for (std::size_t r = 0; r < tab.row_labels.size(); ++r) {
    if (r == last_row && !keep_row) continue;
    std::vector<std::string> fields{tab.row_labels[r]};
    for (std::size_t c = 0; c < tab.col_labels.size(); ++c) {
      if (c == last_col && !keep_col) continue;
      fields.push_back(std::to_string(tab.at(r, c)));
    }
    fields.push_back(std::to_string(tab.row_sum(r)));
    out += csv::format_row(fields);
  }
  return out;
}

std::string format_frequencies_csv(std::span<const RankedDescriptor> ranked) {
  std::string out = "descriptor,occurrences\n";
  for (const auto& r : ranked) out += row({r.text, std::to_string(r.count)});
  return out;
}

std::string format_unmapped_csv(const OccurrenceIndex& idx) {
  std::vector<std::pair<std::string, std::size_t>> items(idx.unmapped.begin(),
                                                         idx.unmapped.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& l, const auto& r) { return l.second > r.second; });
  std::string out = "raw_keyword,count\n";
  for (const auto& [raw, count] : items) out += row({raw, std::to_string(count)});
  return out;
}

std::string format_coverage_csv(const CoverageStats& s, std::size_t token_count) {
  std::string out = "statistic,value\n";
  out += row({"min_occurrences", std::to_string(s.min_occurrences)});
  out += row({"descriptors_total", std::to_string(s.descriptors_total)});
  out += row({"occurrences_total", std::to_string(s.occurrences_total)});
  out += row({"descriptors_retained", std::to_string(s.descriptors_retained)});
  out += row({"occurrences_retained", std::to_string(s.occurrences_retained)});
  out += row({"percent_retained", std::to_string(s.percent_retained)});
  out += row({"tokens_before_dedup", std::to_string(token_count)});
  out += row({"empty_universe", s.empty_universe ? "true" : "false"});
  return out;
}

std::string format_descriptors_csv(const RecordSet& rs, const OccurrenceIndex& idx) {
  if (rs.size() != idx.per_record.size()) {
    throw std::invalid_argument("record set and index disagree on record count");
  }
  std::string out = "id,source,year,descriptors\n";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto& rec = rs.records[i];
    std::vector<std::string> ds(idx.per_record[i].descriptors.begin(),
                                idx.per_record[i].descriptors.end());
    out += row({rec.id, rec.source, std::to_string(rec.year), join(ds, "; ")});
  }
  return out;
}

std::vector<DescriptorRow> parse_descriptors_csv(std::string_view text,
                                                 const std::string& source_name) {
  std::vector<DescriptorRow> out;
  for (const auto& r : parse_with_header(text, source_name, "id,source,year,descriptors")) {
    DescriptorRow d{r.fields[0], r.fields[1], 0, {}};
    auto year = number<int>(r.fields[2]);
    if (!year) throw InputError("field 'year': not an integer", source_name, r.line);
    d.year = *year;
    for (auto part : split(r.fields[3], ';')) {
      part = trim(part);
      if (!part.empty()) d.descriptors.emplace(part);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string format_vertices_csv(const CoNetwork& net) {
  std::string out = "descriptor,occurrences\n";
  for (const auto& v : net.vertices()) out += row({v.label, std::to_string(v.weight)});
  return out;
}

std::string format_edge_list_csv(const CoNetwork& net) {
  std::string out = "keyword1,keyword2,weight\n";
  for (const auto& e : edge_list(net)) {
    out += row({e.keyword1, e.keyword2, std::to_string(e.weight)});
  }
  return out;
}

CoNetwork parse_network_csv(std::string_view vertices_text, const std::string& vertices_name,
                            std::string_view edges_text, const std::string& edges_name) {
  std::vector<Vertex> vertices;
  std::map<std::string, std::size_t> index;
  for (const auto& r : parse_with_header(vertices_text, vertices_name, "descriptor,occurrences")) {
    auto w = number<std::size_t>(r.fields[1]);
    if (!w) throw InputError("field 'occurrences': not a count", vertices_name, r.line);
    if (!index.emplace(r.fields[0], vertices.size()).second) {
      throw InputError("duplicate descriptor '" + r.fields[0] + "'", vertices_name, r.line);
    }
    vertices.push_back({r.fields[0], *w});
  }
  std::vector<Edge> edges;
  for (const auto& r : parse_with_header(edges_text, edges_name, "keyword1,keyword2,weight")) {
    auto a = index.find(r.fields[0]);
    auto b = index.find(r.fields[1]);
    if (a == index.end() || b == index.end()) {
      throw InputError("edge names unknown descriptor '" +
                           (a == index.end() ? r.fields[0] : r.fields[1]) + "'",
                       edges_name, r.line);
    }
    auto w = number<std::size_t>(r.fields[2]);
    if (!w || *w == 0) throw InputError("field 'weight': not a positive count", edges_name, r.line);
    edges.push_back({a->second, b->second, *w});
  }
  return CoNetwork(std::move(vertices), std::move(edges));
}

std::string format_metrics_csv(const CoNetwork& net, const NetworkMetrics& m) {
  auto adj = net.adjacency();
  std::string out = "descriptor,degree,degree_centrality,closeness\n";
  for (std::size_t v = 0; v < net.size(); ++v) {
    out += row({net.vertices()[v].label, std::to_string(adj[v].size()),
                format_fixed(m.degree_centrality[v], 6), format_fixed(m.closeness[v], 6)});
  }
  return out;
}

std::string format_clusters_csv(const CoNetwork& net, std::span<const ClusterSummary> clusters) {
  std::string out = "cluster,items,legend,members\n";
  for (const auto& c : clusters) {
    std::vector<std::string> names;
    for (auto v : c.members) names.push_back(net.vertices()[v].label);
    out += row({std::to_string(c.id), std::to_string(c.members.size()), c.legend,
                join(names, "; ")});
  }
  return out;
}

std::string format_layout_csv(const CoNetwork& net, const LayoutMap& layout) {
  std::string out = "descriptor,x,y\n";
  for (std::size_t v = 0; v < net.size(); ++v) {
    out += row({net.vertices()[v].label, format_fixed(layout.coordinates[v].x, 6),
                format_fixed(layout.coordinates[v].y, 6)});
  }
  return out;
}

LayoutMap parse_layout_csv(const CoNetwork& net, std::string_view text,
                           const std::string& source_name) {
  auto rows = parse_with_header(text, source_name, "descriptor,x,y");
  if (rows.size() != net.size()) {
    throw InputError("layout has " + std::to_string(rows.size()) + " rows but the network has " +
                         std::to_string(net.size()) + " vertices",
                     source_name);
  }
  LayoutMap layout;
  layout.coordinates.resize(net.size());
  for (std::size_t v = 0; v < rows.size(); ++v) {
    const auto& r = rows[v];
    if (r.fields[0] != net.vertices()[v].label) {
      throw InputError("expected descriptor '" + net.vertices()[v].label + "'", source_name,
                       r.line);
    }
    auto x = number<double>(r.fields[1]);
    auto y = number<double>(r.fields[2]);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
      throw InputError("invalid coordinates", source_name, r.line);
    }
    layout.coordinates[v] = {*x, *y};
  }
  return layout;
}

std::string format_compare_csv(const CompareReport& report) {
  std::string out = csv::format_row(std::vector<std::string>{
      "kind", "name", report.a.label, report.b.label, "delta"});
  auto count_row = [&](const char* name, std::size_t a, std::size_t b) {
    out += row({"metric", name, std::to_string(a), std::to_string(b),
                std::to_string(static_cast<long long>(b) - static_cast<long long>(a))});
  };
  auto real_row = [&](const char* name, double a, double b) {
    out += row({"metric", name, format_fixed(a, 6), format_fixed(b, 6), format_fixed(b - a, 6)});
  };
  count_row("vertices", report.a.vertices, report.b.vertices);
  count_row("edges", report.a.edges, report.b.edges);
  real_row("density", report.a.density, report.b.density);
  real_row("mean_degree_centrality", report.a.mean_degree_centrality,
           report.b.mean_degree_centrality);
  real_row("mean_closeness", report.a.mean_closeness, report.b.mean_closeness);
  count_row("components", report.a.components, report.b.components);
  for (const auto& d : report.vanished) out += row({"vanished", d, "", "", ""});
  for (const auto& d : report.appeared) out += row({"appeared", d, "", "", ""});
  for (const auto& p : report.persisted) {
    out += row({"persisted", p.descriptor, std::to_string(p.degree_a), std::to_string(p.degree_b),
                std::to_string(p.delta)});
  }
  return out;
}

}  // namespace coword
