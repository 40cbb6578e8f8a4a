#include "coword/pipeline.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include <openssl/evp.h>

#include "coword/compare.hpp"
#include "coword/conet.hpp"
#include "coword/pajek.hpp"
#include "coword/tables.hpp"
#include "coword/text.hpp"
#include "coword/version.hpp"
#include "coword/vocabulary.hpp"
#include "json.hpp"

namespace coword {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 25> kKeys = {
    "records",         "mapping",       "scheme_a",           "scheme_b",
    "output",          "min_occurrences", "windows",          "source",
    "years",           "passthrough",   "resolution",         "cluster_weights",
    "cluster_labels",  "layout.edge_scale", "layout.max_iterations", "layout.tolerance",
    "layout.seed",     "svg.size",      "svg.margin",         "svg.min_radius",
    "svg.max_radius",  "svg.min_font",  "svg.max_font",       "svg.edge_floor",
    "svg.edge_width",
};

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
  auto v = trim(value);
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw InputError("invalid value '" + std::string(v) + "' for '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  auto v = trim(value);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw InputError("invalid boolean '" + std::string(v) + "' for '" + std::string(key) + "'");
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string out_path(const RunConfig& c, std::string_view name) {
  return (fs::path(c.output) / name).lexically_normal().string();
}

// Reads an artifact an earlier stage should have produced.
std::string read_artifact(const RunConfig& c, std::string_view name, std::string_view producer) {
  auto path = out_path(c, name);
  if (!fs::exists(path)) {
    throw InputError("missing artifact " + path + " (run `" + std::string(producer) +
                     "` first)");
  }
  return read_file(path);
}

void ensure_output_dir(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output, ec);
  if (ec) throw Error("cannot create output directory " + c.output + ": " + ec.message());
}

StageReport guarded(std::string_view stage, const std::function<StageReport()>& body) {
  try {
    auto report = body();
    report.stage = std::string(stage);
    return report;
  } catch (const StageError&) {
    throw;
  } catch (const InputError& e) {
    throw StageError(std::string(stage), e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(std::string(stage), e.what(), false);
  }
}

std::pair<ClassScheme, ClassScheme> load_schemes(const RunConfig& c) {
  if (c.scheme_a.empty() || c.scheme_b.empty()) {
    throw InputError("both scheme files are required (scheme_a, scheme_b)");
  }
  return {load_scheme(c.scheme_a, "A"), load_scheme(c.scheme_b, "B")};
}

RecordSet load_ingested(const RunConfig& c) {
  auto [a, b] = load_schemes(c);
  auto text = read_artifact(c, "records.csv", "ingest");
  return parse_records_text(text, out_path(c, "records.csv"), a, b, {c.years});
}

CoNetwork load_network(const RunConfig& c, const std::string& dir = {}) {
  auto v_name = (fs::path(dir) / "vertices.csv").string();
  auto e_name = (fs::path(dir) / "edges.csv").string();
  auto v = read_artifact(c, v_name, "net");
  auto e = read_artifact(c, e_name, "net");
  return parse_network_csv(v, out_path(c, v_name), e, out_path(c, e_name));
}

std::string lower_ascii(std::string s) {
  for (auto& ch : s) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return s;
}

std::vector<std::string> sources_of(const RecordSet& rs) {
  std::set<std::string> s;
  for (const auto& r : rs.records) s.insert(r.source);
  return {s.begin(), s.end()};
}

json to_json(const StageValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string value(trim(raw));
  if (key == "records") {
    records = value;
  } else if (key == "mapping") {
    mapping = value;
  } else if (key == "scheme_a") {
    scheme_a = value;
  } else if (key == "scheme_b") {
    scheme_b = value;
  } else if (key == "output") {
    output = value;
  } else if (key == "min_occurrences") {
    min_occurrences = parse_value<std::size_t>(key, value);
  } else if (key == "windows") {
    windows = parse_windows(value);
  } else if (key == "source") {
    if (value.empty()) {
      source.reset();
    } else {
      source = value;
    }
  } else if (key == "years") {
    years = PeriodWindow::parse(value);
  } else if (key == "passthrough") {
    passthrough = parse_bool(key, value);
  } else if (key == "resolution") {
    clustering.resolution = parse_value<double>(key, value);
  } else if (key == "cluster_weights") {
    if (value == "association" || value == "association_strength") {
      clustering.weighting = EdgeWeighting::association_strength;
    } else if (value == "raw") {
      clustering.weighting = EdgeWeighting::raw;
    } else {
      throw InputError("cluster_weights must be 'association' or 'raw', got '" + value + "'");
    }
  } else if (key == "cluster_labels") {
    cluster_labels.clear();
    if (!value.empty()) {
      for (auto part : split(value, ';')) cluster_labels.emplace_back(trim(part));
    }
  } else if (key == "layout.edge_scale") {
    layout.edge_scale = parse_value<double>(key, value);
  } else if (key == "layout.max_iterations") {
    layout.max_iterations = parse_value<std::size_t>(key, value);
  } else if (key == "layout.tolerance") {
    layout.tolerance = parse_value<double>(key, value);
  } else if (key == "layout.seed") {
    layout.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "svg.size") {
    svg.size = parse_value<double>(key, value);
  } else if (key == "svg.margin") {
    svg.margin = parse_value<double>(key, value);
  } else if (key == "svg.min_radius") {
    svg.min_radius = parse_value<double>(key, value);
  } else if (key == "svg.max_radius") {
    svg.max_radius = parse_value<double>(key, value);
  } else if (key == "svg.min_font") {
    svg.min_font = parse_value<double>(key, value);
  } else if (key == "svg.max_font") {
    svg.max_font = parse_value<double>(key, value);
  } else if (key == "svg.edge_floor") {
    svg.edge_floor = parse_value<std::size_t>(key, value);
  } else if (key == "svg.edge_width") {
    svg.edge_width = parse_value<double>(key, value);
  } else {
    throw InputError("unknown setting '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::string window_text;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i) window_text += ",";
    window_text += windows[i].label();
  }
  std::string labels;
  for (std::size_t i = 0; i < cluster_labels.size(); ++i) {
    if (i) labels += "; ";
    labels += cluster_labels[i];
  }
  return {
      {"records", records},
      {"mapping", mapping},
      {"scheme_a", scheme_a},
      {"scheme_b", scheme_b},
      {"output", output},
      {"min_occurrences", std::to_string(min_occurrences)},
      {"windows", window_text},
      {"source", source.value_or("")},
      {"years", years.label()},
      {"passthrough", passthrough ? "true" : "false"},
      {"resolution", shortest(clustering.resolution)},
      {"cluster_weights",
       clustering.weighting == EdgeWeighting::raw ? "raw" : "association"},
      {"cluster_labels", labels},
      {"layout.edge_scale", shortest(layout.edge_scale)},
      {"layout.max_iterations", std::to_string(layout.max_iterations)},
      {"layout.tolerance", shortest(layout.tolerance)},
      {"layout.seed", std::to_string(layout.seed)},
      {"svg.size", shortest(svg.size)},
      {"svg.margin", shortest(svg.margin)},
      {"svg.min_radius", shortest(svg.min_radius)},
      {"svg.max_radius", shortest(svg.max_radius)},
      {"svg.min_font", shortest(svg.min_font)},
      {"svg.max_font", shortest(svg.max_font)},
      {"svg.edge_floor", std::to_string(svg.edge_floor)},
      {"svg.edge_width", shortest(svg.edge_width)},
  };
}

void RunConfig::validate() const {
  if (min_occurrences < 1) throw InputError("min_occurrences must be >= 1");
  if (!(clustering.resolution > 0.0)) throw InputError("resolution must be positive");
  if (!(layout.edge_scale > 0.0)) throw InputError("layout.edge_scale must be positive");
  if (!(layout.tolerance > 0.0)) throw InputError("layout.tolerance must be positive");
  if (layout.max_iterations < 1) throw InputError("layout.max_iterations must be >= 1");
  if (!(svg.size > 2.0 * svg.margin) || svg.margin < 0.0) {
    throw InputError("svg.size must exceed twice svg.margin");
  }
  if (svg.min_radius > svg.max_radius || svg.min_font > svg.max_font) {
    throw InputError("svg minimum sizes must not exceed maximum sizes");
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      if (windows[i].overlaps(windows[j])) {
        throw InputError("overlapping period windows " + windows[i].label() + " and " +
                         windows[j].label());
      }
    }
  }
  for (const auto* path : {&records, &scheme_a, &scheme_b}) {
    if (path->empty()) throw InputError("records, scheme_a and scheme_b must all be set");
  }
  for (const auto* path : {&records, &mapping, &scheme_a, &scheme_b}) {
    if (!path->empty() && !fs::is_regular_file(*path)) {
      throw InputError("input file not found: " + *path);
    }
  }
}

std::span<const std::string_view> config_keys() { return kKeys; }

void apply_config_file(RunConfig& config, const std::string& path) {
  auto text = read_file(path);
  auto base = fs::path(path).parent_path();
  auto lines = split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError("expected 'key = value'", path, i + 1);
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    std::string resolved(value);
    if ((key == "records" || key == "mapping" || key == "scheme_a" || key == "scheme_b" ||
         key == "output") &&
        !value.empty() && fs::path(resolved).is_relative()) {
      resolved = (base / resolved).lexically_normal().string();
    }
    try {
      config.set(key, resolved);
    } catch (const InputError& e) {
      throw InputError(e.message(), path, i + 1);
    }
  }
}

StageError::StageError(std::string stage, const std::string& message, bool input_error)
    : Error("[" + stage + "] " + message), stage_(std::move(stage)), input_error_(input_error) {}

StageReport run_ingest(const RunConfig& c) {
  return guarded("ingest", [&] {
    auto [a, b] = load_schemes(c);
    auto rs = parse_records(c.records, a, b, {c.years});
    const auto read = rs.size();
    if (c.source) rs = filter_records(rs, {c.source, std::nullopt});
    if (rs.empty()) {
      throw InputError("no records to analyse" +
                           std::string(c.source ? " for source " + *c.source : ""),
                       c.records);
    }
    ensure_output_dir(c);
    write_file(out_path(c, "records.csv"), format_records(rs));
    StageReport r;
    r.counts.emplace_back("records_read", static_cast<std::int64_t>(read));
    r.counts.emplace_back("records", static_cast<std::int64_t>(rs.size()));
    std::map<std::string, std::int64_t> per_source;
    for (const auto& rec : rs.records) ++per_source[rec.source];
    for (const auto& [s, n] : per_source) r.counts.emplace_back("source." + s, n);
    r.files = {"records.csv"};
    return r;
  });
}

StageReport run_report(const RunConfig& c) {
  return guarded("report", [&] {
    auto [a, b] = load_schemes(c);
    auto rs = load_ingested(c);
    StageReport r;
    auto emit = [&](const std::string& name, const std::string& body) {
      write_file(out_path(c, name), body);
      r.files.push_back(name);
    };
    emit("distribution_a.csv", format_distribution_csv(class_distribution(rs, a, ClassSlot::a)));
    emit("distribution_b.csv", format_distribution_csv(class_distribution(rs, b, ClassSlot::b)));
    emit("crosstab.csv", format_crosstab_csv(class_crosstab(rs, a, b)));

    auto grouped = [&](const ClassScheme& scheme, ClassSlot slot,
                       const std::vector<std::pair<std::string, RecordSet>>& groups) {
      std::vector<std::string> labels;
      std::vector<std::vector<DistributionRow>> tables;
      for (const auto& [label, set] : groups) {
        labels.push_back(label);
        tables.push_back(class_distribution(set, scheme, slot));
      }
      return format_grouped_distribution_csv(labels, tables);
    };
    if (!c.windows.empty()) {
      std::vector<std::pair<std::string, RecordSet>> groups;
      auto parts = split_periods(rs, c.windows);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        groups.emplace_back(c.windows[i].label(), std::move(parts[i]));
      }
      emit("distribution_a_by_period.csv", grouped(a, ClassSlot::a, groups));
      emit("distribution_b_by_period.csv", grouped(b, ClassSlot::b, groups));
    }
    auto sources = sources_of(rs);
    if (sources.size() > 1) {
      std::vector<std::pair<std::string, RecordSet>> groups;
      for (const auto& s : sources) groups.emplace_back(s, filter_records(rs, {s, std::nullopt}));
      emit("distribution_a_by_source.csv", grouped(a, ClassSlot::a, groups));
      emit("distribution_b_by_source.csv", grouped(b, ClassSlot::b, groups));
    }
    r.counts.emplace_back("records", static_cast<std::int64_t>(rs.size()));
    return r;
  });
}

StageReport run_report(const RunConfig& c, const ReportRequest& request) {
  return guarded("report", [&] {
    auto [a, b] = load_schemes(c);
    auto rs = load_ingested(c);
    const auto& scheme = request.scheme == ClassSlot::a ? a : b;
    const std::string tag = request.scheme == ClassSlot::a ? "a" : "b";
    std::vector<std::string> labels;
    std::vector<std::vector<DistributionRow>> tables;
    std::string name;
    switch (request.by) {
      case ReportRequest::By::overall:
        name = "distribution_" + tag + ".csv";
        write_file(out_path(c, name),
                   format_distribution_csv(class_distribution(rs, scheme, request.scheme)));
        break;
      case ReportRequest::By::period: {
        if (c.windows.empty()) throw InputError("no period windows configured (--windows)");
        auto parts = split_periods(rs, c.windows);
        for (std::size_t i = 0; i < parts.size(); ++i) {
          labels.push_back(c.windows[i].label());
          tables.push_back(class_distribution(parts[i], scheme, request.scheme));
        }
        name = "distribution_" + tag + "_by_period.csv";
        write_file(out_path(c, name), format_grouped_distribution_csv(labels, tables));
        break;
      }
      case ReportRequest::By::source:
        for (const auto& s : sources_of(rs)) {
          labels.push_back(s);
          tables.push_back(
              class_distribution(filter_records(rs, {s, std::nullopt}), scheme, request.scheme));
        }
        name = "distribution_" + tag + "_by_source.csv";
        write_file(out_path(c, name), format_grouped_distribution_csv(labels, tables));
        break;
    }
    StageReport r;
    r.counts.emplace_back("records", static_cast<std::int64_t>(rs.size()));
    r.files = {name};
    return r;
  });
}

StageReport run_normalize(const RunConfig& c) {
  return guarded("normalize", [&] {
    auto rs = load_ingested(c);
    MappingTable table;
    if (!c.mapping.empty()) table = load_mapping(c.mapping);
    auto idx = normalize(rs, table, c.passthrough);
    auto stats = coverage_stats(idx, c.min_occurrences);
    write_file(out_path(c, "descriptors.csv"), format_descriptors_csv(rs, idx));
    write_file(out_path(c, "frequencies.csv"), format_frequencies_csv(descriptor_frequencies(idx)));
    write_file(out_path(c, "unmapped.csv"), format_unmapped_csv(idx));
    write_file(out_path(c, "coverage.csv"), format_coverage_csv(stats, idx.token_count));
    std::size_t unmapped = 0;
    for (const auto& [_, n] : idx.unmapped) unmapped += n;
    StageReport r;
    r.counts = {
        {"mapping_entries", static_cast<std::int64_t>(table.size())},
        {"descriptors", static_cast<std::int64_t>(stats.descriptors_total)},
        {"occurrences", static_cast<std::int64_t>(stats.occurrences_total)},
        {"tokens_before_dedup", static_cast<std::int64_t>(idx.token_count)},
        {"unmapped_tokens", static_cast<std::int64_t>(unmapped)},
        {"descriptors_retained", static_cast<std::int64_t>(stats.descriptors_retained)},
        {"occurrences_retained", static_cast<std::int64_t>(stats.occurrences_retained)},
        {"percent_retained", static_cast<std::int64_t>(stats.percent_retained)},
    };
    r.files = {"descriptors.csv", "frequencies.csv", "unmapped.csv", "coverage.csv"};
    return r;
  });
}

StageReport run_net(const RunConfig& c) {
  return guarded("net", [&] {
    auto text = read_artifact(c, "descriptors.csv", "normalize");
    auto rows = parse_descriptors_csv(text, out_path(c, "descriptors.csv"));

    auto build = [&](auto keep) {
      std::vector<RecordDescriptors> sets;
      for (const auto& row : rows) {
        if (keep(row)) sets.push_back({row.id, row.descriptors});
      }
      return build_network(index_from_sets(std::move(sets)));
    };
    auto write_net = [&](const CoNetwork& net, const std::string& dir, StageReport& r) {
      std::error_code ec;
      fs::create_directories(fs::path(c.output) / dir, ec);
      if (ec) throw Error("cannot create " + (fs::path(c.output) / dir).string());
      auto put = [&](const char* name, const std::string& body) {
        auto rel = (fs::path(dir) / name).lexically_normal().string();
        write_file(out_path(c, rel), body);
        r.files.push_back(rel);
      };
      put("vertices.csv", format_vertices_csv(net));
      put("edges.csv", format_edge_list_csv(net));
      put("metrics.csv", format_metrics_csv(net, network_metrics(net)));
    };

    StageReport r;
    auto full = build([](const auto&) { return true; });
    auto net = threshold_filter(full, c.min_occurrences);
    write_net(net, ".", r);
    auto metrics = network_metrics(net);
    r.counts = {
        {"vertices_before_threshold", static_cast<std::int64_t>(full.size())},
        {"edges_before_threshold", static_cast<std::int64_t>(full.edges().size())},
        {"vertices", static_cast<std::int64_t>(net.size())},
        {"edges", static_cast<std::int64_t>(net.edges().size())},
        {"components", static_cast<std::int64_t>(metrics.components)},
        {"density", metrics.density},
    };

    if (!c.windows.empty()) {
      std::set<std::string> sources;
      for (const auto& row : rows) sources.insert(row.source);
      std::vector<std::pair<std::string, std::optional<std::string>>> scopes{{"all", std::nullopt}};
      for (const auto& s : sources) scopes.emplace_back(lower_ascii(s), s);
      for (const auto& [scope, source] : scopes) {
        for (std::size_t w = 0; w < c.windows.size(); ++w) {
          const auto& window = c.windows[w];
          auto sub = threshold_filter(build([&](const DescriptorRow& row) {
                                        return window.contains(row.year) &&
                                               (!source || row.source == *source);
                                      }),
                                      c.min_occurrences);
          auto name = scope + ".window" + std::to_string(w + 1);
          write_net(sub, name, r);
          r.counts.emplace_back(name + ".vertices", static_cast<std::int64_t>(sub.size()));
          r.counts.emplace_back(name + ".edges", static_cast<std::int64_t>(sub.edges().size()));
        }
      }
    }
    return r;
  });
}

StageReport run_cluster(const RunConfig& c) {
  return guarded("cluster", [&] {
    auto net = load_network(c);
    if (net.empty()) {
      throw InputError("network is empty at min_occurrences=" +
                       std::to_string(c.min_occurrences) + "; lower the threshold");
    }
    auto partition = detect_clusters(net, c.clustering);
    auto summary = cluster_summary(partition, net, c.cluster_labels);
    write_pajek_clu(partition, out_path(c, "clusters.clu"));
    write_file(out_path(c, "clusters.csv"), format_clusters_csv(net, summary));
    StageReport r;
    r.counts = {
        {"clusters", static_cast<std::int64_t>(partition.cluster_count())},
        {"modularity", partition.modularity},
    };
    r.files = {"clusters.clu", "clusters.csv"};
    return r;
  });
}

StageReport run_layout(const RunConfig& c) {
  return guarded("layout", [&] {
    auto net = load_network(c);
    if (net.empty()) {
      throw InputError("network is empty at min_occurrences=" +
                       std::to_string(c.min_occurrences) + "; lower the threshold");
    }
    auto layout = kamada_kawai(net, c.layout);
    write_file(out_path(c, "layout.csv"), format_layout_csv(net, layout));
    StageReport r;
    r.counts = {
        {"iterations", static_cast<std::int64_t>(layout.iterations)},
        {"final_stress", layout.final_stress},
        {"converged", layout.converged},
    };
    r.files = {"layout.csv"};
    return r;
  });
}

StageReport run_export(const RunConfig& c) {
  return guarded("export", [&] {
    auto net = load_network(c);
    auto clu_text = read_artifact(c, "clusters.clu", "cluster");
    ClusterPartition partition;
    partition.assignment = parse_pajek_clu(clu_text, out_path(c, "clusters.clu"));
    if (partition.assignment.size() != net.size()) {
      throw InputError("clusters.clu covers " + std::to_string(partition.assignment.size()) +
                       " vertices but the network has " + std::to_string(net.size()));
    }
    auto layout = parse_layout_csv(net, read_artifact(c, "layout.csv", "layout"),
                                   out_path(c, "layout.csv"));
    write_pajek_net(net, &layout, out_path(c, "network.net"));
    write_label_map_svg(net, layout, partition, out_path(c, "map.svg"), c.svg);
    std::size_t drawn = 0;
    for (const auto& e : net.edges()) drawn += e.weight >= c.svg.edge_floor ? 1 : 0;
    StageReport r;
    r.counts = {
        {"vertices", static_cast<std::int64_t>(net.size())},
        {"edges", static_cast<std::int64_t>(net.edges().size())},
        {"svg_edges", static_cast<std::int64_t>(drawn)},
    };
    r.files = {"network.net", "map.svg"};
    return r;
  });
}

StageReport run_compare(const RunConfig& c, const std::string& a, const std::string& b) {
  return guarded("compare", [&] {
    for (const auto& name : {a, b}) {
      if (name.empty() || name.find_first_of("/\\") != std::string::npos || name == "..") {
        throw InputError("invalid sub-network name '" + name + "'");
      }
    }
    auto net_a = load_network(c, a);
    auto net_b = load_network(c, b);
    auto report = compare_networks(net_a, net_b, a, b);
    auto name = "compare_" + a + "_vs_" + b + ".csv";
    write_file(out_path(c, name), format_compare_csv(report));
    StageReport r;
    r.counts = {
        {"appeared", static_cast<std::int64_t>(report.appeared.size())},
        {"vanished", static_cast<std::int64_t>(report.vanished.size())},
        {"persisted", static_cast<std::int64_t>(report.persisted.size())},
    };
    r.files = {name};
    return r;
  });
}

std::vector<StageReport> run_pipeline(const RunConfig& c) {
  const auto started = utc_timestamp();
  try {
    c.validate();
  } catch (const InputError& e) {
    throw StageError("config", e.what(), true);
  }
  std::vector<StageReport> reports;
  reports.push_back(run_ingest(c));
  reports.push_back(run_report(c));
  reports.push_back(run_normalize(c));
  reports.push_back(run_net(c));
  reports.push_back(run_cluster(c));
  reports.push_back(run_layout(c));
  reports.push_back(run_export(c));
  if (c.windows.size() == 2) reports.push_back(run_compare(c, "all.window1", "all.window2"));
  try {
    write_manifest(c, reports, started, false);
  } catch (const std::exception& e) {
    throw StageError("manifest", e.what(), false);
  }
  return reports;
}

void write_manifest(const RunConfig& c, std::span<const StageReport> stages,
                    const std::string& started_at, bool merge) {
  const auto path = out_path(c, "manifest.json");
  json manifest = json::object();
  if (merge && fs::exists(path)) {
    try {
      manifest = json::parse(read_file(path));
    } catch (const json::exception&) {
      manifest = json::object();
    }
  }
  manifest["version"] = kVersion;
  json config = json::object();
  for (const auto& [k, v] : c.echo()) config[k] = v;
  manifest["config"] = config;

  json inputs = json::object();
  for (const auto& [key, file] : {std::pair{"records", &c.records}, {"mapping", &c.mapping},
                                  {"scheme_a", &c.scheme_a}, {"scheme_b", &c.scheme_b}}) {
    if (file->empty()) continue;
    inputs[key] = {{"path", *file}, {"sha256", sha256_file(*file)}};
  }
  manifest["inputs"] = inputs;

  if (!manifest.contains("stages") || !merge) manifest["stages"] = json::object();
  for (const auto& s : stages) {
    json counts = json::object();
    for (const auto& [k, v] : s.counts) counts[k] = to_json(v);
    manifest["stages"][s.stage] = {{"counts", counts}, {"files", s.files}};
  }
  manifest["timestamps"] = {{"started_at", started_at}, {"finished_at", utc_timestamp()}};
  ensure_output_dir(c);
  write_file(path, manifest.dump(2) + "\n");
}

std::string sha256_file(const std::string& path) {
  auto data = read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed for " + path);
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace coword
