// coword: co-word analysis pipeline driver.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coword/conet.hpp"
#include "coword/pipeline.hpp"
#include "coword/tables.hpp"
#include "coword/text.hpp"
#include "coword/version.hpp"
#include "coword/vocabulary.hpp"

namespace {

using namespace coword;

constexpr int kExitInput = 1;
constexpr int kExitPipeline = 2;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

// Command-line spellings of the config keys.
const std::vector<Flag> kFlags = {
    {"--records", "records", "Bibliographic records CSV"},
    {"--mapping", "mapping", "Keyword mapping table (raw -> canonical)"},
    {"--scheme-a", "scheme_a", "Class scheme A label file"},
    {"--scheme-b", "scheme_b", "Class scheme B label file"},
    {"-o,--output", "output", "Output directory (default coword-out)"},
    {"--min-occ", "min_occurrences", "Minimum descriptor occurrences (default 5)"},
    {"--windows", "windows", "Period windows, e.g. 2001-2006,2007-2012"},
    {"--source", "source", "Keep only records from this source"},
    {"--years", "years", "Accepted publication years (default 2001-2012)"},
    {"--passthrough", "passthrough", "Keep unmapped keywords as descriptors (true|false)"},
    {"--resolution", "resolution", "Modularity resolution (default 1)"},
    {"--cluster-weights", "cluster_weights", "Clustering weights: association|raw"},
    {"--cluster-labels", "cluster_labels", "';'-separated cluster names"},
    {"--edge-scale", "layout.edge_scale", "Layout length of one unit of graph distance"},
    {"--max-iterations", "layout.max_iterations", "Layout step budget per component"},
    {"--tolerance", "layout.tolerance", "Layout gradient tolerance (default 1e-4)"},
    {"--seed", "layout.seed", "Layout start jitter seed (0: plain circle)"},
    {"--svg-size", "svg.size", "SVG canvas size in pixels"},
    {"--svg-edge-floor", "svg.edge_floor", "Lightest edge weight drawn in the SVG"},
};

int fail(const std::string& message, int code) {
  std::cerr << "coword: error: " << message << "\n";
  return code;
}

void print_report(const StageReport& r) {
  std::cout << r.stage << ":";
  for (const auto& [key, value] : r.counts) {
    std::cout << " " << key << "=";
    std::visit(
        [](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            std::cout << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, double>) {
            std::cout << format_fixed(v, 6);
          } else {
            std::cout << v;
          }
        },
        value);
  }
  std::cout << "\n";
}

// Edge rows for one descriptor, built from normalize output at the
// configured threshold.
StageReport run_query(const RunConfig& config, const std::string& descriptor) {
  try {
    auto path = config.output + "/descriptors.csv";
    auto rows = parse_descriptors_csv(read_file(path), path);
    std::vector<RecordDescriptors> sets;
    for (auto& row : rows) sets.push_back({row.id, std::move(row.descriptors)});
    auto net = threshold_filter(build_network(index_from_sets(std::move(sets))),
                                config.min_occurrences);
    auto edges = edge_query(net, descriptor);
    std::cout << format_edge_rows(edges);
    StageReport r;
    r.stage = "query";
    r.counts.emplace_back("edges", static_cast<std::int64_t>(edges.size()));
    return r;
  } catch (const InputError& e) {
    throw StageError("query", e.what(), true);
  } catch (const std::exception& e) {
    throw StageError("query", e.what(), false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-word analysis: keyword networks, clusters and maps from bibliographic records",
               "coword"};
  app.set_version_flag("--version", std::string(coword::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  app.add_option("--config", config_file, "key = value settings file; flags take precedence")
      ->check(CLI::ExistingFile);
  std::map<std::string, std::string> flag_values;
  for (const auto& f : kFlags) app.add_option(f.name, flag_values[f.key], f.help);
  std::vector<std::string> settings;
  app.add_option("--set", settings, "Any setting as key=value (repeatable)");

  auto* run = app.add_subcommand("run", "Run every stage and write manifest.json");
  auto* ingest = app.add_subcommand("ingest", "Parse and validate records into records.csv");
  auto* report = app.add_subcommand("report", "Class distributions and cross-tab");
  std::string scheme;
  std::string by;
  report->add_option("--scheme", scheme, "Single table for scheme a or b")
      ->check(CLI::IsMember({"a", "b"}));
  report->add_option("--by", by, "Group the single table by period or source")
      ->check(CLI::IsMember({"period", "source"}));
  auto* normalize = app.add_subcommand("normalize", "Map keywords to descriptors and count them");
  auto* net = app.add_subcommand("net", "Build and threshold the co-occurrence network");
  auto* cluster = app.add_subcommand("cluster", "Modularity clustering of the network");
  auto* layout = app.add_subcommand("layout", "Kamada-Kawai coordinates");
  auto* exportc = app.add_subcommand("export", "Write Pajek .net and the SVG label map");
  auto* compare = app.add_subcommand("compare", "Compare two sub-networks written by net");
  std::string net_a;
  std::string net_b;
  compare->add_option("--a", net_a, "First sub-network, e.g. all.window1")->required();
  compare->add_option("--b", net_b, "Second sub-network, e.g. all.window2")->required();
  auto* query = app.add_subcommand("query", "Print the co-occurrence rows of one descriptor");
  std::string descriptor;
  query->add_option("--descriptor", descriptor, "Descriptor to look up")->required();
  for (auto* sub : app.get_subcommands({})) {
    sub->footer("Settings (--config, --records, --min-occ, --windows, --source, --set and the\n"
                "rest) are shared by every subcommand; see `coword --help`.");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  RunConfig config;
  try {
    if (!config_file.empty()) apply_config_file(config, config_file);
    for (const auto& f : kFlags) {
      const auto& value = flag_values[f.key];
      if (!value.empty()) config.set(f.key, value);
    }
    for (const auto& s : settings) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + s + "'");
      config.set(trim(std::string_view(s).substr(0, eq)), std::string_view(s).substr(eq + 1));
    }
  } catch (const Error& e) {
    return fail(std::string("[config] ") + e.what(), kExitInput);
  }

  const auto started = utc_timestamp();
  try {
    std::vector<StageReport> reports;
    if (run->parsed()) {
      reports = run_pipeline(config);
    } else if (ingest->parsed()) {
      reports.push_back(run_ingest(config));
    } else if (report->parsed()) {
      if (scheme.empty() && by.empty()) {
        reports.push_back(run_report(config));
      } else {
        ReportRequest request;
        request.scheme = scheme == "b" ? ClassSlot::b : ClassSlot::a;
        request.by = by == "period"   ? ReportRequest::By::period
                     : by == "source" ? ReportRequest::By::source
                                      : ReportRequest::By::overall;
        reports.push_back(run_report(config, request));
        std::cout << read_file(config.output + "/" + reports.back().files.front());
      }
    } else if (normalize->parsed()) {
      reports.push_back(run_normalize(config));
    } else if (net->parsed()) {
      reports.push_back(run_net(config));
    } else if (cluster->parsed()) {
      reports.push_back(run_cluster(config));
    } else if (layout->parsed()) {
      reports.push_back(run_layout(config));
    } else if (exportc->parsed()) {
      reports.push_back(run_export(config));
    } else if (compare->parsed()) {
      reports.push_back(run_compare(config, net_a, net_b));
    } else if (query->parsed()) {
      run_query(config, descriptor);
      return 0;
    }
    if (!run->parsed()) {
      try {
        write_manifest(config, reports, started, true);
      } catch (const std::exception& e) {
        throw StageError("manifest", e.what(), false);
      }
    }
    if (!report->parsed() || (scheme.empty() && by.empty())) {
      for (const auto& r : reports) print_report(r);
    }
  } catch (const StageError& e) {
    return fail(e.what(), e.input_error() ? kExitInput : kExitPipeline);
  } catch (const std::exception& e) {
    return fail(e.what(), kExitPipeline);
  }
  return 0;
}
