#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "coword/csv.hpp"
#include "coword/text.hpp"
#include "coword/version.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using testing::data;
using testing::fixture;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

Result run(const std::string& args) {
  static int counter = 0;
  auto base = fs::temp_directory_path() / ("coword-cli-capture-" + std::to_string(counter++));
  auto out = base.string() + ".out";
  auto err = base.string() + ".err";
  std::string cmd = shell_quote(COWORD_CLI) + " " + args + " >" + shell_quote(out) + " 2>" +
                    shell_quote(err);
  int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = coword::read_file(out);
  r.err = coword::read_file(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

std::string inputs() {
  return "--records " + shell_quote(fixture("records.csv")) + " --mapping " +
         shell_quote(fixture("mapping.txt")) + " --scheme-a " +
         shell_quote(data("scheme_a.txt")) + " --scheme-b " + shell_quote(data("scheme_b.txt"));
}

std::string out_flag(const fs::path& dir) { return " -o " + shell_quote(dir.string()); }

// Relative path -> contents for every file under dir.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), dir).generic_string()] =
        coword::read_file(entry.path().string());
  }
  return files;
}

nlohmann::json manifest(const fs::path& dir) {
  return nlohmann::json::parse(coword::read_file((dir / "manifest.json").string()));
}

std::set<std::string> vertex_labels(const fs::path& file) {
  std::set<std::string> labels;
  auto rows = coword::csv::parse(coword::read_file(file.string()), file.string());
  for (std::size_t i = 1; i < rows.size(); ++i) labels.insert(rows[i].fields.at(0));
  return labels;
}

bool cli_available() { return std::string(COWORD_CLI).size() > 0; }

}  // namespace

TEST_CASE("version and help") {
  if (!cli_available()) return;
  auto v = run("--version");
  CHECK(v.code == 0);
  CHECK(coword::trim(v.out) == coword::kVersion);
  auto h = run("--help");
  CHECK(h.code == 0);
  for (const char* flag :
       {"--config", "--records", "--mapping", "--scheme-a", "--scheme-b", "--output", "--min-occ",
        "--windows", "--source", "--years", "--resolution", "--tolerance", "--svg-edge-floor",
        "--set"}) {
    CHECK(h.out.find(flag) != std::string::npos);
  }
  for (const char* sub : {"run", "ingest", "report", "normalize", "net", "cluster", "layout",
                          "export", "compare"}) {
    CHECK(h.out.find(std::string("  ") + sub + " ") != std::string::npos);
  }
  auto sub_help = run("net --help");
  CHECK(sub_help.code == 0);
  CHECK(sub_help.out.find("coword --help") != std::string::npos);
  auto bad = run("net --no-such-flag");
  CHECK(bad.code == 1);
  CHECK(run("").code == 1);
}

TEST_CASE("full run on the fixture matches the oracle counts") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-run");
  auto r = run("run " + inputs() + out_flag(dir));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.err.empty());
  for (const char* name :
       {"records.csv", "frequencies.csv", "coverage.csv", "unmapped.csv", "descriptors.csv",
        "distribution_a.csv", "distribution_b.csv", "crosstab.csv", "vertices.csv", "edges.csv",
        "metrics.csv", "clusters.clu", "clusters.csv", "layout.csv", "network.net", "map.svg",
        "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }

  auto rows = oracle::read_records(fixture("records.csv"));
  auto t = oracle::tally(rows, oracle::read_mapping(fixture("mapping.txt")), true);
  std::size_t occurrences = 0, retained = 0;
  std::set<std::string> kept;
  for (const auto& [d, f] : t.freq) {
    occurrences += f;
    if (f >= 5) kept.insert(d);
  }
  std::size_t kept_edges = 0;
  for (const auto& [pair, c] : t.pairs) {
    if (kept.count(pair.first) && kept.count(pair.second)) ++kept_edges;
  }
  retained = kept.size();

  auto m = manifest(dir);
  CHECK(m["version"] == coword::kVersion);
  const auto& st = m["stages"];
  CHECK(st["ingest"]["counts"]["records"] == rows.size());
  CHECK(st["normalize"]["counts"]["descriptors"] == t.freq.size());
  CHECK(st["normalize"]["counts"]["occurrences"] == occurrences);
  CHECK(st["normalize"]["counts"]["tokens_before_dedup"] == t.tokens);
  CHECK(st["normalize"]["counts"]["descriptors_retained"] == retained);
  CHECK(st["net"]["counts"]["vertices_before_threshold"] == t.freq.size());
  CHECK(st["net"]["counts"]["edges_before_threshold"] == t.pairs.size());
  CHECK(st["net"]["counts"]["vertices"] == retained);
  CHECK(st["net"]["counts"]["edges"] == kept_edges);
  CHECK(vertex_labels(dir / "vertices.csv") == kept);

  for (const char* input : {"records", "mapping", "scheme_a", "scheme_b"}) {
    CAPTURE(input);
    const auto& entry = m["inputs"][input];
    CHECK(entry["sha256"].get<std::string>().size() == 64);
  }
  auto digest_file = dir / "records.sha256";
  std::string cmd = "sha256sum " + shell_quote(fixture("records.csv")) + " >" +
                    shell_quote(digest_file.string());
  if (std::system(cmd.c_str()) == 0) {
    auto digest = coword::read_file(digest_file.string()).substr(0, 64);
    CHECK(m["inputs"]["records"]["sha256"] == digest);
  }

  auto clu = coword::read_file((dir / "clusters.clu").string());
  CHECK(static_cast<std::size_t>(std::count(clu.begin(), clu.end(), '\n')) == retained + 1);
}

TEST_CASE("empty records file fails in ingest") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-empty");
  auto records = dir / "records.csv";
  std::ofstream(records) << "id,source,year,title,class_a,class_b,keywords\n";
  auto r = run("run --records " + shell_quote(records.string()) + " --scheme-a " +
               shell_quote(data("scheme_a.txt")) + " --scheme-b " +
               shell_quote(data("scheme_b.txt")) + out_flag(dir / "out"));
  CHECK(r.code == 1);
  CHECK(r.err.find("ingest") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("malformed records name the file and line") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-malformed");
  auto records = dir / "records.csv";
  std::ofstream(records) << "id,source,year,title,class_a,class_b,keywords\n"
                         << "p1,BAD,2003,T,,,a; b\n"
                         << "p2,BAD,not-a-year,T,,,a\n";
  auto r = run("ingest --records " + shell_quote(records.string()) + " --scheme-a " +
               shell_quote(data("scheme_a.txt")) + " --scheme-b " +
               shell_quote(data("scheme_b.txt")) + out_flag(dir / "out"));
  CHECK(r.code == 1);
  CHECK(r.err.find("ingest") != std::string::npos);
  CHECK(r.err.find("records.csv:3") != std::string::npos);
}

TEST_CASE("two runs are byte-identical apart from timestamps") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-determinism");
  const std::string args = "run " + inputs() + out_flag(dir) + " --windows 2001-2006,2007-2012";
  REQUIRE(run(args).code == 0);
  auto first = snapshot(dir);
  REQUIRE(run(args).code == 0);
  auto second = snapshot(dir);
  REQUIRE(first.size() == second.size());
  for (const auto& [name, body] : first) {
    CAPTURE(name);
    if (name == "manifest.json") {
      auto a = nlohmann::json::parse(body);
      auto b = nlohmann::json::parse(second.at(name));
      for (auto* j : {&a, &b}) {
        j->erase("started_at");
        j->erase("finished_at");
      }
      CHECK(a == b);
    } else {
      CHECK(body == second.at(name));
    }
  }
}

TEST_CASE("stages run one at a time reproduce the full run") {
  if (!cli_available()) return;
  auto whole = testing::scratch_dir("cli-whole");
  auto parts = testing::scratch_dir("cli-parts");
  const std::string common = inputs() + " --windows 2001-2006,2007-2012 --min-occ 3";
  REQUIRE(run("run " + common + out_flag(whole)).code == 0);
  for (const char* stage : {"ingest", "report", "normalize", "net", "cluster", "layout", "export"}) {
    auto r = run(std::string(stage) + " " + common + out_flag(parts));
    REQUIRE_MESSAGE(r.code == 0, stage, r.err);
    CHECK(r.out.rfind(std::string(stage) + ":", 0) == 0);
  }
  REQUIRE(run("compare " + common + out_flag(parts) + " --a all.window1 --b all.window2").code ==
          0);

  auto a = snapshot(whole);
  auto b = snapshot(parts);
  std::set<std::string> names_a, names_b;
  for (const auto& [k, _] : a) names_a.insert(k);
  for (const auto& [k, _] : b) names_b.insert(k);
  CHECK(names_a == names_b);
  for (const auto& [name, body] : a) {
    CAPTURE(name);
    if (name == "manifest.json") continue;
    REQUIRE(b.count(name));
    CHECK(body == b.at(name));
  }
  CHECK(manifest(whole)["stages"] == manifest(parts)["stages"]);
}

TEST_CASE("raising the threshold keeps a subset of vertices") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-threshold");
  REQUIRE(run("ingest " + inputs() + out_flag(dir)).code == 0);
  REQUIRE(run("normalize " + inputs() + out_flag(dir)).code == 0);
  REQUIRE(run("net " + inputs() + out_flag(dir) + " --min-occ 1").code == 0);
  auto low = vertex_labels(dir / "vertices.csv");
  REQUIRE(run("net " + inputs() + out_flag(dir) + " --min-occ 5").code == 0);
  auto high = vertex_labels(dir / "vertices.csv");
  CHECK(high.size() < low.size());
  CHECK(std::includes(low.begin(), low.end(), high.begin(), high.end()));
}

TEST_CASE("report by period matches the spreadsheet oracle") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-report");
  const std::string common = inputs() + out_flag(dir) + " --windows 2001-2006,2007-2012";
  REQUIRE(run("ingest " + common).code == 0);
  auto r = run("report " + common + " --scheme a --by period");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto table = coword::csv::parse(r.out, "stdout");
  REQUIRE(table.size() >= 2);
  CHECK(table[0].fields == std::vector<std::string>{"label", "2001-2006_count",
                                                    "2001-2006_percent", "2007-2012_count",
                                                    "2007-2012_percent"});

  auto rows = oracle::read_records(fixture("records.csv"));
  std::vector<std::pair<int, int>> windows{{2001, 2006}, {2007, 2012}};
  std::vector<std::map<std::string, std::size_t>> counts;
  std::vector<std::size_t> totals;
  for (auto [lo, hi] : windows) {
    std::vector<oracle::Row> sel;
    for (const auto& row : rows) {
      if (row.year >= lo && row.year <= hi) sel.push_back(row);
    }
    counts.push_back(oracle::count_labels(sel, true));
    totals.push_back(sel.size());
  }
  auto scheme = testing::scheme_a();
  std::vector<std::string> expected_labels = scheme.labels;
  if (counts[0].count("(unclassified)") || counts[1].count("(unclassified)")) {
    expected_labels.push_back("(unclassified)");
  }
  REQUIRE(table.size() == expected_labels.size() + 1);
  for (std::size_t i = 0; i < expected_labels.size(); ++i) {
    const auto& f = table[i + 1].fields;
    CAPTURE(expected_labels[i]);
    CHECK(f[0] == expected_labels[i]);
    for (std::size_t w = 0; w < 2; ++w) {
      auto it = counts[w].find(expected_labels[i]);
      std::size_t c = it == counts[w].end() ? 0 : it->second;
      CHECK(f[1 + 2 * w] == std::to_string(c));
      CHECK(f[2 + 2 * w] == std::to_string(oracle::spreadsheet_percent(c, totals[w])));
    }
  }
  CHECK(fs::exists(dir / "distribution_a_by_period.csv"));
}

TEST_CASE("compare two source windows") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-compare");
  const std::string common =
      inputs() + out_flag(dir) + " --windows 2001-2006,2007-2012 --min-occ 2";
  for (const char* stage : {"ingest", "normalize", "net"}) {
    REQUIRE(run(std::string(stage) + " " + common).code == 0);
  }
  auto r = run("compare " + common + " --a bad.window1 --b bad.window2");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto path = dir / "compare_bad.window1_vs_bad.window2.csv";
  REQUIRE(fs::exists(path));
  auto table = coword::csv::parse(coword::read_file(path.string()), path.string());

  auto rows = oracle::read_records(fixture("records.csv"));
  auto omap = oracle::read_mapping(fixture("mapping.txt"));
  auto side = [&](int lo, int hi) {
    std::vector<oracle::Row> sel;
    for (const auto& row : rows) {
      if (row.source == "BAD" && row.year >= lo && row.year <= hi) sel.push_back(row);
    }
    auto t = oracle::tally(sel, omap, true);
    std::map<std::string, std::size_t> index;
    for (const auto& [d, f] : t.freq) {
      if (f >= 2) index.emplace(d, index.size());
    }
    std::vector<oracle::WEdge> edges;
    for (const auto& [pair, c] : t.pairs) {
      if (index.count(pair.first) && index.count(pair.second)) {
        edges.push_back({index[pair.first], index[pair.second], static_cast<double>(c)});
      }
    }
    return std::make_tuple(index.size(), edges.size(), oracle::hop_metrics(index.size(), edges));
  };
  auto [va, ea, ma] = side(2001, 2006);
  auto [vb, eb, mb] = side(2007, 2012);
  std::map<std::string, std::vector<std::string>> metric;
  for (const auto& row : table) {
    if (row.fields.at(0) == "metric") metric[row.fields.at(1)] = row.fields;
  }
  CHECK(table[0].fields[2] == "bad.window1");
  CHECK(table[0].fields[3] == "bad.window2");
  CHECK(metric["vertices"][2] == std::to_string(va));
  CHECK(metric["vertices"][3] == std::to_string(vb));
  CHECK(metric["edges"][2] == std::to_string(ea));
  CHECK(metric["edges"][3] == std::to_string(eb));
  CHECK(metric["components"][2] == std::to_string(ma.components));
  CHECK(metric["components"][3] == std::to_string(mb.components));
  CHECK(metric["density"][2] == coword::format_fixed(ma.density, 6));
  CHECK(metric["density"][3] == coword::format_fixed(mb.density, 6));

  auto missing = run("compare " + common + " --a bad.window1 --b bad.window9");
  CHECK(missing.code == 1);
  CHECK(missing.err.find("bad.window9") != std::string::npos);
}

TEST_CASE("missing artifacts are named") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-missing");
  auto r = run("cluster " + inputs() + out_flag(dir));
  CHECK(r.code == 1);
  CHECK(r.err.find("[cluster]") != std::string::npos);
  CHECK(r.err.find((dir / "vertices.csv").string()) != std::string::npos);
  auto n = run("normalize " + inputs() + out_flag(dir));
  CHECK(n.code == 1);
  CHECK(n.err.find("records.csv") != std::string::npos);
}

TEST_CASE("exit codes separate input from pipeline errors") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-codes");
  auto bad_input = run("run --records " + shell_quote((dir / "none.csv").string()) +
                       " --scheme-a " + shell_quote(data("scheme_a.txt")) + " --scheme-b " +
                       shell_quote(data("scheme_b.txt")) + out_flag(dir / "out"));
  CHECK(bad_input.code == 1);
  CHECK(bad_input.err.rfind("coword: error:", 0) == 0);

  auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  auto pipeline = run("run " + inputs() + out_flag(blocker / "out"));
  CHECK(pipeline.code == 2);
  CHECK(pipeline.err.rfind("coword: error:", 0) == 0);

  CHECK(run("run " + inputs() + out_flag(dir / "r") + " --resolution 0").code == 1);
  CHECK(run("run " + inputs() + out_flag(dir / "r") + " --set no_such_key=1").code == 1);
}

TEST_CASE("flags override the config file") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-config");
  auto config = dir / "coword.conf";
  std::ofstream(config) << "# test configuration\n"
                        << "records = " << fixture("records.csv") << "\n"
                        << "mapping = " << fixture("mapping.txt") << "\n"
                        << "scheme_a = " << data("scheme_a.txt") << "\n"
                        << "scheme_b = " << data("scheme_b.txt") << "\n"
                        << "output = out\n"
                        << "min_occurrences = 2\n"
                        << "resolution = 1.5\n";
  const std::string base = "--config " + shell_quote(config.string());
  REQUIRE(run("ingest " + base).code == 0);
  REQUIRE(run("normalize " + base).code == 0);
  auto from_file = run("net " + base);
  REQUIRE_MESSAGE(from_file.code == 0, from_file.err);
  auto m = manifest(dir / "out");
  CHECK(m["config"]["min_occurrences"] == "2");
  CHECK(m["config"]["resolution"] == "1.5");

  REQUIRE(run("net " + base + " --min-occ 4").code == 0);
  m = manifest(dir / "out");
  CHECK(m["config"]["min_occurrences"] == "4");
  CHECK(m["config"]["resolution"] == "1.5");

  REQUIRE(run("net " + base + " --set min_occurrences=3").code == 0);
  CHECK(manifest(dir / "out")["config"]["min_occurrences"] == "3");

  std::ofstream(dir / "broken.conf") << "min_occurrences = 2\nthis line is wrong\n";
  auto broken = run("net --config " + shell_quote((dir / "broken.conf").string()));
  CHECK(broken.code == 1);
  CHECK(broken.err.find("broken.conf:2") != std::string::npos);
}

TEST_CASE("query prints the incident edge table") {
  if (!cli_available()) return;
  auto dir = testing::scratch_dir("cli-query");
  REQUIRE(run("ingest " + inputs() + out_flag(dir)).code == 0);
  REQUIRE(run("normalize " + inputs() + out_flag(dir)).code == 0);
  auto r = run("query " + inputs() + out_flag(dir) + " --min-occ 1 --descriptor " +
               shell_quote("public libraries"));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.rfind("Keyword1\tKeyword2\tweight\n", 0) == 0);
  auto unknown = run("query " + inputs() + out_flag(dir) + " --descriptor nothing-like-this");
  CHECK(unknown.code == 1);
}
