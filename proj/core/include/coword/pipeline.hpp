#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "coword/clusters.hpp"
#include "coword/corpus.hpp"
#include "coword/error.hpp"
#include "coword/layout.hpp"
#include "coword/svg.hpp"

namespace coword {

struct RunConfig {
  std::string records;
  std::string mapping;  // empty: no table, every keyword passes through
  std::string scheme_a;
  std::string scheme_b;
  std::string output = "coword-out";
  std::size_t min_occurrences = 5;
  std::vector<PeriodWindow> windows;
  std::optional<std::string> source;
  PeriodWindow years{2001, 2012};
  bool passthrough = true;
  ClusterOptions clustering;
  std::vector<std::string> cluster_labels;
  LayoutParams layout;
  SvgOptions svg;

  // Applies one `key = value` setting. Throws InputError on an unknown key
  // or a value that does not parse.
  void set(std::string_view key, std::string_view value);

  // Every setting as (key, value) text, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;

  // Range checks plus existence of the input files the stages need.
  void validate() const;
};

std::span<const std::string_view> config_keys();

// `key = value` lines with '#' comments. Relative paths are resolved
// against the config file's directory.
void apply_config_file(RunConfig& config, const std::string& path);

// A stage failure; `input_error()` distinguishes bad inputs from internal
// pipeline failures.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message, bool input_error);

  const std::string& stage() const noexcept { return stage_; }
  bool input_error() const noexcept { return input_error_; }

 private:
  std::string stage_;
  bool input_error_;
};

using StageValue = std::variant<std::int64_t, double, bool, std::string>;

struct StageReport {
  std::string stage;
  std::vector<std::pair<std::string, StageValue>> counts;
  std::vector<std::string> files;  // relative to the output directory
};

struct ReportRequest {
  ClassSlot scheme = ClassSlot::a;
  enum class By { overall, period, source } by = By::overall;
};

StageReport run_ingest(const RunConfig& config);
StageReport run_report(const RunConfig& config);
StageReport run_report(const RunConfig& config, const ReportRequest& request);
StageReport run_normalize(const RunConfig& config);
StageReport run_net(const RunConfig& config);
StageReport run_cluster(const RunConfig& config);
StageReport run_layout(const RunConfig& config);
StageReport run_export(const RunConfig& config);
// `a` and `b` name sub-networks written by `net`, e.g. "all.window1".
StageReport run_compare(const RunConfig& config, const std::string& a, const std::string& b);

// Every stage in order, then manifest.json. Throws StageError.
std::vector<StageReport> run_pipeline(const RunConfig& config);

// Writes manifest.json. When `merge` is set, stages recorded by earlier
// runs are kept unless replaced.
void write_manifest(const RunConfig& config, std::span<const StageReport> stages,
                    const std::string& started_at, bool merge);

std::string sha256_file(const std::string& path);
std::string utc_timestamp();

}  // namespace coword
