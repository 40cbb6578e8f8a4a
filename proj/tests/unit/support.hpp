#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "coword/corpus.hpp"

namespace testing {

inline std::string fixture(const std::string& name) {
  return std::string(COWORD_FIXTURE_DIR) + "/" + name;
}
inline std::string data(const std::string& name) {
  return std::string(COWORD_DATA_DIR) + "/" + name;
}

inline coword::ClassScheme scheme_a() { return coword::load_scheme(data("scheme_a.txt"), "A"); }
inline coword::ClassScheme scheme_b() { return coword::load_scheme(data("scheme_b.txt"), "B"); }

inline coword::RecordSet fixture_records() {
  return coword::parse_records(fixture("records.csv"), scheme_a(), scheme_b());
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("coword-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
