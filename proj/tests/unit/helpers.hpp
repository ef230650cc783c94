#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mffu/netlist.hpp"
#include "mffu/ff_set.hpp"

namespace mffu::test {

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(MFFU_TEST_DATA) / name; }

inline Circuit load(const std::string& name) { return parse_bench(read_text(data_path(name))); }

inline NetId net(const Circuit& c, const std::string& name) { return c.find_net(name).value(); }
inline FfId ff(const Circuit& c, const std::string& name) { return c.find_flipflop(name).value(); }

inline FfSet ffs(const Circuit& c, std::initializer_list<const char*> names) {
  std::vector<FfId> ids;
  for (const auto* n : names) ids.push_back(ff(c, n));
  return FfSet(std::move(ids));
}

inline std::vector<std::string> names(const Circuit& c, const FfSet& set) {
  std::vector<std::string> out;
  for (auto f : set.members()) out.push_back(c.flipflop(f).name);
  return out;
}

inline FfSet ids(std::initializer_list<std::uint32_t> values) {
  std::vector<FfId> out;
  for (auto v : values) out.push_back(FfId{v});
  return FfSet(std::move(out));
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mffu_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mffu::test
