#ifndef VMCLAB_MANIFEST_HPP
#define VMCLAB_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vmclab {

inline constexpr const char* kVersion = "0.1.0";

/// Record of one CLI run, serialized alongside every artifact directory.
/// Re-running the recorded command with the same seed reproduces the outputs
/// bit-exactly.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  double wall_ms = 0.0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
  void save(const std::string& dir) const;  // writes <dir>/manifest.json
  static RunManifest load(const std::string& dir);
};

}  // namespace vmclab

#endif
