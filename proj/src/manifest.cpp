#include "vmclab/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "vmclab/grid.hpp"

namespace vmclab {

using nlohmann::json;

std::string RunManifest::to_json() const {
  json j{{"command", command}, {"params", params},   {"inputs", inputs},
         {"outputs", outputs}, {"seed", seed},       {"version", version},
         {"wall_ms", wall_ms}};
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  json j = json::parse(text);
  RunManifest m;
  m.command = j.at("command");
  m.params = j.at("params").get<std::map<std::string, std::string>>();
  m.inputs = j.at("inputs").get<std::vector<std::string>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.seed = j.at("seed");
  m.version = j.at("version");
  m.wall_ms = j.at("wall_ms");
  return m;
}

void RunManifest::save(const std::string& dir) const {
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw ConfigError("cannot write manifest in " + dir);
  out << to_json() << "\n";
}

RunManifest RunManifest::load(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) throw ConfigError("missing manifest in " + dir);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace vmclab
