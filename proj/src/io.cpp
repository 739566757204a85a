#include "vmclab/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vmclab {

namespace {

using nlohmann::json;

json domain_to_json(const GridDomain& d) {
  return json{{"n", d.n},
              {"counts", {d.counts[0], d.counts[1], d.counts[2]}},
              {"h", d.h},
              {"origin", {d.origin[0], d.origin[1], d.origin[2]}}};
}

GridDomain domain_from_json(const json& j) {
  Idx3 counts{j.at("counts")[0], j.at("counts")[1], j.at("counts")[2]};
  Vec3 origin{j.at("origin")[0], j.at("origin")[1], j.at("origin")[2]};
  return GridDomain::make(j.at("n"), counts, j.at("h"), origin);
}

void write_sidecar(const std::string& path, const GridDomain& d, const std::string& type,
                   const std::string& unit = "") {
  json j = domain_to_json(d);
  j["type"] = type;
  if (!unit.empty()) j["unit"] = unit;
  std::ofstream out(path + ".json");
  if (!out) throw ConfigError("cannot write sidecar " + path + ".json");
  out << j.dump(2) << "\n";
}

json read_sidecar(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw ConfigError("missing sidecar " + path + ".json");
  json j;
  in >> j;
  return j;
}

}  // namespace

void save_mask(const BinaryMask& m, const std::string& path) {
  const int width = m.dom.counts[0];
  const std::int64_t height = std::int64_t(m.dom.counts[1]) * m.dom.counts[2];
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write mask file " + path);
  out << "P4\n" << width << " " << height << "\n";
  const int row_bytes = (width + 7) / 8;
  std::vector<std::uint8_t> row(row_bytes);
  for (std::int64_t r = 0; r < height; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int i = 0; i < width; ++i)
      if (m.bits[r * width + i]) row[i / 8] |= std::uint8_t(0x80 >> (i % 8));
    out.write(reinterpret_cast<const char*>(row.data()), row_bytes);
  }
  write_sidecar(path, m.dom, "mask");
}

BinaryMask load_mask(const std::string& path) {
  GridDomain d = domain_from_json(read_sidecar(path));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read mask file " + path);
  std::string magic;
  in >> magic;
  if (magic != "P4") throw ConfigError(path + ": not a NetPBM P4 bitmap");
  std::int64_t width = 0, height = 0;
  in >> width >> height;
  in.get();  // single whitespace after the header
  if (width != d.counts[0] || height != std::int64_t(d.counts[1]) * d.counts[2])
    throw ConfigError(path + ": bitmap size disagrees with sidecar counts");
  BinaryMask m(d);
  const int row_bytes = int((width + 7) / 8);
  std::vector<char> row(row_bytes);
  for (std::int64_t r = 0; r < height; ++r) {
    in.read(row.data(), row_bytes);
    if (!in) throw ConfigError(path + ": truncated bitmap data");
    for (int i = 0; i < width; ++i)
      m.bits[r * width + i] = (row[i / 8] >> (7 - i % 8)) & 1;
  }
  return m;
}

void save_field(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write field file " + path);
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            std::streamsize(f.values.size() * sizeof(double)));
  write_sidecar(path, f.dom, "field", f.unit);
}

ScalarField load_field(const std::string& path) {
  nlohmann::json j = read_sidecar(path);
  GridDomain d = domain_from_json(j);
  ScalarField f(d);
  if (j.contains("unit")) f.unit = j["unit"];
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read field file " + path);
  in.read(reinterpret_cast<char*>(f.values.data()),
          std::streamsize(f.values.size() * sizeof(double)));
  if (!in) throw ConfigError(path + ": truncated field data");
  return f;
}

namespace {

void csv_header(std::ostream& out, const GridDomain& d, const char* value_name) {
  out << (d.n == 2 ? "x,y," : "x,y,z,") << value_name << "\n";
}

template <class Get>
void dump_csv(const GridDomain& d, const std::string& path, const char* value_name,
              Get get) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write csv " + path);
  out.precision(17);
  csv_header(out, d, value_name);
  for (std::int64_t i = 0; i < d.cell_count(); ++i) {
    Vec3 c = d.center(i);
    out << c[0] << "," << c[1];
    if (d.n == 3) out << "," << c[2];
    out << "," << get(i) << "\n";
  }
}

}  // namespace

void save_field_csv(const ScalarField& f, const std::string& path) {
  dump_csv(f.dom, path, "value", [&](std::int64_t i) { return f.values[i]; });
}

void save_mask_csv(const BinaryMask& m, const std::string& path) {
  dump_csv(m.dom, path, "inside", [&](std::int64_t i) { return int(m.bits[i]); });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace vmclab
