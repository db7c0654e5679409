#include "liouwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace liouwalk {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_csv(const std::string& path, const LatticeSpec& spec,
               const std::vector<double>& values) {
  require_finite(values, "csv field values");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
  out << spec.nx << "," << spec.ny << "," << spec.nt << "\n";
  for (double v : values) out << format_double(v) << "\n";
  if (!out) throw std::runtime_error("io: short write to " + path);
}

struct CsvContent {
  int nx = 0, ny = 0, nt = 0;
  std::vector<double> values;
};

CsvContent read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open " + path);
  CsvContent content;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("io: empty file " + path);
  char comma1 = 0, comma2 = 0;
  std::istringstream header(line);
  if (!(header >> content.nx >> comma1 >> content.ny >> comma2 >> content.nt) ||
      comma1 != ',' || comma2 != ',')
    throw std::runtime_error("io: malformed header in " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t used = 0;
    const double v = std::stod(line, &used);
    if (used == 0) throw std::runtime_error("io: malformed value in " + path);
    content.values.push_back(v);
  }
  return content;
}

nlohmann::json spec_json(const LatticeSpec& spec) {
  return {{"nx", spec.nx}, {"ny", spec.ny}, {"a", spec.a},
          {"nt", spec.nt}, {"dt", spec.dt}, {"bc", "periodic"}};
}

LatticeSpec spec_from_json(const nlohmann::json& j) {
  return LatticeSpec(j.at("nx").get<int>(), j.at("ny").get<int>(), j.at("a").get<double>(),
                     j.at("nt").get<int>(), j.at("dt").get<double>());
}

void write_json(const std::string& path, const LatticeSpec& spec, const char* kind,
                const std::vector<double>& values) {
  require_finite(values, "json field values");
  nlohmann::json j{{"spec", spec_json(spec)}, {"kind", kind}, {"values", values}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path, const char* kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("kind").get<std::string>() != kind)
    throw std::runtime_error("io: field kind mismatch in " + path);
  return j;
}

}  // namespace

void write_scalar_csv(const std::string& path, const ScalarField& f) {
  write_csv(path, f.spec, f.values);
}
void write_spacetime_csv(const std::string& path, const SpaceTimeField& f) {
  write_csv(path, f.spec, f.values);
}
void write_vector_csv(const std::string& path, const VectorField& f) {
  write_csv(path, f.spec, f.values);
}

ScalarField read_scalar_csv(const std::string& path) {
  const CsvContent c = read_csv(path);
  return ScalarField(LatticeSpec(c.nx, c.ny, 1.0, c.nt), c.values);
}

SpaceTimeField read_spacetime_csv(const std::string& path) {
  const CsvContent c = read_csv(path);
  return SpaceTimeField(LatticeSpec(c.nx, c.ny, 1.0, c.nt), c.values);
}

VectorField read_vector_csv(const std::string& path) {
  const CsvContent c = read_csv(path);
  return VectorField(LatticeSpec(c.nx, c.ny, 1.0, c.nt), c.values);
}

void write_scalar_json(const std::string& path, const ScalarField& f) {
  write_json(path, f.spec, "scalar", f.values);
}
void write_spacetime_json(const std::string& path, const SpaceTimeField& f) {
  write_json(path, f.spec, "spacetime", f.values);
}
void write_vector_json(const std::string& path, const VectorField& f) {
  write_json(path, f.spec, "vector", f.values);
}

ScalarField read_scalar_json(const std::string& path) {
  const nlohmann::json j = read_json(path, "scalar");
  return ScalarField(spec_from_json(j.at("spec")), j.at("values").get<std::vector<double>>());
}

SpaceTimeField read_spacetime_json(const std::string& path) {
  const nlohmann::json j = read_json(path, "spacetime");
  return SpaceTimeField(spec_from_json(j.at("spec")), j.at("values").get<std::vector<double>>());
}

VectorField read_vector_json(const std::string& path) {
  const nlohmann::json j = read_json(path, "vector");
  return VectorField(spec_from_json(j.at("spec")), j.at("values").get<std::vector<double>>());
}

}  // namespace liouwalk
