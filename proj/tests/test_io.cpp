#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "liouwalk/io.hpp"
#include "liouwalk/lattice.hpp"

using namespace liouwalk;

namespace {

const std::vector<double> kAwkward = {1.0 / 3.0, -0.0, 1e-300, 6.02214076e23,
                                      -1.5e308,  0.1,  12345.678901234567};

std::string tmp_path(const char* name) {
  return std::string("io_test_") + name;
}

std::vector<double> fill(size_t n) {
  std::vector<double> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = kAwkward[i % kAwkward.size()] * (1.0 + 1e-13 * i);
  return v;
}

}  // namespace

TEST_CASE("formatted doubles round-trip through text exactly") {
  for (const double v : kAwkward) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("scalar fields round-trip bit for bit through csv and json") {
  const LatticeSpec spec(5, 3, 0.25);
  const ScalarField f(spec, fill(static_cast<size_t>(spec.sites())));

  write_scalar_csv(tmp_path("s.csv"), f);
  const ScalarField back_csv = read_scalar_csv(tmp_path("s.csv"));
  CHECK(back_csv.values == f.values);
  CHECK(back_csv.spec.nx == 5);
  CHECK(back_csv.spec.ny == 3);

  write_scalar_json(tmp_path("s.json"), f);
  const ScalarField back_json = read_scalar_json(tmp_path("s.json"));
  CHECK(back_json.values == f.values);
  CHECK(back_json.spec == spec);  // json carries spacing and step
  std::remove(tmp_path("s.csv").c_str());
  std::remove(tmp_path("s.json").c_str());
}

TEST_CASE("space-time fields round-trip bit for bit") {
  const LatticeSpec spec(3, 4, 0.5, 6, 0.05);
  const SpaceTimeField f(spec, fill(static_cast<size_t>(spec.spacetime_points())));

  write_spacetime_csv(tmp_path("st.csv"), f);
  const SpaceTimeField back_csv = read_spacetime_csv(tmp_path("st.csv"));
  CHECK(back_csv.values == f.values);
  CHECK(back_csv.spec.nt == 6);

  write_spacetime_json(tmp_path("st.json"), f);
  const SpaceTimeField back_json = read_spacetime_json(tmp_path("st.json"));
  CHECK(back_json.values == f.values);
  CHECK(back_json.spec == spec);
  std::remove(tmp_path("st.csv").c_str());
  std::remove(tmp_path("st.json").c_str());
}

TEST_CASE("vector fields round-trip bit for bit") {
  const LatticeSpec spec(4, 4, 2.0);
  const VectorField f(spec, fill(static_cast<size_t>(2 * spec.sites())));

  write_vector_csv(tmp_path("v.csv"), f);
  const VectorField back_csv = read_vector_csv(tmp_path("v.csv"));
  CHECK(back_csv.values == f.values);

  write_vector_json(tmp_path("v.json"), f);
  const VectorField back_json = read_vector_json(tmp_path("v.json"));
  CHECK(back_json.values == f.values);
  CHECK(back_json.spec == spec);
  std::remove(tmp_path("v.csv").c_str());
  std::remove(tmp_path("v.json").c_str());
}

TEST_CASE("csv writing is deterministic byte for byte") {
  const LatticeSpec spec(3, 3, 1.0);
  const ScalarField f(spec, fill(static_cast<size_t>(spec.sites())));
  write_scalar_csv(tmp_path("d1.csv"), f);
  write_scalar_csv(tmp_path("d2.csv"), f);
  std::ifstream a(tmp_path("d1.csv")), b(tmp_path("d2.csv"));
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(sa.substr(0, 6) == "3,3,0\n");
  std::remove(tmp_path("d1.csv").c_str());
  std::remove(tmp_path("d2.csv").c_str());
}

TEST_CASE("readers reject malformed or mismatched files") {
  CHECK_THROWS_AS(read_scalar_csv("does_not_exist.csv"), std::runtime_error);
  {
    std::ofstream out(tmp_path("bad.csv"));
    out << "5;3;0\n1.0\n";
  }
  CHECK_THROWS_AS(read_scalar_csv(tmp_path("bad.csv")), std::runtime_error);
  std::remove(tmp_path("bad.csv").c_str());

  const LatticeSpec spec(3, 3, 1.0);
  const ScalarField f(spec, fill(static_cast<size_t>(spec.sites())));
  write_scalar_json(tmp_path("kind.json"), f);
  CHECK_THROWS_AS(read_vector_json(tmp_path("kind.json")), std::runtime_error);
  std::remove(tmp_path("kind.json").c_str());

  // wrong value count for the declared lattice
  {
    std::ofstream out(tmp_path("short.csv"));
    out << "3,3,0\n1.0\n2.0\n";
  }
  CHECK_THROWS_AS(read_scalar_csv(tmp_path("short.csv")), std::invalid_argument);
  std::remove(tmp_path("short.csv").c_str());
}

TEST_CASE("writers refuse non-finite values") {
  const LatticeSpec spec(2, 2, 1.0);
  ScalarField f(spec);
  f.at(1) = std::nan("");
  CHECK_THROWS_AS(write_scalar_csv(tmp_path("nan.csv"), f), std::invalid_argument);
  CHECK_THROWS_AS(write_scalar_json(tmp_path("nan.json"), f), std::invalid_argument);
}
