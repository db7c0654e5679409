#pragma once

#include <string>

#include "liouwalk/lattice.hpp"

namespace liouwalk {

// Flat CSV: first line "nx,ny,nt", then one value per line in index order.
// Values are printed with 17 significant digits so the round-trip is
// bit-exact. The CSV does not carry a or dt; the JSON envelope does.
void write_scalar_csv(const std::string& path, const ScalarField& f);
void write_spacetime_csv(const std::string& path, const SpaceTimeField& f);
void write_vector_csv(const std::string& path, const VectorField& f);

ScalarField read_scalar_csv(const std::string& path);
SpaceTimeField read_spacetime_csv(const std::string& path);
VectorField read_vector_csv(const std::string& path);

// JSON envelope {"spec": {...}, "kind": "...", "values": [...]}.
void write_scalar_json(const std::string& path, const ScalarField& f);
void write_spacetime_json(const std::string& path, const SpaceTimeField& f);
void write_vector_json(const std::string& path, const VectorField& f);

ScalarField read_scalar_json(const std::string& path);
SpaceTimeField read_spacetime_json(const std::string& path);
VectorField read_vector_json(const std::string& path);

std::string format_double(double v);  // shortest 17-significant-digit form

}  // namespace liouwalk
