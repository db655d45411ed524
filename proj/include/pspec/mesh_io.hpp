#pragma once

#include "pspec/mesh.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pspec {

// ASCII OFF. Triangle meshes use the plain format. Segment meshes add a
// "DIM 1" line after the header, list two coordinates per vertex and write
// cells as "2 i j".

void write_off(std::ostream& os, const Mesh& mesh);
Mesh read_off(std::istream& is);

void save_off(const std::string& path, const Mesh& mesh);
Mesh load_off(const std::string& path);

/// One value per vertex: header "vertex,value" then "index,value" rows.
void write_field_csv(std::ostream& os, std::span<const double> values);
std::vector<double> read_field_csv(std::istream& is);

}  // namespace pspec
