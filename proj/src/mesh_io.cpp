#include "pspec/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pspec {
namespace {

// Next line that is neither blank nor a comment.
bool next_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("OFF parse error: " + what);
}

}  // namespace

void write_off(std::ostream& os, const Mesh& mesh) {
  os << "OFF\n";
  const bool segments = mesh.dimension() == 1;
  if (segments) os << "DIM 1\n";
  os << mesh.vertex_count() << ' ' << mesh.cell_count() << " 0\n";
  os << std::setprecision(17);
  for (const Vec3& x : mesh.vertices()) {
    if (segments) {
      os << x.x() << ' ' << x.y() << '\n';
    } else {
      os << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
    }
  }
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    os << mesh.cell_size();
    for (int v : mesh.cell(c)) os << ' ' << v;
    os << '\n';
  }
}

Mesh read_off(std::istream& is) {
  std::string line;
  if (!next_line(is, line) || line.rfind("OFF", 0) != 0) fail("missing OFF header");

  if (!next_line(is, line)) fail("missing counts line");
  int dim = 2;
  if (line.rfind("DIM", 0) == 0) {
    std::istringstream ds(line.substr(3));
    if (!(ds >> dim) || (dim != 1 && dim != 2)) fail("bad DIM line");
    if (!next_line(is, line)) fail("missing counts line");
  }
  std::size_t nv = 0, nc = 0;
  {
    std::istringstream cs(line);
    if (!(cs >> nv >> nc)) fail("bad counts line");
  }

  std::vector<Vec3> verts(nv, Vec3::Zero());
  for (std::size_t v = 0; v < nv; ++v) {
    if (!next_line(is, line)) fail("truncated vertex list");
    std::istringstream vs(line);
    double a = 0, b = 0, c = 0;
    if (!(vs >> a >> b)) fail("bad vertex line " + std::to_string(v));
    if (dim == 2 && !(vs >> c)) fail("bad vertex line " + std::to_string(v));
    verts[v] = Vec3(a, b, c);
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 2>> segs;
  for (std::size_t k = 0; k < nc; ++k) {
    if (!next_line(is, line)) fail("truncated cell list");
    std::istringstream fs(line);
    int count = 0;
    if (!(fs >> count) || count != dim + 1) {
      fail("cell " + std::to_string(k) + " must have " + std::to_string(dim + 1) + " vertices");
    }
    if (dim == 2) {
      std::array<int, 3> t{};
      if (!(fs >> t[0] >> t[1] >> t[2])) fail("bad cell line " + std::to_string(k));
      tris.push_back(t);
    } else {
      std::array<int, 2> s{};
      if (!(fs >> s[0] >> s[1])) fail("bad cell line " + std::to_string(k));
      segs.push_back(s);
    }
  }
  return dim == 2 ? Mesh::from_triangles(std::move(verts), tris)
                  : Mesh::from_segments(std::move(verts), segs);
}

void save_off(const std::string& path, const Mesh& mesh) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_off(os, mesh);
  if (!os) throw std::runtime_error("write failed: " + path);
}

Mesh load_off(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_off(is);
}

void write_field_csv(std::ostream& os, std::span<const double> values) {
  os << "vertex,value\n" << std::setprecision(17);
  for (std::size_t v = 0; v < values.size(); ++v) os << v << ',' << values[v] << '\n';
}

std::vector<double> read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("vertex,value", 0) != 0) {
    throw std::runtime_error("field CSV: missing header");
  }
  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("field CSV: bad row");
    if (std::stoul(line.substr(0, comma)) != out.size()) {
      throw std::runtime_error("field CSV: rows out of order");
    }
    out.push_back(std::stod(line.substr(comma + 1)));
  }
  return out;
}

}  // namespace pspec
