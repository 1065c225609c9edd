#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "geoops/shapes.hpp"

namespace geoops {

enum class MeshFormat { OBJ, STL_ASCII, STL_BINARY };

namespace detail {

inline bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + token.size() && !token.empty();
}

/// Merges vertices lying within `tol` of each other. Quantised hash cells
/// with neighbour lookup so pairs straddling a cell boundary still merge.
class VertexMerger {
 public:
  explicit VertexMerger(double tol) : tol_(tol), inv_tol_(1.0 / tol) {}

  int add(const Vec3& v, std::vector<Vec3>& vertices) {
    const long long cx = static_cast<long long>(std::floor(v.x * inv_tol_));
    const long long cy = static_cast<long long>(std::floor(v.y * inv_tol_));
    const long long cz = static_cast<long long>(std::floor(v.z * inv_tol_));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(key(cx + dx, cy + dy, cz + dz));
          if (it == cells_.end()) continue;
          for (int idx : it->second)
            if ((vertices[idx] - v).norm() <= tol_) return idx;
        }
    vertices.push_back(v);
    const int idx = static_cast<int>(vertices.size()) - 1;
    cells_[key(cx, cy, cz)].push_back(idx);
    return idx;
  }

 private:
  static std::uint64_t key(long long x, long long y, long long z) {
    std::uint64_t h = 1469598103934665603ull;
    for (long long v : {x, y, z}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }

  double tol_;
  double inv_tol_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace detail

/// Selig-convention UIUC `.dat`: free-text name line, then x y rows ordered
/// TE -> upper -> LE -> lower -> TE. Result is closed, CCW, with a duplicated
/// endpoint row dropped.
inline std::pair<std::string, ClosedProfile2D> load_uiuc_dat(std::istream& in) {
  std::string name;
  if (!std::getline(in, name))
    throw GeoError(ErrorCode::PARSE_ERROR, "empty .dat stream", 1);
  while (!name.empty() && (name.back() == '\r' || name.back() == '\n')) name.pop_back();

  ClosedProfile2D profile;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok_x, tok_y, extra;
    if (!(ls >> tok_x)) continue;  // blank line
    double x = 0.0, y = 0.0;
    if (!(ls >> tok_y) || (ls >> extra) || !detail::parse_double(tok_x, x) ||
        !detail::parse_double(tok_y, y))
      throw GeoError(ErrorCode::PARSE_ERROR, "expected two numeric columns", line_no);
    profile.points.emplace_back(x, y);
  }
  if (profile.points.size() < 3)
    throw GeoError(ErrorCode::TOO_FEW_POINTS, "need at least 3 coordinate rows");

  if ((profile.points.front() - profile.points.back()).norm() <= 1e-12)
    profile.points.pop_back();
  if (profile.points.size() < 3)
    throw GeoError(ErrorCode::TOO_FEW_POINTS, "need at least 3 distinct points");
  profile.closed = true;
  profile.normalize_ccw();
  return {name, profile};
}

inline std::pair<std::string, ClosedProfile2D> load_uiuc_dat(const std::string& text) {
  std::istringstream in(text);
  return load_uiuc_dat(in);
}

inline void write_uiuc_dat(std::ostream& out, const std::string& name,
                           const ClosedProfile2D& profile) {
  out << name << "\n";
  for (const Vec2& p : profile.points)
    out << format_double(p.x) << " " << format_double(p.y) << "\n";
}

/// OBJ subset: `v x y z`, triangular `f` records (slash suffixes ignored),
/// `#` comments. Polygons with more than three vertices are rejected.
inline TriangleMesh load_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword) || keyword[0] == '#') continue;
    if (keyword == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw GeoError(ErrorCode::PARSE_ERROR, "malformed vertex record", line_no);
      mesh.vertices.push_back({x, y, z});
    } else if (keyword == "f") {
      std::vector<int> indices;
      std::string tok;
      while (ls >> tok) {
        const std::size_t slash = tok.find('/');
        int idx = 0;
        try {
          idx = std::stoi(tok.substr(0, slash));
        } catch (const std::exception&) {
          throw GeoError(ErrorCode::PARSE_ERROR, "malformed face index", line_no);
        }
        if (idx <= 0)
          throw GeoError(ErrorCode::PARSE_ERROR, "face indices must be positive", line_no);
        indices.push_back(idx - 1);
      }
      if (indices.size() > 3)
        throw GeoError(ErrorCode::NON_TRIANGULAR_FACE,
                       "polygon with " + std::to_string(indices.size()) + " vertices", line_no);
      if (indices.size() != 3)
        throw GeoError(ErrorCode::PARSE_ERROR, "face needs 3 indices", line_no);
      mesh.faces.push_back({indices[0], indices[1], indices[2]});
    }
    // Other record types (vn, vt, o, g, ...) are skipped.
  }
  try {
    mesh.validate_indices();
  } catch (const GeoError& e) {
    throw GeoError(ErrorCode::PARSE_ERROR, e.what());
  }
  return mesh;
}

inline void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  for (const Vec3& v : mesh.vertices)
    out << "v " << format_double(v.x) << " " << format_double(v.y) << " "
        << format_double(v.z) << "\n";
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

inline constexpr double kStlMergeTol = 1e-9;

inline TriangleMesh load_stl_ascii(std::istream& in) {
  TriangleMesh mesh;
  detail::VertexMerger merger(kStlMergeTol);
  std::string tok;
  std::vector<int> facet;
  bool saw_solid = false;
  while (in >> tok) {
    if (tok == "solid") {
      saw_solid = true;
      std::string rest;
      std::getline(in, rest);  // discard the solid name
    } else if (tok == "vertex") {
      double x, y, z;
      if (!(in >> x >> y >> z))
        throw GeoError(ErrorCode::PARSE_ERROR, "malformed STL vertex");
      facet.push_back(merger.add({x, y, z}, mesh.vertices));
    } else if (tok == "endfacet") {
      if (facet.size() != 3)
        throw GeoError(ErrorCode::PARSE_ERROR, "facet does not have exactly 3 vertices");
      mesh.faces.push_back({facet[0], facet[1], facet[2]});
      facet.clear();
    }
    // "facet", "normal", "outer", "loop", "endloop", "endsolid" need no action.
  }
  if (!saw_solid) throw GeoError(ErrorCode::PARSE_ERROR, "not an ASCII STL (no 'solid')");
  if (!facet.empty()) throw GeoError(ErrorCode::PARSE_ERROR, "unterminated facet");
  return mesh;
}

inline void write_stl_ascii(std::ostream& out, const TriangleMesh& mesh,
                            const std::string& name = "mesh") {
  out << "solid " << name << "\n";
  for (const auto& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len > 0.0) n = n / len;
    out << "  facet normal " << format_double(n.x) << " " << format_double(n.y)
        << " " << format_double(n.z) << "\n";
    out << "    outer loop\n";
    for (int idx : f) {
      const Vec3& v = mesh.vertices[idx];
      out << "      vertex " << format_double(v.x) << " " << format_double(v.y)
          << " " << format_double(v.z) << "\n";
    }
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid " << name << "\n";
}

inline TriangleMesh load_stl_binary(std::istream& in) {
  char header[80];
  in.read(header, 80);
  if (!in) throw GeoError(ErrorCode::PARSE_ERROR, "binary STL header truncated");
  std::uint32_t n_tris = 0;
  in.read(reinterpret_cast<char*>(&n_tris), 4);
  if (!in) throw GeoError(ErrorCode::PARSE_ERROR, "binary STL count truncated");

  TriangleMesh mesh;
  detail::VertexMerger merger(kStlMergeTol);
  for (std::uint32_t t = 0; t < n_tris; ++t) {
    char record[50];
    in.read(record, 50);
    if (!in) throw GeoError(ErrorCode::PARSE_ERROR, "binary STL record truncated");
    float values[12];
    std::memcpy(values, record, 48);  // normal and three vertices; attr ignored
    std::array<int, 3> face{};
    for (int v = 0; v < 3; ++v) {
      const Vec3 p{values[3 + 3 * v], values[4 + 3 * v], values[5 + 3 * v]};
      face[v] = merger.add(p, mesh.vertices);
    }
    mesh.faces.push_back(face);
  }
  return mesh;
}

inline void write_stl_binary(std::ostream& out, const TriangleMesh& mesh) {
  char header[80] = {0};
  std::snprintf(header, sizeof(header), "geoops binary stl");
  out.write(header, 80);
  const std::uint32_t n_tris = static_cast<std::uint32_t>(mesh.faces.size());
  out.write(reinterpret_cast<const char*>(&n_tris), 4);
  for (const auto& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len > 0.0) n = n / len;
    float values[12] = {
        static_cast<float>(n.x), static_cast<float>(n.y), static_cast<float>(n.z),
        static_cast<float>(a.x), static_cast<float>(a.y), static_cast<float>(a.z),
        static_cast<float>(b.x), static_cast<float>(b.y), static_cast<float>(b.z),
        static_cast<float>(c.x), static_cast<float>(c.y), static_cast<float>(c.z)};
    out.write(reinterpret_cast<const char*>(values), 48);
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
}

/// Loads a mesh file in the declared format. STL vertices within 1e-9 model
/// units are merged.
inline TriangleMesh load_mesh(const std::string& path, MeshFormat format) {
  const bool binary = format == MeshFormat::STL_BINARY;
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw GeoError(ErrorCode::IO_ERROR, "cannot open " + path);
  switch (format) {
    case MeshFormat::OBJ: return load_obj(in);
    case MeshFormat::STL_ASCII: return load_stl_ascii(in);
    case MeshFormat::STL_BINARY: return load_stl_binary(in);
  }
  throw GeoError(ErrorCode::INVALID_ARGUMENT, "unknown mesh format");
}

inline void save_mesh(const std::string& path, const TriangleMesh& mesh, MeshFormat format) {
  const bool binary = format == MeshFormat::STL_BINARY;
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw GeoError(ErrorCode::IO_ERROR, "cannot write " + path);
  switch (format) {
    case MeshFormat::OBJ: write_obj(out, mesh); return;
    case MeshFormat::STL_ASCII: write_stl_ascii(out, mesh); return;
    case MeshFormat::STL_BINARY: write_stl_binary(out, mesh); return;
  }
}

}  // namespace geoops
