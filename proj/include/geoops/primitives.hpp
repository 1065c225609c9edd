#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "geoops/shapes.hpp"

namespace geoops {

/// Reference geometries with closed-form moments/curvature, used throughout
/// the test suites and handy for pipeline smoke runs. All meshes are
/// watertight and outward-oriented.

inline TriangleMesh tetrahedron_mesh() {
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  mesh.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return mesh;
}

inline TriangleMesh unit_cube_mesh() {
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                   {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  mesh.faces = {
      {0, 2, 1}, {0, 3, 2},  // z = 0, normal -z
      {4, 5, 6}, {4, 6, 7},  // z = 1, normal +z
      {0, 1, 5}, {0, 5, 4},  // y = 0, normal -y
      {2, 3, 7}, {2, 7, 6},  // y = 1, normal +y
      {0, 4, 7}, {0, 7, 3},  // x = 0, normal -x
      {1, 2, 6}, {1, 6, 5},  // x = 1, normal +x
  };
  return mesh;
}

inline TriangleMesh translated(TriangleMesh mesh, const Vec3& offset) {
  for (Vec3& v : mesh.vertices) v = v + offset;
  return mesh;
}

inline TriangleMesh scaled(TriangleMesh mesh, double factor) {
  for (Vec3& v : mesh.vertices) v = v * factor;
  return mesh;
}

/// Icosahedron refined by `level` midpoint subdivisions, vertices projected
/// onto the sphere of the given radius.
inline TriangleMesh icosphere_mesh(int level, double radius = 1.0, const Vec3& center = {0, 0, 0}) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                   {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                   {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (Vec3& v : mesh.vertices) v = v / v.norm();

  for (int iter = 0; iter < level; ++iter) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (mesh.vertices[a] + mesh.vertices[b]) * 0.5;
      m = m / m.norm();
      mesh.vertices.push_back(m);
      const int index = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, index);
      return index;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      refined.push_back({f[0], ab, ca});
      refined.push_back({f[1], bc, ab});
      refined.push_back({f[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(refined);
  }
  for (Vec3& v : mesh.vertices) v = v * radius + center;
  return mesh;
}

/// Torus around the z-axis: ring radius `ring`, tube radius `tube`.
inline TriangleMesh torus_mesh(double ring, double tube, int nu = 64, int nv = 32) {
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * kPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2.0 * kPi * j / nv;
      mesh.vertices.push_back({(ring + tube * std::cos(v)) * std::cos(u),
                               (ring + tube * std::cos(v)) * std::sin(u),
                               tube * std::sin(v)});
    }
  }
  auto at = [nv](int i, int j) { return i * nv + j; };
  for (int i = 0; i < nu; ++i) {
    const int i1 = (i + 1) % nu;
    for (int j = 0; j < nv; ++j) {
      const int j1 = (j + 1) % nv;
      mesh.faces.push_back({at(i, j), at(i1, j), at(i1, j1)});
      mesh.faces.push_back({at(i, j), at(i1, j1), at(i, j1)});
    }
  }
  return mesh;
}

/// Capped cylinder, axis along z from 0 to `height`, one side band so every
/// interior z-section cuts the same triangle strip.
inline TriangleMesh cylinder_mesh(double radius, double height, int nu = 64) {
  TriangleMesh mesh;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * kPi * i / nu;
    mesh.vertices.push_back({radius * std::cos(u), radius * std::sin(u), 0.0});
  }
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * kPi * i / nu;
    mesh.vertices.push_back({radius * std::cos(u), radius * std::sin(u), height});
  }
  const int bottom_center = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back({0.0, 0.0, 0.0});
  const int top_center = bottom_center + 1;
  mesh.vertices.push_back({0.0, 0.0, height});

  for (int i = 0; i < nu; ++i) {
    const int i1 = (i + 1) % nu;
    mesh.faces.push_back({i, i1, nu + i1});
    mesh.faces.push_back({i, nu + i1, nu + i});
    mesh.faces.push_back({bottom_center, i1, i});
    mesh.faces.push_back({top_center, nu + i, nu + i1});
  }
  return mesh;
}

/// Cone with apex on the z-axis at `height` and base disc at z = 0. Lateral
/// triangles all share the apex, so z-sections are scaled copies of the base
/// polygon (the separability the sectional-descriptor tests rely on).
inline TriangleMesh cone_mesh(double base_radius, double height, int nu = 64) {
  TriangleMesh mesh;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * kPi * i / nu;
    mesh.vertices.push_back({base_radius * std::cos(u), base_radius * std::sin(u), 0.0});
  }
  const int apex = nu;
  mesh.vertices.push_back({0.0, 0.0, height});
  const int base_center = nu + 1;
  mesh.vertices.push_back({0.0, 0.0, 0.0});
  for (int i = 0; i < nu; ++i) {
    const int i1 = (i + 1) % nu;
    mesh.faces.push_back({apex, i, i1});
    mesh.faces.push_back({base_center, i1, i});
  }
  return mesh;
}

/// Regular n-gon loop, CCW, starting at angle 0.
inline ClosedProfile2D regular_polygon_profile(std::size_t n, double radius = 1.0,
                                               const Vec2& center = {0, 0}) {
  ClosedProfile2D profile;
  profile.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    profile.points.emplace_back(center.x + radius * std::cos(a), center.y + radius * std::sin(a));
  }
  return profile;
}

}  // namespace geoops
