#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "geoops/shapes.hpp"

namespace geoops {

/// Planar cross-sections of triangle meshes. Sections are taken against
/// axis-aligned planes; segments come out oriented so that the enclosed
/// section region lies on their left when viewed along the +axis direction
/// (CCW loops for outward-oriented watertight meshes).

struct SectionSegment {
  Vec3 a;
  Vec3 b;
};

namespace detail {

inline double axis_coord(const Vec3& v, int axis) {
  return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

/// In-plane 2D coordinates for a point on the section plane: the two axes
/// other than the cutting axis, ordered so (u, w, axis) stays right-handed.
inline Vec2 in_plane(const Vec3& v, int axis) {
  switch (axis) {
    case 0: return {v.y, v.z};
    case 1: return {v.z, v.x};
    default: return {v.x, v.y};
  }
}

}  // namespace detail

/// Oriented intersection segments of the mesh surface with the plane
/// axis-coordinate == c. Vertices exactly on the plane count as the positive
/// side, which keeps the segment set closed for watertight input.
inline std::vector<SectionSegment> section_segments(const TriangleMesh& mesh, int axis, double c) {
  std::vector<SectionSegment> segments;
  for (const auto& f : mesh.faces) {
    const Vec3 v[3] = {mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]};
    double d[3];
    bool positive[3];
    for (int i = 0; i < 3; ++i) {
      d[i] = detail::axis_coord(v[i], axis) - c;
      positive[i] = d[i] >= 0.0;
    }
    if (positive[0] == positive[1] && positive[1] == positive[2]) continue;

    Vec3 crossing[2];
    int n_cross = 0;
    for (int e = 0; e < 3 && n_cross < 2; ++e) {
      const int i = e, j = (e + 1) % 3;
      if (positive[i] == positive[j]) continue;
      const double t = d[i] / (d[i] - d[j]);
      crossing[n_cross++] = v[i] + t * (v[j] - v[i]);
    }
    if (n_cross != 2) continue;

    // Align with e_axis x N so section loops run CCW seen along +axis.
    const Vec3 normal = (v[1] - v[0]).cross(v[2] - v[0]);
    Vec3 dir;
    switch (axis) {
      case 0: dir = {0.0, -normal.z, normal.y}; break;
      case 1: dir = {normal.z, 0.0, -normal.x}; break;
      default: dir = {-normal.y, normal.x, 0.0}; break;
    }
    SectionSegment seg{crossing[0], crossing[1]};
    if ((seg.b - seg.a).dot(dir) < 0.0) std::swap(seg.a, seg.b);
    if ((seg.b - seg.a).squared_norm() == 0.0) continue;
    segments.push_back(seg);
  }
  return segments;
}

/// Signed area of the section region (holes subtract). Works directly on the
/// oriented segment soup: the shoelace integrand sums per edge, so no loop
/// chaining is needed.
inline double section_area(const TriangleMesh& mesh, int axis, double c) {
  double sum = 0.0;
  for (const SectionSegment& seg : section_segments(mesh, axis, c)) {
    const Vec2 a = detail::in_plane(seg.a, axis);
    const Vec2 b = detail::in_plane(seg.b, axis);
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * sum;
}

/// Chains oriented segments into closed loops, matching endpoints within
/// `tol`. Throws on dangling chains (non-watertight input).
inline std::vector<std::vector<Vec3>> chain_section_loops(
    const std::vector<SectionSegment>& segments, int axis, double tol = 1e-9) {
  auto cell_hash = [](long long qx, long long qy) {
    std::uint64_t h = 1469598103934665603ull;
    for (long long v : {qx, qy}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  };

  const double inv_tol = 1.0 / tol;
  auto cell_of = [&](const Vec2& p) {
    return std::pair<long long, long long>{static_cast<long long>(std::floor(p.x * inv_tol)),
                                           static_cast<long long>(std::floor(p.y * inv_tol))};
  };

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> start_cells;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto [qx, qy] = cell_of(detail::in_plane(segments[i].a, axis));
    start_cells[cell_hash(qx, qy)].push_back(i);
  }

  auto find_next = [&](const Vec2& at, const std::vector<char>& used) -> std::size_t {
    const auto [qx, qy] = cell_of(at);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = start_cells.find(cell_hash(qx + dx, qy + dy));
        if (it == start_cells.end()) continue;
        for (std::size_t idx : it->second) {
          if (used[idx]) continue;
          const Vec2 a = detail::in_plane(segments[idx].a, axis);
          if ((a - at).norm() <= tol) return idx;
        }
      }
    return segments.size();
  };

  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<Vec3>> loops;
  for (std::size_t seed = 0; seed < segments.size(); ++seed) {
    if (used[seed]) continue;
    std::vector<Vec3> loop;
    std::size_t current = seed;
    const Vec2 loop_start = detail::in_plane(segments[seed].a, axis);
    while (true) {
      used[current] = 1;
      loop.push_back(segments[current].a);
      const Vec2 end = detail::in_plane(segments[current].b, axis);
      if ((end - loop_start).norm() <= tol) break;  // loop closed
      const std::size_t next = find_next(end, used);
      if (next == segments.size())
        throw GeoError(ErrorCode::NOT_WATERTIGHT, "section chain does not close");
      current = next;
    }
    // Drop near-duplicate consecutive points left by vertex-touching cuts.
    std::vector<Vec3> cleaned;
    for (const Vec3& p : loop) {
      if (cleaned.empty() || (p - cleaned.back()).norm() > tol) cleaned.push_back(p);
    }
    if (cleaned.size() >= 2 && (cleaned.front() - cleaned.back()).norm() <= tol)
      cleaned.pop_back();
    if (cleaned.size() >= 3) loops.push_back(std::move(cleaned));
  }
  return loops;
}

}  // namespace geoops
