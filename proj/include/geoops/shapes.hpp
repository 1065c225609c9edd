#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "geoops/core.hpp"

namespace geoops {

/// Ordered planar point loop; the last point connects back to the first.
/// Producers in this library orient loops counter-clockwise.
struct ClosedProfile2D {
  std::vector<Vec2> points;
  bool closed = true;

  std::size_t size() const { return points.size(); }

  double signed_area() const {
    double sum = 0.0;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = points[i];
      const Vec2& b = points[(i + 1) % n];
      sum += a.x * b.y - b.x * a.y;
    }
    return 0.5 * sum;
  }

  double perimeter() const {
    double sum = 0.0;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) sum += (points[(i + 1) % n] - points[i]).norm();
    return sum;
  }

  bool is_ccw() const { return signed_area() > 0.0; }

  void reverse_orientation() { std::reverse(points.begin(), points.end()); }

  /// Reorders so signed area is positive; no-op for CCW input.
  void normalize_ccw() {
    if (!is_ccw()) reverse_orientation();
  }
};

/// Eleven dimensionless design parameters, each raw value in [0, 1].
struct AirfoilParams {
  std::array<double, 11> p{};

  static AirfoilParams uniform(double value) {
    AirfoilParams out;
    out.p.fill(value);
    return out;
  }
};

/// Affine [0,1] -> physical ranges for the airfoil construction. One
/// versioned table so generated datasets stay reproducible across releases.
struct AirfoilRangeTable {
  int version = 1;
  // {lo, hi} per parameter, chord units (angles in radians).
  std::array<std::array<double, 2>, 11> ranges{{
      {0.02, 0.10},                       // 0: leading-edge handle length
      {0.25, 0.55},                       // 1: upper crest x
      {-0.02, 0.18},                      // 2: upper crest y
      {0.10, 0.45},                       // 3: upper crest flatness
      {0.25, 0.55},                       // 4: lower crest x
      {-0.02, 0.18},                      // 5: lower crest depth (y = -depth)
      {0.10, 0.45},                       // 6: lower crest flatness
      {2.0 * kPi / 180.0, 30.0 * kPi / 180.0},  // 7: TE upper tangent angle
      {2.0 * kPi / 180.0, 30.0 * kPi / 180.0},  // 8: TE lower tangent angle
      {0.0005, 0.005},                    // 9: TE half-thickness
      {-0.03, 0.03},                      // 10: TE camber offset
  }};

  double map(int i, double raw) const {
    return ranges[i][0] + (ranges[i][1] - ranges[i][0]) * raw;
  }
};

inline const AirfoilRangeTable& airfoil_ranges() {
  static const AirfoilRangeTable table;
  return table;
}

namespace detail {

struct CubicBezier {
  Vec2 p0, p1, p2, p3;

  Vec2 eval(double t) const {
    // De Casteljau; negating all control-point y's negates the result
    // bit-exactly, which the mirror-symmetry guarantee relies on.
    const Vec2 a = p0 + t * (p1 - p0);
    const Vec2 b = p1 + t * (p2 - p1);
    const Vec2 c = p2 + t * (p3 - p2);
    const Vec2 d = a + t * (b - a);
    const Vec2 e = b + t * (c - b);
    return d + t * (e - d);
  }

  /// Solves eval(t).x == x for monotone-in-x segments.
  double solve_x(double x) const {
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (eval(mid).x < x)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
};

// One side of the airfoil: LE -> crest -> TE, tangent-continuous.
struct AirfoilSide {
  CubicBezier front;  // leading edge to crest
  CubicBezier back;   // crest to trailing edge
  double crest_x;

  double y_at(double x) const {
    const CubicBezier& seg = (x <= crest_x) ? front : back;
    return seg.eval(seg.solve_x(x)).y;
  }
};

inline AirfoilSide make_airfoil_side(double le_handle, double crest_x, double crest_y,
                                     double flatness, double te_angle, double te_y,
                                     double side_sign) {
  // side_sign = +1 for the upper surface, -1 for the lower. The leading edge
  // carries a shared vertical tangent; crests carry horizontal tangents.
  AirfoilSide side;
  side.crest_x = crest_x;
  side.front.p0 = {0.0, 0.0};
  side.front.p1 = {0.0, side_sign * le_handle};
  side.front.p2 = {crest_x - flatness * crest_x, crest_y};
  side.front.p3 = {crest_x, crest_y};

  const double te_handle = 0.3 * (1.0 - crest_x);
  side.back.p0 = {crest_x, crest_y};
  side.back.p1 = {crest_x + flatness * (1.0 - crest_x), crest_y};
  side.back.p3 = {1.0, te_y};
  side.back.p2 = {1.0 - te_handle * std::cos(te_angle),
                  te_y + side_sign * te_handle * std::sin(te_angle)};
  return side;
}

}  // namespace detail

/// Builds a closed airfoil profile from four cubic Bezier segments, sampled
/// with cosine spacing (n_points/2 per side, concentrated at the chord ends)
/// and chord-normalised so min x = 0 and max x = 1. Point order follows the
/// Selig convention: TE -> upper surface -> LE -> lower surface, CCW.
inline ClosedProfile2D generate_airfoil(const AirfoilParams& params, std::size_t n_points = 192) {
  for (double v : params.p) {
    if (!(v >= 0.0 && v <= 1.0))
      throw GeoError(ErrorCode::PARAM_OUT_OF_RANGE, "airfoil parameter outside [0,1]");
  }
  if (n_points < 32 || n_points % 2 != 0)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "n_points must be even and >= 32");

  const AirfoilRangeTable& tbl = airfoil_ranges();
  const double le_handle = tbl.map(0, params.p[0]);
  const double upper_x = tbl.map(1, params.p[1]);
  const double upper_y = tbl.map(2, params.p[2]);
  const double upper_flat = tbl.map(3, params.p[3]);
  const double lower_x = tbl.map(4, params.p[4]);
  const double lower_depth = tbl.map(5, params.p[5]);
  const double lower_flat = tbl.map(6, params.p[6]);
  const double te_angle_up = tbl.map(7, params.p[7]);
  const double te_angle_lo = tbl.map(8, params.p[8]);
  const double te_half_gap = tbl.map(9, params.p[9]);
  const double te_camber = tbl.map(10, params.p[10]);

  const detail::AirfoilSide upper = detail::make_airfoil_side(
      le_handle, upper_x, upper_y, upper_flat, te_angle_up, te_camber + te_half_gap, +1.0);
  const detail::AirfoilSide lower = detail::make_airfoil_side(
      le_handle, lower_x, -lower_depth, lower_flat, te_angle_lo, te_camber - te_half_gap, -1.0);

  const std::size_t m = n_points / 2;
  std::vector<double> grid(m);
  for (std::size_t k = 0; k < m; ++k)
    grid[k] = 0.5 * (1.0 - std::cos(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(m)));

  ClosedProfile2D profile;
  profile.points.reserve(n_points);
  for (std::size_t k = m; k-- > 0;) profile.points.emplace_back(grid[k], upper.y_at(grid[k]));
  for (std::size_t k = 0; k < m; ++k) profile.points.emplace_back(grid[k], lower.y_at(grid[k]));

  // Chord normalisation: uniform scale, x shifted so the chord spans [0,1].
  const double x_min = grid.front();
  const double x_max = grid.back();
  const double scale = 1.0 / (x_max - x_min);
  for (Vec2& pt : profile.points) {
    pt.x = (pt.x - x_min) * scale;
    pt.y = pt.y * scale;
  }
  return profile;
}

/// Indexed triangle surface.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  /// Throws INVALID_ARGUMENT on out-of-range indices or repeated vertices
  /// within a face (type invariants).
  void validate_indices() const {
    const int n = static_cast<int>(vertices.size());
    for (const auto& f : faces) {
      for (int idx : f)
        if (idx < 0 || idx >= n)
          throw GeoError(ErrorCode::INVALID_ARGUMENT, "face index out of range");
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
        throw GeoError(ErrorCode::INVALID_ARGUMENT, "face repeats a vertex");
    }
  }

  double face_area(std::size_t f) const {
    const Vec3& a = vertices[faces[f][0]];
    const Vec3& b = vertices[faces[f][1]];
    const Vec3& c = vertices[faces[f][2]];
    return 0.5 * (b - a).cross(c - a).norm();
  }

  /// Divergence-theorem signed volume; positive for outward orientation.
  double signed_volume() const {
    double sum = 0.0;
    for (const auto& f : faces) {
      const Vec3& a = vertices[f[0]];
      const Vec3& b = vertices[f[1]];
      const Vec3& c = vertices[f[2]];
      sum += a.dot(b.cross(c));
    }
    return sum / 6.0;
  }

  std::pair<Vec3, Vec3> bounds() const {
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const Vec3& v : vertices) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      lo.z = std::min(lo.z, v.z);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
      hi.z = std::max(hi.z, v.z);
    }
    return {lo, hi};
  }

  long euler_characteristic() const {
    std::unordered_map<std::uint64_t, int> edges;
    edges.reserve(faces.size() * 3);
    for (const auto& f : faces) {
      for (int e = 0; e < 3; ++e) {
        const std::uint64_t a = static_cast<std::uint64_t>(std::min(f[e], f[(e + 1) % 3]));
        const std::uint64_t b = static_cast<std::uint64_t>(std::max(f[e], f[(e + 1) % 3]));
        edges[(a << 32) | b] = 1;
      }
    }
    // Count only vertices referenced by faces.
    std::vector<char> used(vertices.size(), 0);
    for (const auto& f : faces)
      for (int idx : f) used[static_cast<std::size_t>(idx)] = 1;
    long v_count = 0;
    for (char u : used) v_count += u;
    return v_count - static_cast<long>(edges.size()) + static_cast<long>(faces.size());
  }
};

enum class DefectCode {
  SELF_INTERSECT,
  OPEN_EDGE,
  NON_MANIFOLD_EDGE,
  INVERTED_ORIENTATION,
  DEGENERATE_FACE,
};

inline const char* to_string(DefectCode code) {
  switch (code) {
    case DefectCode::SELF_INTERSECT: return "SELF_INTERSECT";
    case DefectCode::OPEN_EDGE: return "OPEN_EDGE";
    case DefectCode::NON_MANIFOLD_EDGE: return "NON_MANIFOLD_EDGE";
    case DefectCode::INVERTED_ORIENTATION: return "INVERTED_ORIENTATION";
    case DefectCode::DEGENERATE_FACE: return "DEGENERATE_FACE";
  }
  return "UNKNOWN";
}

struct ValidityVerdict {
  bool valid = true;
  std::vector<DefectCode> reasons;

  static ValidityVerdict ok() { return {}; }
  static ValidityVerdict failed(std::vector<DefectCode> reasons_) {
    return {reasons_.empty(), std::move(reasons_)};
  }

  bool has(DefectCode code) const {
    return std::find(reasons.begin(), reasons.end(), code) != reasons.end();
  }
};

namespace detail {

inline constexpr double kCollinearTol = 1e-12;

inline bool on_segment_bbox(const Vec2& p, const Vec2& a, const Vec2& b) {
  return std::min(a.x, b.x) - kCollinearTol <= p.x && p.x <= std::max(a.x, b.x) + kCollinearTol &&
         std::min(a.y, b.y) - kCollinearTol <= p.y && p.y <= std::max(a.y, b.y) + kCollinearTol;
}

/// Segment intersection including improper (touching/collinear) contacts.
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = (d - c).cross(a - c);
  const double d2 = (d - c).cross(b - c);
  const double d3 = (b - a).cross(c - a);
  const double d4 = (b - a).cross(d - a);
  if (((d1 > kCollinearTol && d2 < -kCollinearTol) || (d1 < -kCollinearTol && d2 > kCollinearTol)) &&
      ((d3 > kCollinearTol && d4 < -kCollinearTol) || (d3 < -kCollinearTol && d4 > kCollinearTol)))
    return true;
  if (std::abs(d1) <= kCollinearTol && on_segment_bbox(a, c, d)) return true;
  if (std::abs(d2) <= kCollinearTol && on_segment_bbox(b, c, d)) return true;
  if (std::abs(d3) <= kCollinearTol && on_segment_bbox(c, a, b)) return true;
  if (std::abs(d4) <= kCollinearTol && on_segment_bbox(d, a, b)) return true;
  return false;
}

inline bool edges_adjacent(std::size_t i, std::size_t j, std::size_t n) {
  const std::size_t diff = (i > j) ? i - j : j - i;
  return diff == 1 || diff == n - 1;
}

inline bool self_intersects_brute(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edges_adjacent(i, j, n)) continue;
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return true;
    }
  }
  return false;
}

/// x-interval sweep over edges sorted by min-x; same predicate, different
/// pair enumeration. Must agree with the brute-force path (tested).
inline bool self_intersects_sweep(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  struct Edge {
    double x_lo, x_hi;
    std::size_t index;
  };
  std::vector<Edge> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % n];
    edges[i] = {std::min(a.x, b.x), std::max(a.x, b.x), i};
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
    return l.x_lo < r.x_lo;
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edges[j].x_lo > edges[i].x_hi + kCollinearTol) break;
      const std::size_t ei = edges[i].index;
      const std::size_t ej = edges[j].index;
      if (edges_adjacent(ei, ej, n)) continue;
      if (segments_intersect(pts[ei], pts[(ei + 1) % n], pts[ej], pts[(ej + 1) % n])) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Simple-polygon test: SELF_INTERSECT iff two non-adjacent loop edges meet.
inline ValidityVerdict check_profile_validity(const ClosedProfile2D& profile) {
  if (profile.points.size() < 3)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "profile needs at least 3 points");
  const bool hit = (profile.points.size() <= 512)
                       ? detail::self_intersects_brute(profile.points)
                       : detail::self_intersects_sweep(profile.points);
  if (hit) return ValidityVerdict::failed({DefectCode::SELF_INTERSECT});
  return ValidityVerdict::ok();
}

/// Manifold/watertight test per edge incidence, plus degenerate-face and
/// global orientation checks.
inline ValidityVerdict check_mesh_validity(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) throw GeoError(ErrorCode::INVALID_ARGUMENT, "mesh has no faces");

  std::vector<DefectCode> reasons;
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(mesh.faces.size() * 3);
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t a = static_cast<std::uint64_t>(std::min(f[e], f[(e + 1) % 3]));
      const std::uint64_t b = static_cast<std::uint64_t>(std::max(f[e], f[(e + 1) % 3]));
      edge_count[(a << 32) | b] += 1;
    }
  }
  bool open = false, non_manifold = false;
  for (const auto& [key, count] : edge_count) {
    (void)key;
    if (count == 1) open = true;
    if (count > 2) non_manifold = true;
  }
  if (open) reasons.push_back(DefectCode::OPEN_EDGE);
  if (non_manifold) reasons.push_back(DefectCode::NON_MANIFOLD_EDGE);

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_area(f) < 1e-14) {
      reasons.push_back(DefectCode::DEGENERATE_FACE);
      break;
    }
  }

  const bool watertight = !open && !non_manifold;
  if (watertight && mesh.signed_volume() < 0.0)
    reasons.push_back(DefectCode::INVERTED_ORIENTATION);

  return ValidityVerdict::failed(std::move(reasons));
}

}  // namespace geoops
