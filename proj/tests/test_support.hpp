#pragma once

#include "geoops/geoops.hpp"

namespace geoops::testing {

/// Star-shaped polygon with random radii: always a simple loop.
inline ClosedProfile2D random_star_polygon(Rng& rng, std::size_t n, double base_radius = 1.0,
                                           const Vec2& center = {0, 0}) {
  ClosedProfile2D profile;
  profile.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    const double radius = base_radius * (0.5 + rng.uniform01());
    profile.points.emplace_back(center.x + radius * std::cos(angle),
                                center.y + radius * std::sin(angle));
  }
  return profile;
}

/// Random point loop in the unit square; usually self-intersecting.
inline ClosedProfile2D random_point_loop(Rng& rng, std::size_t n) {
  ClosedProfile2D profile;
  profile.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    profile.points.emplace_back(rng.uniform01(), rng.uniform01());
  return profile;
}

inline ClosedProfile2D bowtie_profile() {
  ClosedProfile2D profile;
  profile.points = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  return profile;
}

inline ClosedProfile2D unit_square_profile() {
  ClosedProfile2D profile;
  profile.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return profile;
}

inline TriangleMesh open_tetrahedron_mesh() {
  TriangleMesh mesh = tetrahedron_mesh();
  mesh.faces.pop_back();
  return mesh;
}

/// AirfoilParams whose camber-controlling entries mirror the upper side.
inline AirfoilParams mirrored_airfoil_params(const AirfoilParams& base) {
  AirfoilParams params = base;
  params.p[4] = params.p[1];   // lower crest x = upper crest x
  params.p[5] = params.p[2];   // lower crest depth = upper crest height
  params.p[6] = params.p[3];   // lower flatness = upper flatness
  params.p[8] = params.p[7];   // TE lower angle = TE upper angle
  params.p[10] = 0.5;          // zero trailing-edge camber offset
  return params;
}

}  // namespace geoops::testing
