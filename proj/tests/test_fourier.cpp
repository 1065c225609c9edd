#include <catch2/catch.hpp>

#include <complex>

#include "test_support.hpp"

using namespace geoops;
using namespace geoops::testing;

namespace {

/// Direct O(N^2) DFT/N oracle, independent of the radix-2 path.
std::vector<Complex> direct_dft(const std::vector<Complex>& samples) {
  const std::size_t n = samples.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * kPi * static_cast<double>(k * j % n) / static_cast<double>(n);
      sum += samples[j] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = sum / static_cast<double>(n);
  }
  return out;
}

BoundarySignal circle_signal(double radius, const Vec2& center, std::size_t n) {
  BoundarySignal signal;
  signal.length = 2.0 * kPi * radius;
  signal.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    signal.samples.emplace_back(center.x + radius * std::cos(a), center.y + radius * std::sin(a));
  }
  return signal;
}

}  // namespace

TEST_CASE("arc-length resampling") {
  SECTION("square loop: 4 points per side, exact spacing") {
    ClosedProfile2D square = unit_square_profile();
    const BoundarySignal signal = resample_arclength(square, 16);
    REQUIRE(signal.samples.size() == 16);
    CHECK(signal.length == Approx(4.0).margin(1e-12));
    for (std::size_t k = 0; k < 16; ++k) {
      const Complex delta = signal.samples[(k + 1) % 16] - signal.samples[k];
      CHECK(std::abs(delta) == Approx(0.25).margin(1e-12));
    }
    // Corner points are hit exactly (spacing divides the side length).
    CHECK(signal.samples[0] == Complex(0.0, 0.0));
    CHECK(std::abs(signal.samples[4] - Complex(1.0, 0.0)) <= 1e-12);
  }

  SECTION("already-uniform 64-gon resamples to itself") {
    const ClosedProfile2D gon = regular_polygon_profile(64, 1.3, {0.2, 0.4});
    const BoundarySignal signal = resample_arclength(gon, 64);
    for (std::size_t k = 0; k < 64; ++k) {
      CHECK(std::abs(signal.samples[k] - Complex(gon.points[k].x, gon.points[k].y)) <= 1e-12);
    }
  }

  SECTION("dense circle resampling stays radially accurate") {
    const ClosedProfile2D circle = regular_polygon_profile(1000);
    const BoundarySignal signal = resample_arclength(circle, 256);
    double worst = 0.0;
    for (const Complex& c : signal.samples) worst = std::max(worst, std::abs(std::abs(c) - 1.0));
    CHECK(worst < 1e-4);
  }

  SECTION("argument validation") {
    CHECK_THROWS_AS(resample_arclength(unit_square_profile(), 24), GeoError);  // not a power of 2
    CHECK_THROWS_AS(resample_arclength(unit_square_profile(), 8), GeoError);   // < 16
    ClosedProfile2D degenerate;
    degenerate.points = {{0, 0}, {0, 0}, {0, 0}};
    try {
      resample_arclength(degenerate, 16);
      FAIL("expected ZERO_PERIMETER");
    } catch (const GeoError& e) {
      CHECK(e.code() == ErrorCode::ZERO_PERIMETER);
    }
  }
}

TEST_CASE("planar Fourier descriptor") {
  SECTION("pure circle concentrates at n = 1 and matches direct summation") {
    const BoundarySignal signal = circle_signal(2.0, {0, 0}, 128);
    const PlanarSpectrum spectrum = planar_fd(signal);
    CHECK(std::abs(spectrum.coeff(1)) == Approx(2.0).margin(1e-9));
    for (int n = spectrum.n_min(); n <= spectrum.n_max(); ++n)
      if (n != 1) CHECK(std::abs(spectrum.coeff(n)) < 1e-9);

    const std::vector<Complex> oracle = direct_dft(signal.samples);
    for (int n = spectrum.n_min(); n <= spectrum.n_max(); ++n) {
      const std::size_t bin = static_cast<std::size_t>((n + 128) % 128);
      CHECK(std::abs(spectrum.coeff(n) - oracle[bin]) <= 1e-10);
    }
  }

  SECTION("translation moves only the mean term") {
    const PlanarSpectrum base = planar_fd(circle_signal(2.0, {0, 0}, 128));
    const PlanarSpectrum moved = planar_fd(circle_signal(2.0, {3, 0}, 128));
    CHECK(std::abs(moved.coeff(0) - Complex(3.0, 0.0)) <= 1e-9);
    for (int n = base.n_min(); n <= base.n_max(); ++n)
      if (n != 0) CHECK(std::abs(moved.coeff(n) - base.coeff(n)) <= 1e-9);
  }

  SECTION("F(0) is the sample centroid") {
    Rng rng(3);
    const BoundarySignal signal = resample_arclength(random_star_polygon(rng, 40), 64);
    Complex centroid(0, 0);
    for (const Complex& c : signal.samples) centroid += c;
    centroid /= static_cast<double>(signal.samples.size());
    CHECK(std::abs(planar_fd(signal).coeff(0) - centroid) <= 1e-12);
  }

  SECTION("traversal reversal mirrors magnitudes") {
    Rng rng(9);
    const BoundarySignal signal = resample_arclength(random_star_polygon(rng, 32), 64);
    BoundarySignal reversed = signal;
    for (std::size_t k = 1; k < 64; ++k) reversed.samples[k] = signal.samples[64 - k];
    const PlanarSpectrum fwd = planar_fd(signal);
    const PlanarSpectrum rev = planar_fd(reversed);
    for (int n = -31; n <= 31; ++n)
      CHECK(std::abs(rev.coeff(n)) == Approx(std::abs(fwd.coeff(-n))).margin(1e-12));
  }

  SECTION("inverse transform reproduces the samples") {
    Rng rng(4);
    const BoundarySignal signal = resample_arclength(random_star_polygon(rng, 50), 128);
    const std::vector<Complex> rebuilt = inverse_planar_fd(planar_fd(signal));
    for (std::size_t k = 0; k < 128; ++k)
      CHECK(std::abs(rebuilt[k] - signal.samples[k]) <= 1e-10);
  }
}

TEST_CASE("total energy and the Parseval identity") {
  SECTION("circle at the origin: F_T = r^2") {
    CHECK(total_energy(planar_fd(circle_signal(2.0, {0, 0}, 128))) == Approx(4.0).margin(1e-9));
  }

  SECTION("shifted circle adds the squared offset") {
    const PlanarSpectrum spectrum = planar_fd(circle_signal(2.0, {3, 0}, 128));
    CHECK(total_energy(spectrum) == Approx(13.0).margin(1e-9));
    CHECK(total_energy(spectrum, /*include_centroid=*/false) == Approx(4.0).margin(1e-9));
  }

  SECTION("Parseval holds on random loops") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const BoundarySignal signal =
          resample_arclength(random_star_polygon(rng, 16 + rng.uniform_int(48)), 64);
      double mean_sq = 0.0;
      for (const Complex& c : signal.samples) mean_sq += std::norm(c);
      mean_sq /= static_cast<double>(signal.samples.size());
      CHECK(total_energy(planar_fd(signal)) == Approx(mean_sq).epsilon(1e-10));
    }
  }

  SECTION("rotation about the origin leaves F_T unchanged") {
    Rng rng(33);
    const BoundarySignal signal = resample_arclength(random_star_polygon(rng, 30), 64);
    BoundarySignal rotated = signal;
    const Complex phase = std::polar(1.0, 1.234);
    for (Complex& c : rotated.samples) c *= phase;
    CHECK(total_energy(planar_fd(rotated)) ==
          Approx(total_energy(planar_fd(signal))).epsilon(1e-10));
  }
}

TEST_CASE("sectional descriptor of a cylinder") {
  const TriangleMesh cylinder = cylinder_mesh(1.5, 2.0, 128);
  const FourierGrid grid = sectional_fd_3d(cylinder, 16, 64);

  SECTION("z-spectrum concentrates at m = 0") {
    double total = 0.0, off_axis = 0.0;
    for (int m = -grid.m_max; m <= grid.m_max; ++m)
      for (int n = -grid.n_max; n <= grid.n_max; ++n) {
        const double e = std::norm(grid.at(m, n));
        total += e;
        if (m != 0) off_axis += e;
      }
    CHECK(off_axis < 0.01 * total);
  }

  SECTION("|F(0, 1)| recovers the radius") {
    CHECK(std::abs(grid.at(0, 1)) == Approx(1.5).epsilon(0.02));
  }

  SECTION("doubling the per-section resolution barely moves F_T") {
    const double coarse = total_energy(grid);
    const double fine = total_energy(sectional_fd_3d(cylinder, 16, 128));
    CHECK(std::abs(fine - coarse) / coarse < 1e-3);
  }
}

TEST_CASE("sectional descriptor of a cone matches the 1D radius-ramp oracle") {
  const double base_radius = 1.2, height = 2.0;
  const TriangleMesh cone = cone_mesh(base_radius, height, 64);
  const std::size_t sections = 16;
  const FourierGrid grid = sectional_fd_3d(cone, sections, 64);

  // Apex-sharing lateral triangles make every section an exactly scaled
  // base polygon, so F_j(1) = c1 * rho_j and the m-spectrum of column n=1
  // is proportional to the DFT of the radius ramp.
  const double inset = height / (2.0 * static_cast<double>(sections));
  const double span = height - 2.0 * inset;
  std::vector<double> rho(sections);
  for (std::size_t j = 0; j < sections; ++j) {
    const double z = inset + span * static_cast<double>(j) / static_cast<double>(sections - 1);
    rho[j] = base_radius * (height - z) / height;
  }
  auto ramp_dft = [&](int m) {
    Complex sum(0, 0);
    for (std::size_t j = 0; j < sections; ++j) {
      const double angle = -2.0 * kPi * static_cast<double>(m) * static_cast<double>(j) /
                           static_cast<double>(sections);
      sum += rho[j] * Complex(std::cos(angle), std::sin(angle));
    }
    return std::abs(sum) / static_cast<double>(sections);
  };

  const double denom = std::abs(grid.at(0, 1));
  const double oracle_denom = ramp_dft(0);
  REQUIRE(denom > 0.0);
  for (int m = -7; m <= 8; ++m) {
    const double measured = std::abs(grid.at(m, 1)) / denom;
    const double expected = ramp_dft(m) / oracle_denom;
    CHECK(measured == Approx(expected).margin(1e-6));
  }
}

TEST_CASE("sectional descriptor of a sphere against direct double summation") {
  const TriangleMesh sphere = icosphere_mesh(4);
  const std::size_t sections = 16, per_section = 64;
  const FourierGrid grid = sectional_fd_3d(sphere, sections, per_section);

  // Independent route: extract the same section loops and apply the double
  // DFT by direct summation.
  const auto [lo, hi] = sphere.bounds();
  const double range = hi.z - lo.z;
  const double inset = range / (2.0 * static_cast<double>(sections));
  const double span = range - 2.0 * inset;

  std::vector<std::vector<Complex>> section_samples;
  for (std::size_t j = 0; j < sections; ++j) {
    const double z = lo.z + inset + span * static_cast<double>(j) / static_cast<double>(sections - 1);
    section_samples.push_back(resample_arclength(extract_section_loop(sphere, z), per_section).samples);
  }

  auto direct_grid = [&](int m, int n) {
    Complex sum(0, 0);
    for (std::size_t j = 0; j < sections; ++j) {
      Complex f_jn(0, 0);
      for (std::size_t k = 0; k < per_section; ++k) {
        const double angle = -2.0 * kPi * static_cast<double>(n) * static_cast<double>(k) /
                             static_cast<double>(per_section);
        f_jn += section_samples[j][k] * Complex(std::cos(angle), std::sin(angle));
      }
      f_jn /= static_cast<double>(per_section);
      const double angle_z = -2.0 * kPi * static_cast<double>(m) * static_cast<double>(j) /
                             static_cast<double>(sections);
      sum += f_jn * Complex(std::cos(angle_z), std::sin(angle_z));
    }
    return sum / static_cast<double>(sections);
  };

  for (int m = -static_cast<int>(sections) / 2 + 1; m <= static_cast<int>(sections) / 2; ++m)
    for (int n = -static_cast<int>(per_section) / 2 + 1; n <= static_cast<int>(per_section) / 2;
         ++n)
      CHECK(std::abs(grid.at(m, n) - direct_grid(m, n)) <= 1e-10);

  // Energy concentrates in the first in-section harmonic and at small
  // section-axis frequencies for a sphere.
  double total = 0.0, first_harmonic = 0.0, low_m = 0.0;
  for (int m = -grid.m_max; m <= grid.m_max; ++m)
    for (int n = -grid.n_max; n <= grid.n_max; ++n) {
      const double e = std::norm(grid.at(m, n));
      total += e;
      if (n == 1 || n == -1) first_harmonic += e;
      if (std::abs(m) <= 2) low_m += e;
    }
  CHECK(first_harmonic > 0.9 * total);
  CHECK(low_m > 0.95 * total);
}

TEST_CASE("sectional descriptor failure modes") {
  SECTION("torus sections yield two loops") {
    try {
      sectional_fd_3d(torus_mesh(2.0, 0.5, 48, 24), 16, 64);
      FAIL("expected MULTI_LOOP_SECTION");
    } catch (const GeoError& e) {
      CHECK(e.code() == ErrorCode::MULTI_LOOP_SECTION);
    }
  }

  SECTION("open meshes are rejected") {
    try {
      sectional_fd_3d(open_tetrahedron_mesh(), 16, 64);
      FAIL("expected NOT_WATERTIGHT");
    } catch (const GeoError& e) {
      CHECK(e.code() == ErrorCode::NOT_WATERTIGHT);
    }
  }

  SECTION("resolution arguments must be powers of two") {
    CHECK_THROWS_AS(sectional_fd_3d(icosphere_mesh(2), 12, 64), GeoError);
    CHECK_THROWS_AS(sectional_fd_3d(icosphere_mesh(2), 16, 48), GeoError);
  }
}

TEST_CASE("grid Parseval: F_T equals the mean squared sample magnitude") {
  const TriangleMesh cylinder = cylinder_mesh(1.0, 1.0, 64);
  const std::size_t sections = 8, per_section = 32;
  const FourierGrid grid = sectional_fd_3d(cylinder, sections, per_section);

  const auto [lo, hi] = cylinder.bounds();
  const double range = hi.z - lo.z;
  const double inset = range / (2.0 * static_cast<double>(sections));
  const double span = range - 2.0 * inset;
  double mean_sq = 0.0;
  for (std::size_t j = 0; j < sections; ++j) {
    const double z = lo.z + inset + span * static_cast<double>(j) / static_cast<double>(sections - 1);
    const auto samples = resample_arclength(extract_section_loop(cylinder, z), per_section).samples;
    for (const Complex& c : samples) mean_sq += std::norm(c);
  }
  mean_sq /= static_cast<double>(sections * per_section);
  CHECK(total_energy(grid) == Approx(mean_sq).epsilon(1e-10));
}
