#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "geoops/sectioning.hpp"
#include "geoops/shapes.hpp"

namespace geoops {

enum class MomentVariant { RAW, CENTRAL, CENTRAL_SCALE_NORMALISED };

inline const char* to_string(MomentVariant v) {
  switch (v) {
    case MomentVariant::RAW: return "RAW";
    case MomentVariant::CENTRAL: return "CENTRAL";
    case MomentVariant::CENTRAL_SCALE_NORMALISED: return "CENTRAL_SCALE_NORMALISED";
  }
  return "UNKNOWN";
}

struct MomentEntry {
  std::array<int, 3> exps;  // (p, q, r); r stays 0 in 2D
  double value;

  int order() const { return exps[0] + exps[1] + exps[2]; }
};

/// All geometric moments with total order <= order_max, in graded
/// lexicographic order (grade ascending; within a grade the leading exponent
/// descends, matching the conventional M^2 listing
/// {M^200, M^110, M^101, M^020, M^011, M^002}).
struct MomentVector {
  int order_max = 0;
  int dim = 3;
  MomentVariant variant = MomentVariant::RAW;
  std::vector<MomentEntry> entries;

  double value(int p, int q, int r = 0) const {
    for (const MomentEntry& e : entries)
      if (e.exps[0] == p && e.exps[1] == q && e.exps[2] == r) return e.value;
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "moment exponents out of range");
  }

  double order0() const { return entries.front().value; }
};

inline constexpr int kMaxMomentOrder = 16;

/// Exponent tuples with p+q(+r) <= s, graded-lex.
inline std::vector<std::array<int, 3>> moment_exponents(int s, int dim) {
  std::vector<std::array<int, 3>> exps;
  for (int j = 0; j <= s; ++j) {
    for (int p = j; p >= 0; --p) {
      if (dim == 2) {
        exps.push_back({p, j - p, 0});
      } else {
        for (int q = j - p; q >= 0; --q) exps.push_back({p, q, j - p - q});
      }
    }
  }
  return exps;
}

/// Moment-vector length for the given order; exclude_first drops the
/// always-zero order-1 entries of central variants.
inline std::size_t moment_cardinality(int s, int dim, bool exclude_first = false) {
  if (s < 0) throw GeoError(ErrorCode::INVALID_ARGUMENT, "order must be nonnegative");
  std::size_t n;
  if (dim == 3) {
    const std::size_t su = static_cast<std::size_t>(s);
    n = (su + 1) * (su + 2) * (su + 3) / 6;
    if (exclude_first && s >= 1) n -= 3;
  } else if (dim == 2) {
    const std::size_t su = static_cast<std::size_t>(s);
    n = (su + 1) * (su + 2) / 2;
    if (exclude_first && s >= 1) n -= 2;
  } else {
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "dim must be 2 or 3");
  }
  return n;
}

namespace detail {

inline const double* factorial_table() {
  static const auto table = [] {
    std::array<double, 64> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table.data();
}

/// Exact integral of x(t)^ex * y(t)^ey over t in [0,1] for affine
/// x(t) = x0 + t dx, y(t) = y0 + t dy (binomial expansion).
inline double line_monomial_integral(double x0, double dx, double y0, double dy, int ex, int ey) {
  std::vector<double> x_terms(ex + 1), y_terms(ey + 1);
  double dx_pow = 1.0;
  for (int i = 0; i <= ex; ++i) {
    x_terms[i] = binomial(ex, i) * std::pow(x0, ex - i) * dx_pow;
    dx_pow *= dx;
  }
  double dy_pow = 1.0;
  for (int j = 0; j <= ey; ++j) {
    y_terms[j] = binomial(ey, j) * std::pow(y0, ey - j) * dy_pow;
    dy_pow *= dy;
  }
  double sum = 0.0;
  for (int i = 0; i <= ex; ++i)
    for (int j = 0; j <= ey; ++j) sum += x_terms[i] * y_terms[j] / static_cast<double>(i + j + 1);
  return sum;
}

/// Dense bivariate polynomial in (u, v), coeff(i, j) for u^i v^j.
struct PolyUV {
  int degree;
  std::vector<double> coeff;  // (degree+1) x (degree+1), row-major in i

  explicit PolyUV(int deg) : degree(deg), coeff(static_cast<std::size_t>(deg + 1) * (deg + 1), 0.0) {}

  double& at(int i, int j) { return coeff[static_cast<std::size_t>(i) * (degree + 1) + j]; }
  double get(int i, int j) const {
    return coeff[static_cast<std::size_t>(i) * (degree + 1) + j];
  }
};

/// (a + b u + c v)^e expanded over the unit triangle's parameters.
inline PolyUV trinomial_power(double a, double b, double c, int e, int target_degree) {
  PolyUV poly(target_degree);
  std::vector<double> a_pow(e + 1), b_pow(e + 1), c_pow(e + 1);
  a_pow[0] = b_pow[0] = c_pow[0] = 1.0;
  for (int i = 1; i <= e; ++i) {
    a_pow[i] = a_pow[i - 1] * a;
    b_pow[i] = b_pow[i - 1] * b;
    c_pow[i] = c_pow[i - 1] * c;
  }
  for (int i = 0; i <= e; ++i)
    for (int j = 0; j <= e - i; ++j)
      poly.at(i, j) = binomial(e, i) * binomial(e - i, j) * b_pow[i] * c_pow[j] * a_pow[e - i - j];
  return poly;
}

inline PolyUV multiply(const PolyUV& lhs, const PolyUV& rhs, int target_degree) {
  PolyUV out(target_degree);
  for (int i = 0; i <= lhs.degree; ++i)
    for (int j = 0; j <= lhs.degree - i; ++j) {
      const double c1 = lhs.get(i, j);
      if (c1 == 0.0) continue;
      for (int k = 0; k <= rhs.degree; ++k) {
        if (i + k > target_degree) break;
        for (int l = 0; l <= rhs.degree - k; ++l) {
          if (i + k + j + l > target_degree) break;
          const double c2 = rhs.get(k, l);
          if (c2 != 0.0) out.at(i + k, j + l) += c1 * c2;
        }
      }
    }
  return out;
}

/// Exact integral of x^ex y^ey z^ez over one triangle's affine image of the
/// unit parameter triangle (without the area Jacobian; the caller multiplies
/// by the unnormalised normal component).
inline double triangle_monomial_integral(const Vec3& a, const Vec3& b, const Vec3& c, int ex,
                                         int ey, int ez) {
  const int deg = ex + ey + ez;
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  PolyUV poly = trinomial_power(a.x, e1.x, e2.x, ex, deg);
  poly = multiply(poly, trinomial_power(a.y, e1.y, e2.y, ey, deg), deg);
  poly = multiply(poly, trinomial_power(a.z, e1.z, e2.z, ez, deg), deg);

  const double* fact = factorial_table();
  double sum = 0.0;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; j <= deg - i; ++j) {
      const double coeff = poly.get(i, j);
      if (coeff != 0.0) sum += coeff * fact[i] * fact[j] / fact[i + j + 2];
    }
  return sum;
}

inline void check_order(int s) {
  if (s < 0) throw GeoError(ErrorCode::INVALID_ARGUMENT, "order must be nonnegative");
  if (s > kMaxMomentOrder)
    throw GeoError(ErrorCode::ORDER_TOO_LARGE,
                   "moment order above " + std::to_string(kMaxMomentOrder));
}

}  // namespace detail

/// M^{p,q} = integral of x^p y^q over the profile interior, evaluated exactly
/// per boundary edge via Green's theorem. Output is normalised to CCW
/// orientation regardless of the input loop direction.
inline MomentVector moments_2d(const ClosedProfile2D& profile, int s) {
  detail::check_order(s);
  if (profile.points.size() < 3)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "profile needs at least 3 points");

  MomentVector mv;
  mv.order_max = s;
  mv.dim = 2;
  mv.variant = MomentVariant::RAW;

  const auto exps = moment_exponents(s, 2);
  mv.entries.reserve(exps.size());
  const std::size_t n = profile.points.size();
  const double orientation = profile.is_ccw() ? 1.0 : -1.0;

  for (const auto& e : exps) {
    const int p = e[0], q = e[1];
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = profile.points[i];
      const Vec2& b = profile.points[(i + 1) % n];
      const double dy = b.y - a.y;
      if (dy == 0.0) continue;
      sum += dy * detail::line_monomial_integral(a.x, b.x - a.x, a.y, dy, p + 1, q);
    }
    mv.entries.push_back({e, orientation * sum / static_cast<double>(p + 1)});
  }
  return mv;
}

/// Divergence axis for the 3D surface form; X is the published result, Y and
/// Z serve as internal consistency oracles.
enum class DivergenceAxis { X, Y, Z };

/// M^{p,q,r} = integral of x^p y^q z^r over the solid bounded by the mesh,
/// via the surface form (1/(p+1)) surface-integral x^{p+1} y^q z^r n_x dA
/// with exact per-triangle monomial integration.
inline MomentVector moments_3d(const TriangleMesh& mesh, int s,
                               DivergenceAxis axis = DivergenceAxis::X) {
  detail::check_order(s);
  const ValidityVerdict verdict = check_mesh_validity(mesh);
  if (verdict.has(DefectCode::OPEN_EDGE) || verdict.has(DefectCode::NON_MANIFOLD_EDGE))
    throw GeoError(ErrorCode::NOT_WATERTIGHT, "moments_3d needs a watertight mesh");

  MomentVector mv;
  mv.order_max = s;
  mv.dim = 3;
  mv.variant = MomentVariant::RAW;

  const auto exps = moment_exponents(s, 3);
  mv.entries.reserve(exps.size());

  for (const auto& e : exps) {
    int ex = e[0], ey = e[1], ez = e[2];
    double bump_order;
    switch (axis) {
      case DivergenceAxis::X: bump_order = static_cast<double>(++ex); break;
      case DivergenceAxis::Y: bump_order = static_cast<double>(++ey); break;
      default: bump_order = static_cast<double>(++ez); break;
    }
    double sum = 0.0;
    for (const auto& f : mesh.faces) {
      const Vec3& a = mesh.vertices[f[0]];
      const Vec3& b = mesh.vertices[f[1]];
      const Vec3& c = mesh.vertices[f[2]];
      const Vec3 normal = (b - a).cross(c - a);
      const double n_component = axis == DivergenceAxis::X   ? normal.x
                                 : axis == DivergenceAxis::Y ? normal.y
                                                             : normal.z;
      if (n_component == 0.0) continue;
      sum += n_component * detail::triangle_monomial_integral(a, b, c, ex, ey, ez);
    }
    mv.entries.push_back({e, sum / bump_order});
  }
  return mv;
}

/// Moments about the centroid (binomial shift of the raw vector). Order-1
/// entries vanish; M^0 is unchanged.
inline MomentVector to_central(const MomentVector& mv) {
  if (mv.variant != MomentVariant::RAW)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "to_central expects a RAW moment vector");
  const double m0 = mv.order0();
  if (std::abs(m0) < 1e-14)
    throw GeoError(ErrorCode::ZERO_MEASURE, "zeroth moment vanishes");

  double centroid[3] = {0.0, 0.0, 0.0};
  centroid[0] = mv.value(1, 0, 0) / m0;
  centroid[1] = mv.value(0, 1, 0) / m0;
  if (mv.dim == 3) centroid[2] = mv.value(0, 0, 1) / m0;

  MomentVector out = mv;
  out.variant = MomentVariant::CENTRAL;
  for (MomentEntry& entry : out.entries) {
    const int p = entry.exps[0], q = entry.exps[1], r = entry.exps[2];
    double sum = 0.0;
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= q; ++j)
        for (int k = 0; k <= r; ++k) {
          const double shift = binomial(p, i) * binomial(q, j) * binomial(r, k) *
                               std::pow(-centroid[0], p - i) * std::pow(-centroid[1], q - j) *
                               std::pow(-centroid[2], r - k);
          sum += shift * mv.value(i, j, k);
        }
    entry.value = sum;
  }
  return out;
}

/// Divides each central entry of total order s by (M^0)^(1 + s/dim); the
/// result is invariant to uniform scaling.
inline MomentVector to_scale_normalised(const MomentVector& mv) {
  if (mv.variant != MomentVariant::CENTRAL)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "to_scale_normalised expects CENTRAL moments");
  const double m0 = mv.order0();
  if (m0 < 1e-14) throw GeoError(ErrorCode::ZERO_MEASURE, "zeroth moment vanishes");

  MomentVector out = mv;
  out.variant = MomentVariant::CENTRAL_SCALE_NORMALISED;
  for (MomentEntry& entry : out.entries) {
    const double exponent = 1.0 + static_cast<double>(entry.order()) / static_cast<double>(mv.dim);
    entry.value = entry.value / std::pow(m0, exponent);
  }
  return out;
}

/// Relative residual of the SAC identity m_p = -p M^{p-1,0,0}, with m_p
/// computed by slicing the mesh along x, differencing the sectional area
/// curve and integrating x^p S'(x) by composite trapezoid.
inline double sac_moment_identity_residual(const TriangleMesh& mesh, int p, int n_sections) {
  if (p < 0 || n_sections < 8)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "need p >= 0 and n_sections >= 8");
  const ValidityVerdict verdict = check_mesh_validity(mesh);
  if (verdict.has(DefectCode::OPEN_EDGE) || verdict.has(DefectCode::NON_MANIFOLD_EDGE))
    throw GeoError(ErrorCode::NOT_WATERTIGHT, "SAC slicing needs a watertight mesh");

  const auto [lo, hi] = mesh.bounds();
  const double x0 = lo.x, x1 = hi.x;
  const double range = x1 - x0;
  if (range <= 0.0) throw GeoError(ErrorCode::ZERO_MEASURE, "mesh has no x extent");

  const int n = n_sections;
  const double h = range / static_cast<double>(n - 1);
  std::vector<double> area(n), x(n);
  double max_area = 0.0;
  for (int i = 0; i < n; ++i) {
    x[i] = x0 + h * static_cast<double>(i);
    area[i] = std::abs(section_area(mesh, 0, x[i]));
    max_area = std::max(max_area, area[i]);
  }
  if (max_area <= 0.0) throw GeoError(ErrorCode::ZERO_MEASURE, "all sections empty");

  // Premise S(0) = S(L) = 0, probed just inside the extremes (the extreme
  // planes themselves always give zero area by the clipping convention).
  const double eps = range * 1e-8;
  const double area_front = std::abs(section_area(mesh, 0, x0 + eps));
  const double area_back = std::abs(section_area(mesh, 0, x1 - eps));
  if (area_front >= 1e-6 * max_area || area_back >= 1e-6 * max_area)
    throw GeoError(ErrorCode::ASSUMPTION_VIOLATED, "sectional area does not vanish at x extremes");

  // Trapezoid of x^p S'(x) with one-sided end differences, assembled as
  // coefficients on S_i. Interior coefficients cancel exactly for p = 0, so
  // the telescoped integral of S' comes out as an exact zero.
  std::vector<double> weight(n);  // trapezoid weight times x^p
  weight[0] = 0.5 * std::pow(x[0], p);
  weight[n - 1] = 0.5 * std::pow(x[n - 1], p);
  for (int i = 1; i < n - 1; ++i) weight[i] = std::pow(x[i], p);

  std::vector<double> coeff(n, 0.0);
  coeff[0] -= weight[0] / h;
  coeff[1] += weight[0] / h;
  coeff[n - 2] -= weight[n - 1] / h;
  coeff[n - 1] += weight[n - 1] / h;
  for (int i = 1; i < n - 1; ++i) {
    const double half = weight[i] / (2.0 * h);
    coeff[i - 1] -= half;
    coeff[i + 1] += half;
  }
  double m_p = 0.0;
  for (int i = 0; i < n; ++i) m_p += h * coeff[i] * area[i];

  double reference = 0.0;
  if (p >= 1) {
    const MomentVector mv = moments_3d(mesh, p - 1);
    reference = -static_cast<double>(p) * mv.value(p - 1, 0, 0);
  }
  return std::abs(m_p - reference) / std::max(std::abs(m_p), 1e-30);
}

/// CSV rows `p,q,r,value` (header included).
inline void write_moments_csv(std::ostream& out, const MomentVector& mv) {
  out << "p,q,r,value\n";
  for (const MomentEntry& e : mv.entries) {
    out << e.exps[0] << "," << e.exps[1] << "," << e.exps[2] << "," << format_double(e.value)
        << "\n";
  }
}

/// JSON object keyed by exponent strings like "2,0,1".
inline std::string moments_to_json(const MomentVector& mv) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < mv.entries.size(); ++i) {
    const MomentEntry& e = mv.entries[i];
    if (i) out << ",";
    out << "\"" << e.exps[0] << "," << e.exps[1];
    if (mv.dim == 3) out << "," << e.exps[2];
    out << "\":" << format_double(e.value);
  }
  out << "}";
  return out.str();
}

}  // namespace geoops
