#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "geoops/curvature.hpp"
#include "geoops/fourier.hpp"
#include "geoops/moments.hpp"
#include "geoops/shapes.hpp"

namespace geoops {

/// Resolutions and orders used when assembling GO vectors; one struct so a
/// dataset's provenance can be echoed verbatim into sidecar files.
struct GoConfig {
  int moment_order_2d = 10;
  int moment_order_3d = 5;
  MomentVariant moment_variant = MomentVariant::RAW;
  std::size_t fd_samples = 256;      // arc-length resampling for 2D profiles
  std::size_t fd_sections = 64;      // section count for 3D surfaces
  std::size_t fd_per_section = 64;   // per-section resampling for 3D surfaces
  bool ft_include_centroid = true;
};

/// Assembled feature record for one design: parameters (or flattened
/// discretisation), moments, total curvature and Fourier total energy.
struct GoVector {
  std::string design_id;
  std::vector<double> params;
  MomentVector moments;
  double total_curvature = 0.0;
  double total_energy = 0.0;
  bool has_params = false;
  bool has_moments = false;
  bool has_curvature = false;
  bool has_energy = false;
};

/// Which GO components a flattened row carries.
struct ComboSpec {
  bool include_p = true;
  bool include_m = false;
  bool include_k = false;
  bool include_ft = false;

  /// '+'-joined so labels can sit in CSV fields.
  std::string label() const {
    std::string out;
    auto append = [&out](const char* name) {
      if (!out.empty()) out += "+";
      out += name;
    };
    if (include_p) append("p");
    if (include_m) append("m");
    if (include_k) append("k");
    if (include_ft) append("ft");
    return out;
  }

  static ComboSpec parse(const std::string& label) {
    ComboSpec combo{false, false, false, false};
    std::string token;
    auto flush = [&]() {
      if (token == "p") combo.include_p = true;
      else if (token == "m") combo.include_m = true;
      else if (token == "k") combo.include_k = true;
      else if (token == "ft") combo.include_ft = true;
      else if (!token.empty())
        throw GeoError(ErrorCode::INVALID_ARGUMENT, "unknown combo component '" + token + "'");
      token.clear();
    };
    for (char c : label) {
      if (c == ',' || c == '+' || c == ' ')
        flush();
      else
        token += c;
    }
    flush();
    if (!combo.include_p && !combo.include_m && !combo.include_k && !combo.include_ft)
      throw GeoError(ErrorCode::INVALID_ARGUMENT, "combo selects no components");
    return combo;
  }
};

namespace detail {

inline MomentVector apply_variant(MomentVector mv, MomentVariant variant) {
  if (variant == MomentVariant::RAW) return mv;
  MomentVector central = to_central(mv);
  if (variant == MomentVariant::CENTRAL) return central;
  return to_scale_normalised(central);
}

template <typename Fn>
auto annotate_design(const std::string& design_id, Fn&& fn) {
  try {
    return fn();
  } catch (const GeoError& e) {
    throw GeoError(e.code(), "design '" + design_id + "': " + e.what(), e.line());
  }
}

}  // namespace detail

/// GO assembly for a 2D profile. When `params` is absent, P falls back to
/// the flattened point coordinates (x0, y0, x1, y1, ...).
inline GoVector assemble_go(const ClosedProfile2D& profile,
                            const std::optional<std::vector<double>>& params,
                            const GoConfig& config, const std::string& design_id = "") {
  return detail::annotate_design(design_id, [&] {
    GoVector go;
    go.design_id = design_id;
    if (params) {
      go.params = *params;
    } else {
      go.params.reserve(profile.points.size() * 2);
      for (const Vec2& p : profile.points) {
        go.params.push_back(p.x);
        go.params.push_back(p.y);
      }
    }
    go.has_params = true;
    go.moments = detail::apply_variant(moments_2d(profile, config.moment_order_2d),
                                       config.moment_variant);
    go.has_moments = true;
    go.total_curvature = profile_total_curvature(profile);
    go.has_curvature = true;
    go.total_energy = total_energy(planar_fd(resample_arclength(profile, config.fd_samples)),
                                   config.ft_include_centroid);
    go.has_energy = true;
    return go;
  });
}

/// GO assembly for a triangle mesh.
inline GoVector assemble_go(const TriangleMesh& mesh,
                            const std::optional<std::vector<double>>& params,
                            const GoConfig& config, const std::string& design_id = "") {
  return detail::annotate_design(design_id, [&] {
    GoVector go;
    go.design_id = design_id;
    if (params) {
      go.params = *params;
    } else {
      go.params.reserve(mesh.vertices.size() * 3);
      for (const Vec3& v : mesh.vertices) {
        go.params.push_back(v.x);
        go.params.push_back(v.y);
        go.params.push_back(v.z);
      }
    }
    go.has_params = true;
    go.moments = detail::apply_variant(moments_3d(mesh, config.moment_order_3d),
                                       config.moment_variant);
    go.has_moments = true;
    go.total_curvature = total_curvature_mesh(mesh).total_curvature;
    go.has_curvature = true;
    go.total_energy = total_energy(
        sectional_fd_3d(mesh, config.fd_sections, config.fd_per_section),
        config.ft_include_centroid);
    go.has_energy = true;
    return go;
  });
}

struct Standardisation {
  std::vector<double> mean;
  std::vector<double> stddev;  // constant columns carry 1 here
};

/// N designs x D features with column metadata. Column order is fixed:
/// P, then moments in graded-lex order, then k, then ft.
struct DesignMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;
  std::vector<std::string> design_ids;
  std::optional<Standardisation> standardisation;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

/// sign(x) * log10(1 + |x|); tames the many-decades spread of raw moments.
inline double signed_log(double x) {
  return (x < 0.0 ? -1.0 : 1.0) * std::log10(1.0 + std::abs(x));
}

/// Z-scores every column in place using the matrix's own statistics
/// (population std; constant columns get std 1, leaving them centred).
inline Standardisation standardise_columns(Eigen::MatrixXd& values) {
  Standardisation st;
  const Eigen::Index n = values.rows();
  st.mean.resize(static_cast<std::size_t>(values.cols()));
  st.stddev.resize(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    const double mean = values.col(c).mean();
    const double var = (values.col(c).array() - mean).square().sum() / static_cast<double>(n);
    double sd = std::sqrt(var);
    if (!(sd > 1e-30)) sd = 1.0;
    values.col(c) = (values.col(c).array() - mean) / sd;
    st.mean[static_cast<std::size_t>(c)] = mean;
    st.stddev[static_cast<std::size_t>(c)] = sd;
  }
  return st;
}

// Dots, not commas, inside the bracket: these names are CSV column headers.
inline std::string moment_column_name(const MomentEntry& e, int dim) {
  std::string name = "m[" + std::to_string(e.exps[0]) + "." + std::to_string(e.exps[1]);
  if (dim == 3) name += "." + std::to_string(e.exps[2]);
  return name + "]";
}

/// Flattens GO vectors into a design matrix per the combo selection.
inline DesignMatrix build_matrix(const std::vector<GoVector>& gos, const ComboSpec& combo,
                                 bool standardise = true, bool apply_signed_log = false) {
  if (gos.empty()) throw GeoError(ErrorCode::INVALID_ARGUMENT, "no designs");
  if (!combo.include_p && !combo.include_m && !combo.include_k && !combo.include_ft)
    throw GeoError(ErrorCode::INVALID_ARGUMENT, "combo selects no components");

  for (const GoVector& go : gos) {
    auto missing = [&](const char* component) {
      throw GeoError(ErrorCode::MISSING_COMPONENT,
                     "design '" + go.design_id + "' lacks component " + component);
    };
    if (combo.include_p && !go.has_params) missing("p");
    if (combo.include_m && !go.has_moments) missing("m");
    if (combo.include_k && !go.has_curvature) missing("k");
    if (combo.include_ft && !go.has_energy) missing("ft");
  }

  const GoVector& first = gos.front();
  std::vector<std::string> names;
  if (combo.include_p)
    for (std::size_t i = 0; i < first.params.size(); ++i) names.push_back("p" + std::to_string(i));
  if (combo.include_m)
    for (const MomentEntry& e : first.moments.entries)
      names.push_back(moment_column_name(e, first.moments.dim));
  if (combo.include_k) names.push_back("k");
  if (combo.include_ft) names.push_back("ft");

  DesignMatrix matrix;
  matrix.column_names = names;
  matrix.values.resize(static_cast<Eigen::Index>(gos.size()), static_cast<Eigen::Index>(names.size()));
  matrix.design_ids.reserve(gos.size());

  for (std::size_t row = 0; row < gos.size(); ++row) {
    const GoVector& go = gos[row];
    matrix.design_ids.push_back(go.design_id);
    Eigen::Index col = 0;
    if (combo.include_p) {
      if (go.params.size() != first.params.size())
        throw GeoError(ErrorCode::DIMENSION_MISMATCH,
                       "design '" + go.design_id + "' has a different parameter length");
      for (double v : go.params) matrix.values(static_cast<Eigen::Index>(row), col++) = v;
    }
    if (combo.include_m) {
      if (go.moments.entries.size() != first.moments.entries.size() ||
          go.moments.dim != first.moments.dim)
        throw GeoError(ErrorCode::DIMENSION_MISMATCH,
                       "design '" + go.design_id + "' has a different moment layout");
      for (const MomentEntry& e : go.moments.entries)
        matrix.values(static_cast<Eigen::Index>(row), col++) = e.value;
    }
    if (combo.include_k) matrix.values(static_cast<Eigen::Index>(row), col++) = go.total_curvature;
    if (combo.include_ft) matrix.values(static_cast<Eigen::Index>(row), col++) = go.total_energy;
  }

  if (apply_signed_log)
    matrix.values = matrix.values.unaryExpr([](double v) { return signed_log(v); });
  if (standardise) matrix.standardisation = standardise_columns(matrix.values);
  return matrix;
}

/// Latin-hypercube sample of [0,1]^dim: one point per stratum and dimension,
/// deterministic under the seed.
inline std::vector<std::vector<double>> lhs_sample(std::size_t dim, std::size_t n,
                                                   std::uint64_t seed) {
  if (dim < 1 || n < 1) throw GeoError(ErrorCode::INVALID_ARGUMENT, "dim and n must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> samples(n, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> strata(n);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < n; ++i) strata[i] = i;
    rng.shuffle(strata);
    for (std::size_t i = 0; i < n; ++i)
      samples[i][d] = (static_cast<double>(strata[i]) + rng.uniform01()) / static_cast<double>(n);
  }
  return samples;
}

}  // namespace geoops
